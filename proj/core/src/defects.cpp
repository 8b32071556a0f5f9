#include "radiomap/defects.hpp"

#include <algorithm>
#include <cmath>

#include "radiomap/error.hpp"

namespace radiomap {

std::vector<StuckSegment> detect_stuck_segments(const SurveyTrace& trace, std::size_t min_len) {
  if (min_len < 2) throw Error(ErrorCode::InvalidArgument, "stuck min_len must be >= 2");
  std::vector<StuckSegment> out;
  const auto& s = trace.samples;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t j = i + 1;
    // Bitwise identity: a moving receiver never repeats a fix exactly.
    while (j < s.size() && s[j].pos.lat == s[i].pos.lat && s[j].pos.lon == s[i].pos.lon) ++j;
    const std::size_t run = j - i;
    if (run >= min_len) {
      StuckSegment seg;
      seg.anchor_index = i;
      seg.first_frozen = i + 1;
      seg.frozen_count = run - 1;
      seg.t_s = s[i].t;
      if (j < s.size()) {
        seg.resume_index = j;
        seg.t_f = s[j].t;
      }
      out.push_back(seg);
    }
    i = j;
  }
  return out;
}

LocalPoint interpolate_position(const LocalPoint& from, const LocalPoint& to, double t_s,
                                double t_f, double t_e) {
  if (!(t_f > t_s)) throw Error(ErrorCode::InvalidArgument, "interpolation needs t_f > t_s");
  const double span = t_f - t_s;
  if (t_e < 0.0 || t_e > span)
    throw Error(ErrorCode::InvalidArgument, "elapsed time outside [0, t_f - t_s]");
  // std::lerp is exact at fraction 0 and 1, so both chord ends are reproduced.
  const double f = t_e / span;
  return {std::lerp(from.x, to.x, f), std::lerp(from.y, to.y, f)};
}

SurveyTrace interpolate_stuck_positions(const SurveyTrace& trace, const StuckSegment& seg,
                                        const GridSpec& frame) {
  if (!seg.resume_index || !seg.t_f)
    throw Error(ErrorCode::NoResumePoint,
                "segment starting at t=" + std::to_string(seg.t_s) + " never resumes");
  const auto resume = *seg.resume_index;
  if (resume >= trace.size() || seg.anchor_index >= resume || seg.frozen_count == 0 ||
      seg.first_frozen <= seg.anchor_index || seg.last_frozen() >= resume)
    throw Error(ErrorCode::InvalidArgument, "segment does not match trace");

  SurveyTrace out = trace;
  const auto& anchor = trace.samples[seg.anchor_index];
  const auto& after = trace.samples[resume];
  const LocalPoint from = to_local(frame, anchor.pos);
  const LocalPoint to = to_local(frame, after.pos);
  for (std::size_t k = seg.first_frozen; k <= seg.last_frozen(); ++k) {
    auto& sample = out.samples[k];
    const double t_e = sample.t - anchor.t;
    sample.pos = to_geo(frame, interpolate_position(from, to, anchor.t, after.t, t_e));
  }
  return out;
}

namespace {

SigmaEstimate window_sigma(std::span<const LocalPoint> w) {
  const double n = static_cast<double>(w.size());
  double mx = 0.0, my = 0.0;
  for (const auto& p : w) {
    mx += p.x;
    my += p.y;
  }
  mx /= n;
  my /= n;
  double vx = 0.0, vy = 0.0;
  for (const auto& p : w) {
    vx += (p.x - mx) * (p.x - mx);
    vy += (p.y - my) * (p.y - my);
  }
  return {std::sqrt(vx / n + vy / n), w.size()};
}

}  // namespace

SigmaEstimate rolling_sigma(std::span<const LocalPoint> positions, std::size_t idx,
                            std::size_t window) {
  if (window < 2) throw Error(ErrorCode::InvalidArgument, "sigma window must be >= 2");
  if (idx >= positions.size()) throw Error(ErrorCode::InvalidArgument, "sample index out of range");
  const std::size_t count = std::min(window, idx + 1);
  if (count < 2)
    throw Error(ErrorCode::InsufficientWindow, "rolling sigma needs at least two samples");
  return window_sigma(positions.subspan(idx + 1 - count, count));
}

SigmaEstimate rolling_sigma(const SurveyTrace& trace, std::size_t idx, const GridSpec& frame,
                            std::size_t window) {
  if (window < 2) throw Error(ErrorCode::InvalidArgument, "sigma window must be >= 2");
  if (idx >= trace.size()) throw Error(ErrorCode::InvalidArgument, "sample index out of range");
  const std::size_t count = std::min(window, idx + 1);
  std::vector<LocalPoint> local;
  local.reserve(count);
  for (std::size_t k = idx + 1 - count; k <= idx; ++k)
    local.push_back(to_local(frame, trace.samples[k].pos));
  return rolling_sigma(local, local.empty() ? 0 : local.size() - 1, window);
}

std::vector<SigmaEstimate> rolling_sigmas(std::span<const LocalPoint> positions,
                                          std::size_t window) {
  if (window < 2) throw Error(ErrorCode::InvalidArgument, "sigma window must be >= 2");
  std::vector<SigmaEstimate> out;
  out.reserve(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (i == 0)
      out.push_back({0.0, 1});
    else
      out.push_back(rolling_sigma(positions, i, window));
  }
  return out;
}

}  // namespace radiomap
