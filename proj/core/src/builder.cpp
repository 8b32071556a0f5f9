#include "radiomap/builder.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>

#include "radiomap/error.hpp"

namespace radiomap {

bool operator==(const CellState& a, const CellState& b) noexcept {
  return a.kind == b.kind && a.ema_count == b.ema_count &&
         std::memcmp(&a.value, &b.value, sizeof(double)) == 0;
}

void SmoothingConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw Error(ErrorCode::InvalidArgument, "alpha must satisfy 0 < alpha < 1");
}

void BuildParams::validate() const {
  smoothing.validate();
  if (sigma_window < 2) throw Error(ErrorCode::InvalidArgument, "sigma window must be >= 2");
  if (stuck_min_len < 2) throw Error(ErrorCode::InvalidArgument, "stuck min_len must be >= 2");
}

RadioMap::RadioMap(GridSpec spec) : spec_(spec) {
  validate(spec_);
  cells_.assign(spec_.cell_count(), CellState::empty());
}

std::size_t RadioMap::count(CellKind kind) const noexcept {
  return static_cast<std::size_t>(
      std::count_if(cells_.begin(), cells_.end(), [kind](const CellState& c) { return c.kind == kind; }));
}

std::vector<double> RadioMap::values() const {
  std::vector<double> out;
  out.reserve(cells_.size());
  for (const auto& c : cells_) out.push_back(c.value);
  return out;
}

CellState ema_update(const CellState& cell, double v, const SmoothingConfig& cfg) {
  if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "RSSI must be finite");
  if (!cell.is_measured()) return CellState::measured(v, 1);
  const double prev = cell.value;
  const double next = cfg.printed_recurrence ? v + (1.0 - cfg.alpha) * prev
                                             : cfg.alpha * v + (1.0 - cfg.alpha) * prev;
  return CellState::measured(next, cell.ema_count + 1);
}

std::vector<GridIndex> disc_cells(const GridSpec& spec, const LocalPoint& center, double radius) {
  std::vector<GridIndex> out;
  if (!(radius >= 0.0) || !std::isfinite(radius)) return out;
  const double cs = spec.cell_size;
  // Candidate rows/cols whose centers can be within radius.
  auto lo = [&](double c) { return std::max(0.0, std::floor((c - radius) / cs - 0.5)); };
  auto hi = [&](double c, std::size_t n) {
    return std::min(static_cast<double>(n) - 1.0, std::ceil((c + radius) / cs - 0.5));
  };
  const double r0 = lo(center.y), r1 = hi(center.y, spec.rows);
  const double c0 = lo(center.x), c1 = hi(center.x, spec.cols);
  if (r1 < r0 || c1 < c0) return out;
  for (auto r = static_cast<std::size_t>(r0); r <= static_cast<std::size_t>(r1); ++r)
    for (auto c = static_cast<std::size_t>(c0); c <= static_cast<std::size_t>(c1); ++c)
      if (distance(grid_center(spec, {r, c}), center) <= radius) out.push_back({r, c});
  return out;
}

std::size_t disc_update(RadioMap& map, const LocalPoint& center, const SigmaEstimate& sigma,
                        double v, const SmoothingConfig& cfg) {
  const GridIndex home = to_grid_index(map.spec(), center);
  auto cells = disc_cells(map.spec(), center, 2.0 * sigma.sigma);
  if (cells.empty()) cells.push_back(home);
  for (const auto& idx : cells) map.at(idx) = ema_update(map.at(idx), v, cfg);
  return cells.size();
}

namespace {

struct Known {
  LocalPoint p;
  double value;
};

struct KnownSet {
  std::vector<Known> points;
  double lo = 0.0;
  double hi = 0.0;
};

KnownSet known_cells(const RadioMap& map) {
  KnownSet set;
  const auto& spec = map.spec();
  const auto cells = map.cells();
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (cells[i].is_measured()) set.points.push_back({grid_center(spec, spec.unflat(i)), cells[i].value});
  if (set.points.empty())
    throw Error(ErrorCode::NoMeasurements, "radio map has no measured cells to interpolate from");
  const auto [mn, mx] = std::minmax_element(set.points.begin(), set.points.end(),
                                            [](const Known& a, const Known& b) { return a.value < b.value; });
  set.lo = mn->value;
  set.hi = mx->value;
  return set;
}

double shepard(const KnownSet& known, const LocalPoint& p) {
  // Offsetting by the minimum keeps a constant field exact and the result
  // inside [lo, hi] up to the final clamp, which only absorbs rounding.
  double num = 0.0;
  double den = 0.0;
  for (const auto& k : known.points) {
    const double d = distance(p, k.p);
    if (d == 0.0) return k.value;
    const double w = 1.0 / d;
    num += w * (k.value - known.lo);
    den += w;
  }
  return std::clamp(known.lo + num / den, known.lo, known.hi);
}

}  // namespace

double idw_at(const RadioMap& map, const LocalPoint& p) { return shepard(known_cells(map), p); }

RadioMap idw_interpolate(const RadioMap& map) {
  RadioMap out = map;
  if (map.complete()) return out;
  const KnownSet known = known_cells(map);
  const auto& spec = map.spec();
  for (std::size_t r = 0; r < spec.rows; ++r)
    for (std::size_t c = 0; c < spec.cols; ++c) {
      auto& cell = out.at(r, c);
      if (cell.kind == CellKind::Empty)
        cell = CellState::interpolated(shepard(known, grid_center(spec, {r, c})));
    }
  return out;
}

namespace {

struct Prepared {
  static constexpr std::size_t kDropped = static_cast<std::size_t>(-1);

  SurveyTrace trace;  // projection-domain samples only, stuck segments repaired
  std::vector<std::size_t> index;  // input position -> position in trace, or kDropped
  std::vector<LocalPoint> local;
  std::vector<bool> usable;
  std::vector<SigmaEstimate> sigma;
};

Prepared prepare_trace(const SurveyTrace& input, const GridSpec& spec, const BuildParams& params,
                       MapMeta& meta) {
  Prepared p;
  p.trace.source_id = input.source_id;
  for (const auto& s : input.samples) {
    try {
      (void)to_local(spec, s.pos);
      p.index.push_back(p.trace.size());
      p.trace.samples.push_back(s);
    } catch (const Error&) {
      p.index.push_back(Prepared::kDropped);
      ++meta.stats.dropped_out_of_grid;
    }
  }
  p.usable.assign(p.trace.size(), true);

  if (params.stuck_correction) {
    // Segments are disjoint, so repairing them one by one is order independent.
    for (const auto& seg : detect_stuck_segments(p.trace, params.stuck_min_len)) {
      ++meta.stats.stuck_segments;
      DefectRecord rec{input.source_id, seg.t_s, seg.t_f, seg.frozen_count, seg.has_resume()};
      if (seg.has_resume()) {
        p.trace = interpolate_stuck_positions(p.trace, seg, spec);
        ++meta.stats.stuck_repaired;
        meta.stats.frozen_samples_repaired += seg.frozen_count;
      } else {
        ++meta.stats.stuck_unrepairable;
        for (std::size_t k = seg.first_frozen; k <= seg.last_frozen(); ++k) p.usable[k] = false;
      }
      meta.defects.push_back(std::move(rec));
    }
  }

  p.local.reserve(p.trace.size());
  for (const auto& s : p.trace.samples) p.local.push_back(to_local(spec, s.pos));
  if (params.disc_update)
    p.sigma = rolling_sigmas(p.local, params.sigma_window);
  else
    p.sigma.assign(p.local.size(), SigmaEstimate{0.0, 1});
  return p;
}

// Fuses per-source EMA layers: a cell measured by several sources takes the
// mean of their smoothed values.
RadioMap fuse_layers(const GridSpec& spec, const std::vector<RadioMap>& layers) {
  RadioMap out(spec);
  if (layers.size() == 1) {
    out = layers.front();
    return out;
  }
  for (std::size_t i = 0; i < spec.cell_count(); ++i) {
    const auto idx = spec.unflat(i);
    double sum = 0.0;
    std::size_t n = 0;
    std::uint32_t updates = 0;
    for (const auto& layer : layers) {
      const auto& c = layer.at(idx);
      if (!c.is_measured()) continue;
      sum += c.value;
      ++n;
      updates += c.ema_count;
    }
    if (n) out.at(idx) = CellState::measured(sum / static_cast<double>(n), updates);
  }
  return out;
}

}  // namespace

BuildResult build_map(const std::vector<SurveyTrace>& traces, const GridSpec& spec,
                      const BuildParams& params) {
  validate(spec);
  params.validate();

  MapMeta meta;
  meta.params = params;

  // Merge first, then split by sample source so stuck repair, rolling sigma
  // and EMA state are all per collector no matter how the input was grouped.
  const SurveyTrace merged = merge_traces(traces);
  meta.stats.samples_in = merged.size();

  std::map<std::string, std::vector<std::size_t>> by_source;
  for (std::size_t i = 0; i < merged.size(); ++i)
    by_source[merged.samples[i].source_id].push_back(i);

  struct Slot {
    std::size_t layer;
    std::size_t pos;  // index within the per-source trace
  };
  std::vector<Slot> slot_of(merged.size());
  std::vector<Prepared> prepared;
  prepared.reserve(by_source.size());
  for (const auto& [source, indices] : by_source) {
    SurveyTrace sub{{}, source};
    sub.samples.reserve(indices.size());
    for (std::size_t k = 0; k < indices.size(); ++k) {
      sub.samples.push_back(merged.samples[indices[k]]);
      slot_of[indices[k]] = {prepared.size(), k};
    }
    meta.sources.push_back(source);
    prepared.push_back(prepare_trace(sub, spec, params, meta));
  }

  std::vector<RadioMap> layers(std::max<std::size_t>(prepared.size(), 1), RadioMap(spec));
  for (std::size_t i = 0; i < merged.size(); ++i) {
    const auto [layer, pos] = slot_of[i];
    const auto& p = prepared[layer];
    if (pos >= p.index.size() || p.index[pos] == Prepared::kDropped) continue;
    const std::size_t k = p.index[pos];
    if (!p.usable[k]) {
      ++meta.stats.dropped_unrepairable;
      continue;
    }
    const auto& center = p.local[k];
    if (!in_grid(spec, center)) {
      ++meta.stats.dropped_out_of_grid;
      continue;
    }
    meta.stats.cell_updates +=
        disc_update(layers[layer], center, p.sigma[k], p.trace.samples[k].rssi, params.smoothing);
    ++meta.stats.samples_applied;
  }

  RadioMap measured = fuse_layers(spec, layers);
  measured.meta = meta;
  RadioMap complete = idw_interpolate(measured);
  complete.meta = std::move(meta);
  return {std::move(measured), std::move(complete)};
}

}  // namespace radiomap
