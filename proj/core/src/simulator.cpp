#include "radiomap/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "radiomap/error.hpp"

namespace radiomap {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform in (0, 1], never zero so the log below is finite.
double unit_open(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

// Box-Muller on two hashed words. Written out instead of
// std::normal_distribution so that traces reproduce across standard libraries.
double gaussian(std::uint64_t a, std::uint64_t b) noexcept {
  const double u1 = unit_open(a);
  const double u2 = unit_open(b);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : state_(seed) {}
  double next() {
    const auto a = splitmix64(state_++);
    const auto b = splitmix64(state_++);
    return gaussian(a, b);
  }

 private:
  std::uint64_t state_;
};

std::uint64_t hash_string(const std::string& s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

void PathLossField::validate() const {
  if (!(n > 0.0)) throw Error(ErrorCode::InvalidArgument, "path-loss exponent must be > 0");
  if (!(d0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "reference distance must be > 0");
  if (!(noise_sigma >= 0.0)) throw Error(ErrorCode::InvalidArgument, "shadowing sigma must be >= 0");
  if (!(shadow_cell > 0.0)) throw Error(ErrorCode::InvalidArgument, "shadowing cell must be > 0");
}

double mean_rssi(const PathLossField& field, const LocalPoint& p) {
  if (field.flat) return field.p0;
  const double d = std::max(distance(p, field.tx), field.d0);
  return field.p0 - 10.0 * field.n * std::log10(d / field.d0);
}

double shadowing(const PathLossField& field, const LocalPoint& p) {
  if (field.noise_sigma == 0.0) return 0.0;
  const auto ix = static_cast<std::int64_t>(std::floor(p.x / field.shadow_cell));
  const auto iy = static_cast<std::int64_t>(std::floor(p.y / field.shadow_cell));
  const std::uint64_t key = splitmix64(field.seed ^ splitmix64(static_cast<std::uint64_t>(ix)) ^
                                       splitmix64(static_cast<std::uint64_t>(iy) + 0x5851f42d4c957f2dULL));
  return field.noise_sigma * gaussian(splitmix64(key), splitmix64(key + 1));
}

double truth_rssi(const PathLossField& field, const LocalPoint& p) {
  return mean_rssi(field, p) + shadowing(field, p);
}

std::vector<double> truth_grid(const PathLossField& field, const GridSpec& spec) {
  std::vector<double> out;
  out.reserve(spec.cell_count());
  for (std::size_t i = 0; i < spec.cell_count(); ++i)
    out.push_back(mean_rssi(field, grid_center(spec, spec.unflat(i))));
  return out;
}

void DefectScript::validate() const {
  auto check = [](auto windows, const char* what) {
    for (const auto& w : windows)
      if (!(w.start_t < w.end_t))
        throw Error(ErrorCode::InvalidArgument, std::string(what) + " window needs start < end");
    std::sort(windows.begin(), windows.end(),
              [](const auto& a, const auto& b) { return a.start_t < b.start_t; });
    for (std::size_t i = 1; i < windows.size(); ++i)
      if (windows[i].start_t <= windows[i - 1].end_t)
        throw Error(ErrorCode::OverlappingWindows, std::string(what) + " windows overlap");
  };
  check(stuck_windows, "stuck");
  check(noise_windows, "noise");
  for (const auto& w : noise_windows)
    if (!(w.pos_sigma >= 0.0))
      throw Error(ErrorCode::InvalidArgument, "noise window pos_sigma must be >= 0");
}

std::vector<TimedPoint> sample_polyline(std::span<const LocalPoint> waypoints, double speed,
                                        double t0, double period) {
  if (waypoints.empty()) throw Error(ErrorCode::InvalidArgument, "path needs at least one waypoint");
  if (!(speed > 0.0)) throw Error(ErrorCode::InvalidArgument, "walker speed must be > 0");
  if (!(period > 0.0)) throw Error(ErrorCode::InvalidArgument, "sample period must be > 0");

  std::vector<double> cumulative{0.0};
  for (std::size_t i = 1; i < waypoints.size(); ++i)
    cumulative.push_back(cumulative.back() + distance(waypoints[i - 1], waypoints[i]));
  const double total = cumulative.back();

  std::vector<TimedPoint> out;
  std::size_t seg = 0;
  for (std::size_t k = 0;; ++k) {
    const double elapsed = static_cast<double>(k) * period;
    const double s = elapsed * speed;
    if (s > total) break;
    while (seg + 1 < cumulative.size() - 1 && cumulative[seg + 1] < s) ++seg;
    LocalPoint p = waypoints.front();
    if (waypoints.size() > 1) {
      const double len = cumulative[seg + 1] - cumulative[seg];
      const double f = len > 0.0 ? (s - cumulative[seg]) / len : 0.0;
      p = {std::lerp(waypoints[seg].x, waypoints[seg + 1].x, f),
           std::lerp(waypoints[seg].y, waypoints[seg + 1].y, f)};
    }
    out.push_back({t0 + elapsed, p});
    if (total == 0.0) break;
  }
  return out;
}

std::vector<LocalPoint> lawnmower(const GridSpec& spec, std::size_t row0, std::size_t row1,
                                  std::size_t col0, std::size_t col1, std::size_t row_step) {
  if (row1 < row0 || col1 < col0 || row1 >= spec.rows || col1 >= spec.cols || row_step == 0)
    throw Error(ErrorCode::InvalidArgument, "lawnmower bounds outside grid");
  std::vector<LocalPoint> out;
  bool eastward = true;
  for (std::size_t r = row0; r <= row1; r += row_step) {
    const auto west = grid_center(spec, {r, col0});
    const auto east = grid_center(spec, {r, col1});
    out.push_back(eastward ? west : east);
    out.push_back(eastward ? east : west);
    eastward = !eastward;
  }
  return out;
}

GeneratedTrace generate_trace(const PathLossField& field, std::span<const TimedPoint> path,
                              const DefectScript& script, const GridSpec& frame,
                              std::string source_id, std::uint64_t seed) {
  field.validate();
  script.validate();
  for (std::size_t i = 1; i < path.size(); ++i)
    if (!(path[i].t > path[i - 1].t))
      throw Error(ErrorCode::InvalidArgument, "path timestamps must be strictly increasing");

  GeneratedTrace out;
  out.trace.source_id = source_id;
  GaussianStream noise(splitmix64(seed ^ hash_string(source_id)));

  const StuckWindow* active_stuck = nullptr;
  GeoPoint frozen{};
  for (const auto& wp : path) {
    LocalPoint reported = wp.p;
    for (const auto& w : script.noise_windows) {
      if (wp.t >= w.start_t && wp.t <= w.end_t) {
        reported.x += w.pos_sigma * noise.next();
        reported.y += w.pos_sigma * noise.next();
        break;
      }
    }
    GeoPoint geo = to_geo(frame, reported);

    const StuckWindow* stuck = nullptr;
    for (const auto& w : script.stuck_windows)
      if (wp.t >= w.start_t && wp.t <= w.end_t) stuck = &w;
    if (stuck) {
      if (stuck != active_stuck) frozen = geo;
      geo = frozen;
      reported = to_local(frame, geo);
    }
    active_stuck = stuck;

    out.truth.push_back(wp.p);
    out.reported.push_back(reported);
    out.trace.samples.push_back({wp.t, geo, truth_rssi(field, wp.p), source_id});
  }
  return out;
}

GridIndex argmax_cell(const GridSpec& spec, std::span<const double> values) {
  std::size_t best = 0;
  double best_v = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i)
    if (std::isfinite(values[i]) && values[i] > best_v) {
      best_v = values[i];
      best = i;
    }
  return spec.unflat(best);
}

namespace {

EvalReport score(const GridSpec& spec, std::span<const double> map, std::span<const double> truth) {
  EvalReport r;
  double sq = 0.0;
  for (std::size_t i = 0; i < map.size(); ++i) {
    const double e = map[i] - truth[i];
    sq += e * e;
    r.max_abs_error = std::max(r.max_abs_error, std::abs(e));
  }
  r.cells = map.size();
  r.rmse = map.empty() ? 0.0 : std::sqrt(sq / static_cast<double>(map.size()));
  r.map_argmax = argmax_cell(spec, map);
  return r;
}

}  // namespace

EvalReport evaluate_map(const RadioMap& map, const PathLossField& field) {
  const auto values = map.values();
  const auto truth = truth_grid(field, map.spec());
  EvalReport r = score(map.spec(), values, truth);
  if (in_grid(map.spec(), field.tx)) {
    r.reference_cell = to_grid_index(map.spec(), field.tx);
    r.argmax_match = r.map_argmax == r.reference_cell;
  }
  return r;
}

EvalReport compare_grids(const GridSpec& spec, std::span<const double> map,
                         std::span<const double> truth) {
  if (map.size() != truth.size() || map.size() != spec.cell_count())
    throw Error(ErrorCode::DimensionMismatch, "map and truth grids differ in size");
  EvalReport r = score(spec, map, truth);
  r.reference_cell = argmax_cell(spec, truth);
  r.argmax_match = r.map_argmax == r.reference_cell;
  return r;
}

}  // namespace radiomap
