// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "radiomap/builder.hpp"
#include "radiomap/defects.hpp"
#include "radiomap/scenario.hpp"
#include "radiomap/simulator.hpp"
#include "test_support.hpp"

namespace {

using namespace radiomap;
using radiomap::testing::brute_shepard;
using radiomap::testing::KnownValue;
using radiomap::testing::slurp;
using radiomap::testing::TempDir;

const std::string kScenarioDir = RADIOMAP_SCENARIO_DIR;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

RadioMap random_map(std::mt19937_64& rng, std::size_t rows, std::size_t cols, std::size_t measured,
                    std::vector<KnownValue>& known) {
  RadioMap m(GridSpec{{37.55, 127.04}, 10.0, rows, cols});
  std::vector<std::size_t> idx(rows * cols);
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), rng);
  std::uniform_real_distribution<double> v(-110.0, -30.0);
  known.clear();
  for (std::size_t i = 0; i < measured; ++i) {
    const auto gi = m.spec().unflat(idx[i]);
    const double value = v(rng);
    m.at(gi) = CellState::measured(value);
    // Cell centers computed from the row/col numbers, not through the library.
    known.push_back({(static_cast<double>(gi.col) + 0.5) * 10.0, (static_cast<double>(gi.row) + 0.5) * 10.0, value});
  }
  return m;
}

Outcome idw_oracle() {
  std::mt19937_64 rng(101);
  double worst = 0.0;
  std::size_t checked = 0;
  for (int round = 0; round < 100; ++round) {
    std::vector<KnownValue> known;
    const auto m = random_map(rng, 8, 8, 5 + rng() % 16, known);
    const auto out = idw_interpolate(m);
    for (std::size_t r = 0; r < 8; ++r)
      for (std::size_t c = 0; c < 8; ++c) {
        if (out.at(r, c).kind != CellKind::Interpolated) continue;
        const double ref = brute_shepard(known, (c + 0.5) * 10.0, (r + 0.5) * 10.0);
        worst = std::max(worst, std::abs(out.at(r, c).value - ref));
        ++checked;
      }
  }
  return {worst <= 1e-9, std::to_string(checked) + " cells, max |diff| = " + fmt("%.3g", worst) + " dB"};
}

Outcome idw_bounds() {
  std::mt19937_64 rng(102);
  std::size_t exact_fail = 0, bound_fail = 0, cells = 0;
  for (int round = 0; round < 1000; ++round) {
    const std::size_t rows = 1 + rng() % 16, cols = 1 + rng() % 16;
    const std::size_t n = 1 + rng() % (rows * cols);
    std::vector<KnownValue> known;
    const auto m = random_map(rng, rows, cols, n, known);
    const auto out = idw_interpolate(m);
    double lo = 1e300, hi = -1e300;
    for (const auto& k : known) lo = std::min(lo, k.v), hi = std::max(hi, k.v);
    for (std::size_t i = 0; i < rows * cols; ++i) {
      const auto gi = m.spec().unflat(i);
      const auto& cell = out.at(gi);
      ++cells;
      if (m.at(gi).is_measured()) {
        if (idw_at(m, grid_center(m.spec(), gi)) != m.at(gi).value || cell.value != m.at(gi).value) ++exact_fail;
      } else if (!(cell.value >= lo && cell.value <= hi)) {
        ++bound_fail;
      }
    }
  }
  return {exact_fail == 0 && bound_fail == 0,
          std::to_string(cells) + " cells, " + std::to_string(exact_fail) + " inexact at centers, " +
              std::to_string(bound_fail) + " out of bounds"};
}

Outcome ema_contraction() {
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> ua(1e-3, 1.0 - 1e-3), uv(-120.0, -20.0);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double worst_ratio_err = 0.0;
  for (int round = 0; round < 1000; ++round) {
    const SmoothingConfig cfg{ua(rng), false};
    const double v = uv(rng);
    CellState s = CellState::measured(uv(rng));
    for (int t = 0; t < 50; ++t) {
      const double before = std::abs(s.value - v);
      s = ema_update(s, v, cfg);
      const double after = std::abs(s.value - v);
      // Exact in real arithmetic; allow the rounding of one step.
      const double slack = 4.0 * eps * std::max(std::abs(s.value), std::abs(v));
      worst_ratio_err = std::max(worst_ratio_err, std::abs(after - (1.0 - cfg.alpha) * before) / slack);
    }
  }
  const double v = -70.0, s0 = -110.0;
  CellState s = CellState::measured(s0);
  for (int t = 0; t < 50; ++t) s = ema_update(s, v, SmoothingConfig{0.3, false});
  const double rel = std::abs(s.value - v) / std::abs(s0 - v);
  return {worst_ratio_err <= 1.0 && rel < 1e-7,
          "per-step error " + fmt("%.2f", worst_ratio_err) + " of rounding slack, 50-step gap ratio " +
              fmt("%.3g", rel)};
}

Outcome stuck_interpolation() {
  std::mt19937_64 rng(104);
  std::uniform_real_distribution<double> up(-5000.0, 5000.0), ut(0.0, 1e5), ud(1.0, 600.0);
  std::size_t endpoint_fail = 0;
  double worst_var = 0.0;
  for (int round = 0; round < 1000; ++round) {
    const LocalPoint a{up(rng), up(rng)}, b{up(rng), up(rng)};
    const double ts = ut(rng), tf = ts + ud(rng);
    if (!(interpolate_position(a, b, ts, tf, 0.0) == a)) ++endpoint_fail;
    if (!(interpolate_position(a, b, ts, tf, tf - ts) == b)) ++endpoint_fail;
    const int steps = 2 + static_cast<int>(rng() % 60);
    std::vector<double> gaps;
    LocalPoint prev = a;
    for (int k = 1; k <= steps; ++k) {
      const auto p = interpolate_position(a, b, ts, tf, (tf - ts) * (static_cast<double>(k) / steps));
      gaps.push_back(distance(prev, p));
      prev = p;
    }
    double mean = 0.0;
    for (double g : gaps) mean += g;
    mean /= gaps.size();
    double var = 0.0;
    for (double g : gaps) var += (g - mean) * (g - mean);
    worst_var = std::max(worst_var, var / gaps.size());
  }

  // End to end through a trace on the default grid geometry.
  const GridSpec g{{37.555, 127.042}, 10.0, 70, 100};
  SurveyTrace t{{}, "w"};
  for (int i = 0; i <= 10; ++i) t.samples.push_back({double(i), to_geo(g, {100.0 + 1.4 * i, 200.0}), -70.0, "w"});
  for (int i = 11; i <= 70; ++i) t.samples.push_back({double(i), t.samples[10].pos, -70.0, "w"});
  for (int i = 71; i <= 80; ++i) t.samples.push_back({double(i), to_geo(g, {100.0 + 1.4 * i, 200.0}), -70.0, "w"});
  const auto segs = detect_stuck_segments(t);
  const auto fixed = interpolate_stuck_positions(t, segs.at(0), g);
  if (!(fixed.samples[10].pos == t.samples[10].pos) || !(fixed.samples[71].pos == t.samples[71].pos))
    ++endpoint_fail;
  std::vector<double> gaps;
  for (int i = 11; i <= 71; ++i)
    gaps.push_back(distance(to_local(g, fixed.samples[i - 1].pos), to_local(g, fixed.samples[i].pos)));
  double mean = 0.0, var = 0.0;
  for (double x : gaps) mean += x;
  mean /= gaps.size();
  for (double x : gaps) var += (x - mean) * (x - mean);
  worst_var = std::max(worst_var, var / gaps.size());

  return {endpoint_fail == 0 && worst_var < 1e-12,
          std::to_string(endpoint_fail) + " endpoint misses, max spacing variance " + fmt("%.3g", worst_var) + " m^2"};
}

Outcome stuck_improvement() {
  const auto scenario = parse_scenario(slurp(kScenarioDir + "/default.json"));
  const auto sim = run_scenario(scenario);
  std::vector<SurveyTrace> traces;
  for (const auto& g : sim.traces) traces.push_back(g.trace);

  BuildParams corrected;
  corrected.disc_update = false;
  BuildParams raw = corrected;
  raw.stuck_correction = false;
  const auto a = build_map(traces, scenario.grid, corrected);
  const auto b = build_map(traces, scenario.grid, raw);
  const auto ea = evaluate_map(a.map, scenario.field);
  const auto eb = evaluate_map(b.map, scenario.field);
  const bool ok = a.map.meta.stats.stuck_repaired >= 1 && ea.rmse < eb.rmse && ea.argmax_match && !eb.argmax_match;
  std::ostringstream d;
  d << "RMSE corrected " << fmt("%.3f", ea.rmse) << " vs uncorrected " << fmt("%.3f", eb.rmse)
    << " dB; argmax (" << ea.map_argmax.row << "," << ea.map_argmax.col << ") vs (" << eb.map_argmax.row << ","
    << eb.map_argmax.col << "), tx (" << ea.reference_cell.row << "," << ea.reference_cell.col << ")";
  return {ok, d.str()};
}

Outcome disc_improvement() {
  const GridSpec g{{37.555, 127.042}, 10.0, 70, 100};
  PathLossField field;
  field.tx = grid_center(g, {35, 50});
  const auto path = sample_polyline(lawnmower(g, 0, 69, 0, 99, 5), 1.4);

  // Noise windows cover every pass within 150 m of the transmitter.
  DefectScript script;
  bool inside = false;
  for (const auto& p : path) {
    const bool near = distance(p.p, field.tx) <= 150.0;
    if (near && !inside) script.noise_windows.push_back({p.t, p.t, 25.0});
    if (near) script.noise_windows.back().end_t = p.t;
    inside = near;
  }
  std::erase_if(script.noise_windows, [](const NoiseWindow& w) { return !(w.start_t < w.end_t); });

  int wins = 0;
  std::ostringstream d;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto gen = generate_trace(field, path, script, g, "w", seed);
    BuildParams disc;
    BuildParams point;
    point.disc_update = false;
    const double r_disc = evaluate_map(build_map({gen.trace}, g, disc).map, field).rmse;
    const double r_point = evaluate_map(build_map({gen.trace}, g, point).map, field).rmse;
    if (r_disc < r_point) ++wins;
    d << (seed > 1 ? " " : "") << fmt("%.2f", r_disc) << "/" << fmt("%.2f", r_point);
  }
  return {wins >= 8, std::to_string(wins) + "/10 seeds better (disc/point RMSE: " + d.str() + ")"};
}

Outcome exact_reconstruction() {
  const GridSpec g{{37.555, 127.042}, 10.0, 70, 100};
  PathLossField field;
  field.tx = grid_center(g, {35, 50});
  const auto path = sample_polyline(lawnmower(g, 0, 69, 0, 99), 10.0);
  const auto gen = generate_trace(field, path, {}, g, "w", 1);
  BuildParams p;
  p.disc_update = false;
  const auto res = build_map({gen.trace}, g, p);
  const auto rep = evaluate_map(res.map, field);
  return {rep.rmse < 1e-6 && res.measured.complete(),
          std::to_string(path.size()) + " samples, " + std::to_string(res.measured.count(CellKind::Measured)) +
              " cells measured, RMSE " + fmt("%.3g", rep.rmse) + " dB"};
}

Outcome determinism() {
  TempDir tmp("acceptance_det");
  const auto once = [&](const std::string& tag) {
    std::ostringstream out, err;
    const auto dir = tmp.path() / tag;
    int rc = radiomap::cli::run({"radiomap", "simulate", kScenarioDir + "/default.json", "-o", (dir / "sim").string()},
                                out, err);
    rc |= radiomap::cli::run({"radiomap", "build", (dir / "sim" / "trace_w1.csv").string(), "--grid-origin",
                              "37.555,127.042", "--cell-size", "10", "--rows", "70", "--cols", "100", "-o",
                              (dir / "map").string()},
                             out, err);
    std::ostringstream eval_out;
    rc |= radiomap::cli::run({"radiomap", "eval", (dir / "map" / cli::kGridFile).string(),
                              (dir / "sim" / cli::kTruthFile).string()},
                             eval_out, err);
    return std::make_pair(rc, eval_out.str());
  };
  const auto [rc1, eval1] = once("a");
  const auto [rc2, eval2] = once("b");
  std::size_t same = 0, total = 0;
  for (const char* f : {cli::kGridFile, cli::kMeasuredGridFile, cli::kMetaFile, cli::kHeatmapFile, cli::kDefectFile}) {
    ++total;
    const auto x = slurp(tmp.path() / "a" / "map" / f);
    if (!x.empty() && x == slurp(tmp.path() / "b" / "map" / f)) ++same;
  }
  const bool ok = rc1 == 0 && rc2 == 0 && same == total && eval1 == eval2;
  return {ok, std::to_string(same) + "/" + std::to_string(total) + " artifacts byte-identical, eval output " +
                  (eval1 == eval2 ? "identical" : "differs")};
}

Outcome scale_check() {
  const GridSpec g{{37.555, 127.042}, 10.0, 70, 100};
  PathLossField field;
  field.tx = grid_center(g, {35, 50});
  std::vector<SurveyTrace> traces;
  const std::vector<std::vector<LocalPoint>> routes{
      lawnmower(g, 0, 69, 0, 99, 3), lawnmower(g, 2, 68, 10, 90, 4), lawnmower(g, 5, 60, 0, 99, 2)};
  for (std::size_t k = 0; k < routes.size(); ++k) {
    auto path = sample_polyline(routes[k], 1.4, 0.25 * k);
    path.resize(2000);
    traces.push_back(generate_trace(field, path, {}, g, "w" + std::to_string(k), 7).trace);
  }
  const auto t0 = std::chrono::steady_clock::now();
  const auto res = build_map(traces, g, BuildParams{});
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {secs < 10.0 && res.map.complete() && res.map.meta.stats.samples_in == 6000,
          "6000 samples into 70x100 in " + fmt("%.3f", secs) + " s"};
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;  // 0 for no runtime bound
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "IDW matches brute-force Shepard", 5.0, idw_oracle},
      {2, "IDW exact at measured centers and bounded", 0.0, idw_bounds},
      {3, "EMA contraction", 0.0, ema_contraction},
      {4, "stuck interpolation endpoints and spacing", 0.0, stuck_interpolation},
      {5, "stuck correction improves map", 30.0, stuck_improvement},
      {6, "disc update improves map under position noise", 60.0, disc_improvement},
      {7, "exhaustive noise-free survey reconstructs truth", 0.0, exact_reconstruction},
      {8, "simulate/build/eval determinism", 0.0, determinism},
      {9, "70x100 build from 3x2000 samples", 10.0, scale_check},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_s > 0.0 && secs >= c.limit_s) {
      o.pass = false;
      o.detail += "; over time limit";
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
