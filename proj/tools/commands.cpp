#include "commands.hpp"

#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "radiomap/error.hpp"
#include "radiomap/map_io.hpp"
#include "radiomap/scenario.hpp"
#include "radiomap/simulator.hpp"
#include "radiomap/trace.hpp"

namespace radiomap::cli {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path.string() + "'");
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create '" + dir.string() + "': " + ec.message());
}

std::string cell_str(GridIndex idx) {
  return "(" + std::to_string(idx.row) + ", " + std::to_string(idx.col) + ")";
}

}  // namespace

BuildParams BuildConfig::params() const {
  BuildParams p;
  p.smoothing.alpha = alpha;
  p.smoothing.printed_recurrence = printed_ema;
  p.sigma_window = sigma_window;
  p.stuck_min_len = stuck_min_len;
  p.disc_update = disc_update_enabled;
  p.stuck_correction = stuck_correction_enabled;
  return p;
}

void BuildConfig::validate() const {
  params().validate();
  radiomap::validate(grid);
}

int cmd_build(const std::vector<fs::path>& files, const BuildConfig& cfg, std::ostream& out,
              std::ostream& err) {
  try {
    cfg.validate();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  std::vector<SurveyTrace> traces;
  std::map<std::string, int> seen;
  for (const auto& file : files) {
    std::string source = file.stem().string();
    if (const int n = ++seen[source]; n > 1) source += "#" + std::to_string(n);
    try {
      traces.push_back(parse_trace(read_file(file), source));
    } catch (const Error& e) {
      err << "error: " << file.string() << ": " << e.what() << "\n";
      return kInputError;
    }
    bool fatal = false;
    std::size_t off_grid = 0;
    for (const auto& issue : validate_trace(traces.back(), cfg.grid)) {
      if (issue.kind == IssueKind::PositionOutOfGrid) {
        ++off_grid;
        continue;
      }
      err << "error: " << file.string() << ": sample " << issue.index << ": "
          << to_string(issue.kind) << " " << issue.detail << "\n";
      fatal = true;
    }
    if (fatal) return kInputError;
    if (off_grid)
      err << "warning: " << file.string() << ": " << off_grid
          << " samples outside the grid will be dropped\n";
  }

  BuildResult result{RadioMap(cfg.grid), RadioMap(cfg.grid)};
  try {
    result = build_map(traces, cfg.grid, cfg.params());
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::NoMeasurements ? kEmptyResult : kInputError;
  }

  try {
    ensure_dir(cfg.out_dir);
    write_file(cfg.out_dir / kMeasuredGridFile, format_grid_csv(result.measured));
    write_file(cfg.out_dir / kGridFile, format_grid_csv(result.map));
    write_file(cfg.out_dir / kMetaFile, format_metadata_json(result.map));
    write_file(cfg.out_dir / kHeatmapFile, format_pgm(result.map));
    write_file(cfg.out_dir / kDefectFile, format_defect_report(result.map.meta.defects));
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  const auto& st = result.map.meta.stats;
  out << "samples: " << st.samples_in << " in, " << st.samples_applied << " applied, "
      << st.dropped_out_of_grid << " out of grid, " << st.dropped_unrepairable << " unrepairable\n"
      << "cells: " << result.map.count(CellKind::Measured) << " measured, "
      << result.map.count(CellKind::Interpolated) << " interpolated\n"
      << "stuck segments: " << st.stuck_segments << " (" << st.stuck_repaired << " repaired)\n"
      << "wrote " << cfg.out_dir.string() << "\n";
  ordered_json j;
  j["samples_in"] = st.samples_in;
  j["samples_applied"] = st.samples_applied;
  j["dropped_out_of_grid"] = st.dropped_out_of_grid;
  j["dropped_unrepairable"] = st.dropped_unrepairable;
  j["measured_cells"] = result.map.count(CellKind::Measured);
  j["interpolated_cells"] = result.map.count(CellKind::Interpolated);
  j["stuck_segments"] = st.stuck_segments;
  j["stuck_repaired"] = st.stuck_repaired;
  out << j.dump() << "\n";
  return kOk;
}

int cmd_simulate(const fs::path& scenario_path, const fs::path& out_dir, std::ostream& out,
                 std::ostream& err) {
  Scenario scenario;
  try {
    scenario = parse_scenario(read_file(scenario_path));
  } catch (const SchemaError& e) {
    err << "error: " << scenario_path.string() << ": schema violation at '" << e.pointer()
        << "': " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    const auto sim = run_scenario(scenario);
    ensure_dir(out_dir);
    for (const auto& g : sim.traces) {
      write_file(out_dir / ("trace_" + g.trace.source_id + ".csv"), format_trace(g.trace));
      std::string pos = "t_s,x_m,y_m,lat_deg,lon_deg\n";
      for (std::size_t i = 0; i < g.truth.size(); ++i) {
        const auto geo = to_geo(scenario.grid, g.truth[i]);
        pos += format_number(g.trace.samples[i].t) + "," + format_number(g.truth[i].x) + "," +
               format_number(g.truth[i].y) + "," + format_number(geo.lat) + "," +
               format_number(geo.lon) + "\n";
      }
      write_file(out_dir / ("positions_" + g.trace.source_id + ".csv"), pos);
    }
    write_file(out_dir / kTruthFile, format_grid_csv(scenario.grid, sim.truth));
    out << "simulated " << sim.traces.size() << " walker(s) into " << out_dir.string() << "\n";
    ordered_json j;
    j["walkers"] = sim.traces.size();
    ordered_json samples = ordered_json::object();
    for (const auto& g : sim.traces) samples[g.trace.source_id] = g.trace.size();
    j["samples"] = samples;
    out << j.dump() << "\n";
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kOk;
}

int cmd_eval(const fs::path& map_path, const fs::path& truth_path, std::ostream& out,
             std::ostream& err) {
  GridFile map, truth;
  try {
    map = parse_grid_csv(read_file(map_path));
    truth = parse_grid_csv(read_file(truth_path));
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  if (map.spec.rows != truth.spec.rows || map.spec.cols != truth.spec.cols) {
    err << "error: dimension mismatch: map is " << map.spec.rows << "x" << map.spec.cols
        << ", truth is " << truth.spec.rows << "x" << truth.spec.cols << "\n";
    return kInputError;
  }
  const auto r = compare_grids(map.spec, map.values, truth.values);
  out << "rmse_db: " << format_number(r.rmse) << "\n"
      << "max_abs_error_db: " << format_number(r.max_abs_error) << "\n"
      << "argmax_match: " << (r.argmax_match ? "yes" : "no") << " (map " << cell_str(r.map_argmax)
      << ", truth " << cell_str(r.reference_cell) << ")\n";
  ordered_json j;
  j["rmse_db"] = r.rmse;
  j["max_abs_error_db"] = r.max_abs_error;
  j["argmax_match"] = r.argmax_match;
  j["map_argmax"] = {r.map_argmax.row, r.map_argmax.col};
  j["truth_argmax"] = {r.reference_cell.row, r.reference_cell.col};
  j["cells"] = r.cells;
  out << j.dump() << "\n";
  return kOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Radio map construction from GPS+RSSI survey traces"};
  app.require_subcommand(1);

  std::vector<fs::path> trace_files;
  BuildConfig cfg;
  std::string origin;
  bool no_disc = false, no_stuck = false;
  auto* build = app.add_subcommand("build", "Build a radio map from trace CSV files");
  build->add_option("traces", trace_files, "Trace CSV files")->required();
  build->add_option("--grid-origin", origin, "Southwest corner as LAT,LON")->required();
  build->add_option("--cell-size", cfg.grid.cell_size, "Cell size in meters")->capture_default_str();
  build->add_option("--rows", cfg.grid.rows, "Grid rows (north axis)")->capture_default_str();
  build->add_option("--cols", cfg.grid.cols, "Grid columns (east axis)")->capture_default_str();
  build->add_option("--alpha", cfg.alpha, "EMA smoothing factor, 0 < alpha < 1")->capture_default_str();
  build->add_option("--sigma-window", cfg.sigma_window, "Rolling position sigma window")->capture_default_str();
  build->add_option("--stuck-min-len", cfg.stuck_min_len, "Minimum frozen run length")->capture_default_str();
  build->add_flag("--no-disc-update", no_disc, "Point updates only (ignore position uncertainty)");
  build->add_flag("--no-stuck-correction", no_stuck, "Keep frozen GPS positions as reported");
  build->add_flag("--printed-ema", cfg.printed_ema, "Use the non-normalized EMA recurrence");
  build->add_option("-o,--out", cfg.out_dir, "Output directory")->required();

  fs::path scenario_path, sim_out = ".";
  auto* simulate = app.add_subcommand("simulate", "Generate synthetic traces from a scenario");
  simulate->add_option("scenario", scenario_path, "Scenario JSON")->required();
  simulate->add_option("-o,--out", sim_out, "Output directory")->capture_default_str();

  fs::path map_path, truth_path;
  auto* eval = app.add_subcommand("eval", "Compare a map grid CSV against a truth grid CSV");
  eval->add_option("map", map_path, "Map grid CSV")->required();
  eval->add_option("truth", truth_path, "Truth grid CSV")->required();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  if (*build) {
    const auto comma = origin.find(',');
    try {
      if (comma == std::string::npos) throw std::invalid_argument("missing comma");
      std::size_t used = 0;
      cfg.grid.origin.lat = std::stod(origin.substr(0, comma), &used);
      cfg.grid.origin.lon = std::stod(origin.substr(comma + 1));
    } catch (const std::exception&) {
      err << "error: --grid-origin expects LAT,LON, got '" << origin << "'\n";
      return kInputError;
    }
    cfg.disc_update_enabled = !no_disc;
    cfg.stuck_correction_enabled = !no_stuck;
    return cmd_build(trace_files, cfg, out, err);
  }
  if (*simulate) return cmd_simulate(scenario_path, sim_out, out, err);
  return cmd_eval(map_path, truth_path, out, err);
}

}  // namespace radiomap::cli
