#include "radiomap/map_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "radiomap/error.hpp"

namespace radiomap {

using ordered_json = nlohmann::ordered_json;

std::string format_number(double v) {
  if (std::isnan(v)) return "NaN";
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::string format_grid_csv(const GridSpec& spec, const std::vector<double>& values) {
  if (values.size() != spec.cell_count())
    throw Error(ErrorCode::DimensionMismatch, "value count does not match grid dimensions");
  std::string out = "# ";
  out += kGridMagic;
  out += " rows=" + std::to_string(spec.rows) + " cols=" + std::to_string(spec.cols) +
         " cell_size=" + format_number(spec.cell_size) +
         " origin_lat=" + format_number(spec.origin.lat) +
         " origin_lon=" + format_number(spec.origin.lon) + "\n";
  for (std::size_t r = 0; r < spec.rows; ++r) {
    for (std::size_t c = 0; c < spec.cols; ++c) {
      if (c) out += ',';
      out += format_number(values[r * spec.cols + c]);
    }
    out += '\n';
  }
  return out;
}

std::string format_grid_csv(const RadioMap& map) { return format_grid_csv(map.spec(), map.values()); }

namespace {

double to_double(std::string_view s, std::size_t line) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r' || s.back() == '\t')) s.remove_suffix(1);
  if (s == "NaN" || s == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ParseError(line, "invalid grid value '" + std::string(s) + "'");
  return v;
}

}  // namespace

GridFile parse_grid_csv(std::string_view text) {
  GridFile g;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool header = false;
  std::size_t rows_seen = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!header) {
      std::istringstream in{std::string(line)};
      std::string hash, magic;
      in >> hash >> magic;
      if (hash != "#" || magic != kGridMagic)
        throw ParseError(line_no, "expected '# " + std::string(kGridMagic) + "' header");
      bool have_rows = false, have_cols = false;
      std::string kv;
      while (in >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) continue;
        const auto key = kv.substr(0, eq);
        const auto val = std::string_view(kv).substr(eq + 1);
        const double d = to_double(val, line_no);
        if (key == "rows") g.spec.rows = static_cast<std::size_t>(d), have_rows = true;
        else if (key == "cols") g.spec.cols = static_cast<std::size_t>(d), have_cols = true;
        else if (key == "cell_size") g.spec.cell_size = d;
        else if (key == "origin_lat") g.spec.origin.lat = d;
        else if (key == "origin_lon") g.spec.origin.lon = d;
      }
      if (!have_rows || !have_cols || g.spec.rows == 0 || g.spec.cols == 0)
        throw ParseError(line_no, "grid header lacks rows/cols");
      g.values.reserve(g.spec.cell_count());
      header = true;
      continue;
    }
    if (line.empty()) continue;
    std::size_t n = 0;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      g.values.push_back(to_double(line.substr(start, comma == std::string_view::npos
                                                          ? std::string_view::npos
                                                          : comma - start),
                                   line_no));
      ++n;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (n != g.spec.cols)
      throw ParseError(line_no, "expected " + std::to_string(g.spec.cols) + " values, got " +
                                    std::to_string(n));
    ++rows_seen;
  }
  if (!header) throw ParseError(1, "empty grid file");
  if (rows_seen != g.spec.rows)
    throw ParseError(line_no, "expected " + std::to_string(g.spec.rows) + " rows, got " +
                                  std::to_string(rows_seen));
  return g;
}

std::string format_metadata_json(const RadioMap& map) {
  const auto& spec = map.spec();
  const auto& m = map.meta;
  ordered_json j;
  j["format"] = "radiomap-meta-v1";
  j["grid"] = {{"origin_lat", spec.origin.lat},
               {"origin_lon", spec.origin.lon},
               {"cell_size", spec.cell_size},
               {"rows", spec.rows},
               {"cols", spec.cols},
               {"origin_corner", "southwest"},
               {"row_axis", "north"},
               {"col_axis", "east"}};
  j["params"] = {{"alpha", m.params.smoothing.alpha},
                 {"printed_recurrence", m.params.smoothing.printed_recurrence},
                 {"sigma_window", m.params.sigma_window},
                 {"stuck_min_len", m.params.stuck_min_len},
                 {"disc_update", m.params.disc_update},
                 {"stuck_correction", m.params.stuck_correction}};
  j["sources"] = m.sources;
  j["cells"] = {{"measured", map.count(CellKind::Measured)},
                {"interpolated", map.count(CellKind::Interpolated)},
                {"empty", map.count(CellKind::Empty)}};
  j["samples"] = {{"input", m.stats.samples_in},
                  {"applied", m.stats.samples_applied},
                  {"dropped_out_of_grid", m.stats.dropped_out_of_grid},
                  {"dropped_unrepairable", m.stats.dropped_unrepairable},
                  {"cell_updates", m.stats.cell_updates}};
  j["defects"] = {{"stuck_segments", m.stats.stuck_segments},
                  {"repaired", m.stats.stuck_repaired},
                  {"unrepairable", m.stats.stuck_unrepairable},
                  {"frozen_samples_repaired", m.stats.frozen_samples_repaired}};
  return j.dump(2) + "\n";
}

HeatmapScale heatmap_scale(const RadioMap& map) {
  HeatmapScale s{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& c : map.cells()) {
    if (std::isnan(c.value)) continue;
    s.min_dbm = std::min(s.min_dbm, c.value);
    s.max_dbm = std::max(s.max_dbm, c.value);
  }
  if (s.min_dbm > s.max_dbm) s = {0.0, 0.0};
  return s;
}

std::string format_pgm(const RadioMap& map) {
  const auto& spec = map.spec();
  const auto scale = heatmap_scale(map);
  const double span = scale.max_dbm - scale.min_dbm;
  std::string out = "P2\n# radiomap heatmap: gray = round((dBm - " + format_number(scale.min_dbm) +
                    ") / " + format_number(span) + " * 255); min_dbm=" +
                    format_number(scale.min_dbm) + " max_dbm=" + format_number(scale.max_dbm) +
                    "; empty cells and flat maps map to 0; top row is north\n";
  out += std::to_string(spec.cols) + " " + std::to_string(spec.rows) + "\n255\n";
  for (std::size_t k = 0; k < spec.rows; ++k) {
    const std::size_t r = spec.rows - 1 - k;
    for (std::size_t c = 0; c < spec.cols; ++c) {
      const double v = map.at(r, c).value;
      long gray = 0;
      if (!std::isnan(v) && span > 0.0)
        gray = std::clamp(std::lround((v - scale.min_dbm) / span * 255.0), 0L, 255L);
      if (c) out += ' ';
      out += std::to_string(gray);
    }
    out += '\n';
  }
  return out;
}

std::string format_defect_report(const std::vector<DefectRecord>& defects) {
  std::string out;
  for (const auto& d : defects) {
    ordered_json j;
    j["source"] = d.source_id;
    j["t_s"] = d.t_s;
    j["t_f"] = d.t_f ? ordered_json(*d.t_f) : ordered_json(nullptr);
    j["epochs"] = d.epochs;
    j["repaired"] = d.repaired;
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace radiomap
