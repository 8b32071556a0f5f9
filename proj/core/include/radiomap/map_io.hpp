#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "radiomap/builder.hpp"
#include "radiomap/geo.hpp"

namespace radiomap {

inline constexpr std::string_view kGridMagic = "radiomap-grid-v1";

// Grid CSV layout:
//   # radiomap-grid-v1 rows=R cols=C cell_size=M origin_lat=LAT origin_lon=LON
//   R lines of C comma-separated dBm values, row 0 (southernmost) first.
// Empty cells are written as the literal NaN. Values use the shortest
// round-trip decimal form, so reading a file back is lossless.
struct GridFile {
  GridSpec spec{};
  std::vector<double> values;  // row-major, row 0 south

  double at(std::size_t row, std::size_t col) const { return values.at(row * spec.cols + col); }
};

std::string format_grid_csv(const GridSpec& spec, const std::vector<double>& values);
std::string format_grid_csv(const RadioMap& map);
GridFile parse_grid_csv(std::string_view text);

std::string format_metadata_json(const RadioMap& map);

struct HeatmapScale {
  double min_dbm = 0.0;
  double max_dbm = 0.0;
};

/// ASCII PGM (P2), north row first so the image reads north-up. The affine
/// dBm-to-gray mapping is recorded in a comment line.
std::string format_pgm(const RadioMap& map);
HeatmapScale heatmap_scale(const RadioMap& map);

/// One JSON object per line: source, t_s, t_f (null if never resumed),
/// epochs, repaired.
std::string format_defect_report(const std::vector<DefectRecord>& defects);

std::string format_number(double v);

}  // namespace radiomap
