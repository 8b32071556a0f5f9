#pragma once

#include <cstddef>
#include <compare>

namespace radiomap {

/// WGS84 geodetic position in degrees.
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// Planar position in meters, x east and y north of the grid origin.
struct LocalPoint {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const LocalPoint&, const LocalPoint&) = default;
};

struct GridIndex {
  std::size_t row = 0;  // north axis
  std::size_t col = 0;  // east axis

  friend auto operator<=>(const GridIndex&, const GridIndex&) = default;
};

/// Grid geometry. The origin is the southwest corner; rows grow northward and
/// columns eastward. Cells are square.
struct GridSpec {
  GeoPoint origin{};
  double cell_size = 10.0;
  std::size_t rows = 70;
  std::size_t cols = 100;

  double width() const noexcept { return cell_size * static_cast<double>(cols); }
  double height() const noexcept { return cell_size * static_cast<double>(rows); }
  std::size_t cell_count() const noexcept { return rows * cols; }
  std::size_t flat(GridIndex idx) const noexcept { return idx.row * cols + idx.col; }
  GridIndex unflat(std::size_t i) const noexcept { return {i / cols, i % cols}; }
  bool contains(GridIndex idx) const noexcept { return idx.row < rows && idx.col < cols; }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

inline constexpr double kEarthRadiusM = 6371000.0;
inline constexpr double kProjectionLimitM = 10000.0;

/// Throws Error(InvalidArgument) unless the geometry is well formed and the
/// origin is a valid WGS84 coordinate.
void validate(const GridSpec& spec);

bool is_valid(const GeoPoint& p) noexcept;

// Equirectangular projection about spec.origin. Throws
// Error(OutOfProjectionDomain) beyond kProjectionLimitM from the origin.
LocalPoint to_local(const GridSpec& spec, const GeoPoint& p);
GeoPoint to_geo(const GridSpec& spec, const LocalPoint& p);

// Points on the far east/north edge clamp into the last cell; anything else
// outside [0, width] x [0, height] throws Error(OutOfGrid).
GridIndex to_grid_index(const GridSpec& spec, const LocalPoint& p);
bool in_grid(const GridSpec& spec, const LocalPoint& p) noexcept;

LocalPoint grid_center(const GridSpec& spec, GridIndex idx);

double distance(const LocalPoint& a, const LocalPoint& b) noexcept;

}  // namespace radiomap
