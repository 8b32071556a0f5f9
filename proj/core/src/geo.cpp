#include "radiomap/geo.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "radiomap/error.hpp"

namespace radiomap {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double meters_per_degree() noexcept { return kEarthRadiusM * kDegToRad; }

}  // namespace

bool is_valid(const GeoPoint& p) noexcept {
  return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 &&
         p.lat <= 90.0 && p.lon >= -180.0 && p.lon <= 180.0;
}

void validate(const GridSpec& spec) {
  if (!is_valid(spec.origin))
    throw Error(ErrorCode::InvalidArgument, "grid origin is not a valid WGS84 coordinate");
  if (!(spec.cell_size > 0.0) || !std::isfinite(spec.cell_size))
    throw Error(ErrorCode::InvalidArgument, "cell size must be positive");
  if (spec.rows < 1 || spec.cols < 1)
    throw Error(ErrorCode::InvalidArgument, "grid needs at least one row and one column");
  if (std::abs(spec.origin.lat) >= 89.0)
    throw Error(ErrorCode::InvalidArgument, "grid origin too close to a pole for planar projection");
}

LocalPoint to_local(const GridSpec& spec, const GeoPoint& p) {
  const double k = meters_per_degree();
  const LocalPoint out{(p.lon - spec.origin.lon) * std::cos(spec.origin.lat * kDegToRad) * k,
                       (p.lat - spec.origin.lat) * k};
  if (!std::isfinite(out.x) || !std::isfinite(out.y) ||
      std::hypot(out.x, out.y) > kProjectionLimitM)
    throw Error(ErrorCode::OutOfProjectionDomain,
                "point (" + std::to_string(p.lat) + ", " + std::to_string(p.lon) +
                    ") is more than 10 km from the grid origin");
  return out;
}

GeoPoint to_geo(const GridSpec& spec, const LocalPoint& p) {
  const double k = meters_per_degree();
  return {spec.origin.lat + p.y / k,
          spec.origin.lon + p.x / (std::cos(spec.origin.lat * kDegToRad) * k)};
}

bool in_grid(const GridSpec& spec, const LocalPoint& p) noexcept {
  return p.x >= 0.0 && p.y >= 0.0 && p.x <= spec.width() && p.y <= spec.height();
}

GridIndex to_grid_index(const GridSpec& spec, const LocalPoint& p) {
  if (!in_grid(spec, p))
    throw Error(ErrorCode::OutOfGrid, "point (" + std::to_string(p.x) + ", " +
                                          std::to_string(p.y) + ") m is outside the grid");
  auto row = static_cast<std::size_t>(std::floor(p.y / spec.cell_size));
  auto col = static_cast<std::size_t>(std::floor(p.x / spec.cell_size));
  if (row >= spec.rows) row = spec.rows - 1;
  if (col >= spec.cols) col = spec.cols - 1;
  return {row, col};
}

LocalPoint grid_center(const GridSpec& spec, GridIndex idx) {
  if (!spec.contains(idx))
    throw Error(ErrorCode::OutOfGrid, "grid index out of range");
  return {(static_cast<double>(idx.col) + 0.5) * spec.cell_size,
          (static_cast<double>(idx.row) + 0.5) * spec.cell_size};
}

double distance(const LocalPoint& a, const LocalPoint& b) noexcept {
  return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace radiomap
