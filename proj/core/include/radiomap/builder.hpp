#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "radiomap/defects.hpp"
#include "radiomap/geo.hpp"
#include "radiomap/trace.hpp"

namespace radiomap {

enum class CellKind : std::uint8_t { Empty, Measured, Interpolated };

struct CellState {
  CellKind kind = CellKind::Empty;
  double value = std::numeric_limits<double>::quiet_NaN();
  std::uint32_t ema_count = 0;

  static CellState empty() noexcept { return {}; }
  static CellState measured(double v, std::uint32_t n = 1) noexcept {
    return {CellKind::Measured, v, n};
  }
  static CellState interpolated(double v) noexcept { return {CellKind::Interpolated, v, 0}; }

  bool is_measured() const noexcept { return kind == CellKind::Measured; }
};

// Bitwise comparison so that two Empty (NaN) cells compare equal.
bool operator==(const CellState& a, const CellState& b) noexcept;

struct SmoothingConfig {
  double alpha = 0.3;
  // Reproduces the literal S_t = V_t + (1 - alpha) S_{t-1} recurrence. It is
  // not an average and drifts under constant input; keep it off for real maps.
  bool printed_recurrence = false;

  void validate() const;
};

struct BuildParams {
  SmoothingConfig smoothing{};
  std::size_t sigma_window = kDefaultSigmaWindow;
  std::size_t stuck_min_len = kDefaultStuckMinLen;
  bool disc_update = true;
  bool stuck_correction = true;

  void validate() const;
};

struct DefectRecord {
  std::string source_id;
  double t_s = 0.0;
  std::optional<double> t_f;
  std::size_t epochs = 0;  // frozen samples
  bool repaired = false;
};

struct BuildStats {
  std::size_t samples_in = 0;
  std::size_t samples_applied = 0;
  std::size_t dropped_out_of_grid = 0;
  std::size_t dropped_unrepairable = 0;
  std::size_t stuck_segments = 0;
  std::size_t stuck_repaired = 0;
  std::size_t stuck_unrepairable = 0;
  std::size_t frozen_samples_repaired = 0;
  std::size_t cell_updates = 0;
};

struct MapMeta {
  BuildParams params{};
  std::vector<std::string> sources;
  BuildStats stats{};
  std::vector<DefectRecord> defects;
};

/// Row-major grid of cells; row 0 is the southernmost row.
class RadioMap {
 public:
  explicit RadioMap(GridSpec spec);

  const GridSpec& spec() const noexcept { return spec_; }
  std::span<const CellState> cells() const noexcept { return cells_; }

  const CellState& at(GridIndex idx) const { return cells_.at(spec_.flat(idx)); }
  CellState& at(GridIndex idx) { return cells_.at(spec_.flat(idx)); }
  const CellState& at(std::size_t row, std::size_t col) const { return at(GridIndex{row, col}); }
  CellState& at(std::size_t row, std::size_t col) { return at(GridIndex{row, col}); }

  std::size_t count(CellKind kind) const noexcept;
  bool complete() const noexcept { return count(CellKind::Empty) == 0; }

  /// Cell values in row-major order; Empty cells are NaN.
  std::vector<double> values() const;

  MapMeta meta{};

  friend bool operator==(const RadioMap& a, const RadioMap& b) noexcept {
    return a.spec_ == b.spec_ && a.cells_ == b.cells_;
  }

 private:
  GridSpec spec_;
  std::vector<CellState> cells_;
};

/// One EMA step. Empty and Interpolated cells restart at v with count 1.
CellState ema_update(const CellState& cell, double v, const SmoothingConfig& cfg);

/// Cells whose centers lie within `radius` of `center`, in row-major order.
std::vector<GridIndex> disc_cells(const GridSpec& spec, const LocalPoint& center, double radius);

/// Applies ema_update with v to every cell within 2 sigma of center, or to the
/// containing cell alone when the disc holds no cell center. Throws
/// Error(OutOfGrid) when center is outside the map. Returns cells touched.
std::size_t disc_update(RadioMap& map, const LocalPoint& center, const SigmaEstimate& sigma,
                        double v, const SmoothingConfig& cfg);

/// Shepard (power 1) estimate at an arbitrary point over all Measured cells.
/// At a Measured cell center the stored value is returned unchanged. Throws
/// Error(NoMeasurements) if the map has no Measured cell.
double idw_at(const RadioMap& map, const LocalPoint& p);

/// Fills every Empty cell with its IDW estimate over all Measured cells.
RadioMap idw_interpolate(const RadioMap& map);

struct BuildResult {
  RadioMap measured;  // after the update phase, before interpolation
  RadioMap map;       // complete map
};

/// Full pipeline: per-trace stuck repair and rolling sigma, global timestamp
/// fold into per-source EMA layers, layer fusion, IDW. Out-of-grid samples
/// are dropped and counted in meta.stats.
BuildResult build_map(const std::vector<SurveyTrace>& traces, const GridSpec& spec,
                      const BuildParams& params);

}  // namespace radiomap
