#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "radiomap/builder.hpp"
#include "radiomap/geo.hpp"
#include "radiomap/trace.hpp"

namespace radiomap {

/// Log-distance path loss around one transmitter, plus optional log-normal
/// shadowing that is a fixed function of (seed, shadowing cell).
struct PathLossField {
  LocalPoint tx{};
  double p0 = -40.0;  // dBm at d0
  double n = 3.0;     // path-loss exponent
  double d0 = 1.0;    // m
  double noise_sigma = 0.0;  // dB, shadowing std-dev
  std::uint64_t seed = 0;
  double shadow_cell = 10.0;  // m
  bool flat = false;          // constant p0 everywhere

  void validate() const;
};

/// Noise-free component: p0 - 10 n log10(max(d, d0) / d0).
double mean_rssi(const PathLossField& field, const LocalPoint& p);
double shadowing(const PathLossField& field, const LocalPoint& p);
double truth_rssi(const PathLossField& field, const LocalPoint& p);

/// Noise-free field at every cell center, row-major, row 0 south.
std::vector<double> truth_grid(const PathLossField& field, const GridSpec& spec);

struct StuckWindow {
  double start_t = 0.0;
  double end_t = 0.0;
};

struct NoiseWindow {
  double start_t = 0.0;
  double end_t = 0.0;
  double pos_sigma = 0.0;  // m, per axis
};

/// Windows are closed intervals [start_t, end_t].
struct DefectScript {
  std::vector<StuckWindow> stuck_windows;
  std::vector<NoiseWindow> noise_windows;

  /// Throws Error(OverlappingWindows) or Error(InvalidArgument).
  void validate() const;
};

struct TimedPoint {
  double t = 0.0;
  LocalPoint p{};
};

/// Samples a polyline walked at constant speed every `period` seconds from t0
/// until the end of the path.
std::vector<TimedPoint> sample_polyline(std::span<const LocalPoint> waypoints, double speed,
                                        double t0 = 0.0, double period = 1.0);

/// Boustrophedon waypoints along the row centers rows [row0, row1] of a grid,
/// spanning column centers [col0, col1].
std::vector<LocalPoint> lawnmower(const GridSpec& spec, std::size_t row0, std::size_t row1,
                                  std::size_t col0, std::size_t col1, std::size_t row_step = 1);

struct GeneratedTrace {
  SurveyTrace trace;
  std::vector<LocalPoint> truth;    // true positions
  std::vector<LocalPoint> reported; // reported positions in the local frame
};

/// RSSI comes from the true position. The reported position is the true one,
/// plus per-axis Gaussian error inside noise windows, and frozen at the first
/// reported fix of each stuck window for the rest of that window.
GeneratedTrace generate_trace(const PathLossField& field, std::span<const TimedPoint> path,
                              const DefectScript& script, const GridSpec& frame,
                              std::string source_id, std::uint64_t seed);

struct EvalReport {
  double rmse = 0.0;
  double max_abs_error = 0.0;
  std::size_t cells = 0;
  GridIndex map_argmax{};
  GridIndex reference_cell{};
  bool argmax_match = false;
};

/// Compares a finalized map against the noise-free field at each cell center;
/// the reference cell is the one containing the transmitter.
EvalReport evaluate_map(const RadioMap& map, const PathLossField& field);

/// Grid-to-grid comparison; the reference cell is the truth argmax. Throws
/// Error(DimensionMismatch) if the sizes differ.
EvalReport compare_grids(const GridSpec& spec, std::span<const double> map,
                         std::span<const double> truth);

/// First row-major index of the maximum finite value.
GridIndex argmax_cell(const GridSpec& spec, std::span<const double> values);

}  // namespace radiomap
