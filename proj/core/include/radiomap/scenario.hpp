#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "radiomap/geo.hpp"
#include "radiomap/simulator.hpp"

namespace radiomap {

struct WalkerSpec {
  std::string id;
  double speed = 1.4;  // m/s
  double start_t = 0.0;
  double sample_period = 1.0;
  std::vector<LocalPoint> waypoints;  // local meters in the grid frame
  DefectScript defects;
};

/// Scenario JSON:
///   {
///     "seed": 7,
///     "grid": {"origin": {"lat": .., "lon": ..}, "cell_size": 10, "rows": 70, "cols": 100},
///     "field": {"tx": [x, y], "p0_dbm": -40, "path_loss_exponent": 3, "d0_m": 1,
///               "shadowing_sigma_db": 0, "flat": false},
///     "walkers": [{"id": "w1", "speed_mps": 1.4, "start_t": 0, "sample_period_s": 1,
///                  "waypoints": [[x, y], ...],
///                  "defects": {"stuck_windows": [{"start_t": .., "end_t": ..}],
///                              "noise_windows": [{"start_t": .., "end_t": .., "pos_sigma_m": ..}]}}]
///   }
/// Coordinates are meters east/north of the grid's southwest corner.
struct Scenario {
  std::uint64_t seed = 0;
  GridSpec grid{};
  PathLossField field{};
  std::vector<WalkerSpec> walkers;
};

/// Throws SchemaError naming the offending field by JSON pointer.
Scenario parse_scenario(std::string_view json_text);

struct SimulationOutput {
  std::vector<GeneratedTrace> traces;  // one per walker, scenario order
  std::vector<double> truth;           // noise-free field at cell centers
};

SimulationOutput run_scenario(const Scenario& scenario);

}  // namespace radiomap
