#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "radiomap/builder.hpp"
#include "radiomap/geo.hpp"

namespace radiomap::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kEmptyResult = 2 };

struct BuildConfig {
  double alpha = 0.3;
  std::size_t sigma_window = kDefaultSigmaWindow;
  std::size_t stuck_min_len = kDefaultStuckMinLen;
  bool disc_update_enabled = true;
  bool stuck_correction_enabled = true;
  bool printed_ema = false;
  GridSpec grid{};
  std::filesystem::path out_dir = ".";

  BuildParams params() const;
  void validate() const;
};

// Artifact names written by `build`.
inline constexpr const char* kMeasuredGridFile = "grid_measured.csv";
inline constexpr const char* kGridFile = "grid.csv";
inline constexpr const char* kMetaFile = "meta.json";
inline constexpr const char* kHeatmapFile = "heatmap.pgm";
inline constexpr const char* kDefectFile = "defects.jsonl";
inline constexpr const char* kTruthFile = "truth.csv";

int cmd_build(const std::vector<std::filesystem::path>& traces, const BuildConfig& cfg,
              std::ostream& out, std::ostream& err);
int cmd_simulate(const std::filesystem::path& scenario, const std::filesystem::path& out_dir,
                 std::ostream& out, std::ostream& err);
int cmd_eval(const std::filesystem::path& map, const std::filesystem::path& truth,
             std::ostream& out, std::ostream& err);

/// Parses argv (args[0] is the program name) and dispatches a subcommand.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace radiomap::cli
