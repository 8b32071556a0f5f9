#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "radiomap/geo.hpp"
#include "radiomap/trace.hpp"

namespace radiomap {

inline constexpr std::size_t kDefaultStuckMinLen = 3;
inline constexpr std::size_t kDefaultSigmaWindow = 30;

/// A run of samples whose reported position repeats the fix at anchor_index.
/// The run length (anchor plus frozen samples) is at least the detection
/// threshold. resume_index is absent when the trace ends while still frozen.
struct StuckSegment {
  std::size_t anchor_index = 0;
  std::size_t first_frozen = 0;
  std::size_t frozen_count = 0;
  std::optional<std::size_t> resume_index;
  double t_s = 0.0;
  std::optional<double> t_f;

  std::size_t last_frozen() const noexcept { return first_frozen + frozen_count - 1; }
  bool has_resume() const noexcept { return resume_index.has_value(); }

  friend bool operator==(const StuckSegment&, const StuckSegment&) = default;
};

struct SigmaEstimate {
  double sigma = 0.0;  // meters
  std::size_t window = 0;
};

std::vector<StuckSegment> detect_stuck_segments(const SurveyTrace& trace,
                                                std::size_t min_len = kDefaultStuckMinLen);

/// Constant-speed position along the chord from `from` (at t_s) to `to`
/// (at t_f), evaluated at elapsed time t_e in [0, t_f - t_s]. Returns `from`
/// and `to` bit-exactly at the two ends.
LocalPoint interpolate_position(const LocalPoint& from, const LocalPoint& to, double t_s,
                                double t_f, double t_e);

/// Replaces every frozen position in seg by its constant-speed position on
/// the chord between the anchor and resume fixes, computed in the grid's
/// local frame. RSSI and timestamps are untouched. Throws Error(NoResumePoint)
/// for a segment that is still frozen at the end of the trace.
SurveyTrace interpolate_stuck_positions(const SurveyTrace& trace, const StuckSegment& seg,
                                        const GridSpec& frame);

/// Root-sum-square of the per-axis population standard deviations over the
/// last min(window, idx + 1) positions ending at idx. Throws
/// Error(InsufficientWindow) when fewer than two positions are available.
SigmaEstimate rolling_sigma(std::span<const LocalPoint> positions, std::size_t idx,
                            std::size_t window = kDefaultSigmaWindow);
SigmaEstimate rolling_sigma(const SurveyTrace& trace, std::size_t idx, const GridSpec& frame,
                            std::size_t window = kDefaultSigmaWindow);

/// rolling_sigma for every index in one pass. Index 0 (and any index with a
/// single available sample) gets sigma 0 with window 1.
std::vector<SigmaEstimate> rolling_sigmas(std::span<const LocalPoint> positions,
                                          std::size_t window = kDefaultSigmaWindow);

}  // namespace radiomap
