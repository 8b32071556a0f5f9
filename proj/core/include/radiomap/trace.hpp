#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "radiomap/geo.hpp"

namespace radiomap {

inline constexpr std::string_view kTraceHeader = "t_s,lat_deg,lon_deg,rssi_dbm";
inline constexpr double kRssiMinDbm = -160.0;
inline constexpr double kRssiMaxDbm = 0.0;

struct SurveySample {
  double t = 0.0;  // seconds, relative
  GeoPoint pos{};
  double rssi = 0.0;  // dBm
  std::string source_id;

  friend bool operator==(const SurveySample&, const SurveySample&) = default;
};

struct SurveyTrace {
  std::vector<SurveySample> samples;
  std::string source_id;

  std::size_t size() const noexcept { return samples.size(); }
  bool empty() const noexcept { return samples.empty(); }
};

struct RejectedRow {
  std::size_t line = 0;
  std::string reason;
};

struct ParseReport {
  SurveyTrace trace;
  std::size_t data_rows = 0;
  std::vector<RejectedRow> rejected;
};

/// Parses a trace CSV. Any malformed row throws ParseError; zero data rows
/// throws Error(EmptyTrace).
SurveyTrace parse_trace(std::string_view text, std::string source_id);

/// Lenient variant: malformed rows are collected instead of thrown, so
/// data_rows == trace.size() + rejected.size(). Still throws on a bad header.
ParseReport parse_trace_report(std::string_view text, std::string source_id);

std::string format_trace(const SurveyTrace& trace);

enum class IssueKind {
  NonMonotoneTimestamp,
  DuplicateTimestamp,
  RssiOutOfRange,
  PositionOutOfGrid,
};

std::string_view to_string(IssueKind kind) noexcept;

struct ValidationIssue {
  IssueKind kind;
  std::size_t index;
  std::string detail;
};

std::vector<ValidationIssue> validate_trace(const SurveyTrace& trace,
                                            const std::optional<GridSpec>& grid = std::nullopt);

/// Interleaves traces by timestamp. Ties go to the lexically smaller
/// source_id, then to the earlier input position.
SurveyTrace merge_traces(const std::vector<SurveyTrace>& traces);

struct SampleRef {
  std::size_t trace = 0;
  std::size_t sample = 0;
};

/// The interleaving used by merge_traces, as (trace, sample) references.
std::vector<SampleRef> merge_order(const std::vector<SurveyTrace>& traces);

}  // namespace radiomap
