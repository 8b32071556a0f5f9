#include "radiomap/trace.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numeric>

#include "radiomap/error.hpp"

namespace radiomap {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view field, double& out) {
  field = trim(field);
  if (field.empty()) return false;
  if (field.front() == '+') field.remove_prefix(1);
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

SurveySample parse_row(std::string_view line, std::size_t line_no, const std::string& source) {
  std::array<std::string_view, 4> fields;
  std::size_t n = 0;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (n == fields.size()) throw ParseError(line_no, "expected 4 columns, got more");
    fields[n++] = line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                      : comma - start);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (n != fields.size())
    throw ParseError(line_no, "expected 4 columns, got " + std::to_string(n));

  static constexpr std::array<const char*, 4> kNames = {"t_s", "lat_deg", "lon_deg", "rssi_dbm"};
  std::array<double, 4> v{};
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (!parse_double(fields[i], v[i]) || !std::isfinite(v[i]))
      throw ParseError(line_no, std::string("invalid ") + kNames[i] + " '" +
                                    std::string(trim(fields[i])) + "'");
  }
  SurveySample s{v[0], {v[1], v[2]}, v[3], source};
  if (!is_valid(s.pos)) throw ParseError(line_no, "latitude/longitude out of range");
  if (s.rssi < kRssiMinDbm || s.rssi > kRssiMaxDbm)
    throw ParseError(line_no, "rssi outside [-160, 0] dBm");
  return s;
}

template <typename OnRow>
std::size_t scan_rows(std::string_view text, OnRow&& on_row) {
  std::size_t line_no = 0;
  std::size_t data_rows = 0;
  bool header_seen = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (!header_seen) {
      if (line != kTraceHeader)
        throw ParseError(line_no, "expected header '" + std::string(kTraceHeader) + "'");
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;
    ++data_rows;
    on_row(line, line_no);
  }
  if (!header_seen) throw ParseError(1, "missing header");
  return data_rows;
}

}  // namespace

SurveyTrace parse_trace(std::string_view text, std::string source_id) {
  SurveyTrace trace{{}, source_id};
  scan_rows(text, [&](std::string_view line, std::size_t line_no) {
    trace.samples.push_back(parse_row(line, line_no, source_id));
  });
  if (trace.empty()) throw Error(ErrorCode::EmptyTrace, "trace '" + source_id + "' has no data rows");
  return trace;
}

ParseReport parse_trace_report(std::string_view text, std::string source_id) {
  ParseReport report;
  report.trace.source_id = source_id;
  report.data_rows = scan_rows(text, [&](std::string_view line, std::size_t line_no) {
    try {
      report.trace.samples.push_back(parse_row(line, line_no, source_id));
    } catch (const ParseError& e) {
      report.rejected.push_back({e.line(), e.reason()});
    }
  });
  return report;
}

std::string format_trace(const SurveyTrace& trace) {
  std::string out(kTraceHeader);
  out += '\n';
  std::array<char, 64> buf{};
  auto put = [&](double v) {
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    out.append(buf.data(), ptr);
  };
  for (const auto& s : trace.samples) {
    put(s.t);
    out += ',';
    put(s.pos.lat);
    out += ',';
    put(s.pos.lon);
    out += ',';
    put(s.rssi);
    out += '\n';
  }
  return out;
}

std::string_view to_string(IssueKind kind) noexcept {
  switch (kind) {
    case IssueKind::NonMonotoneTimestamp: return "NonMonotoneTimestamp";
    case IssueKind::DuplicateTimestamp: return "DuplicateTimestamp";
    case IssueKind::RssiOutOfRange: return "RssiOutOfRange";
    case IssueKind::PositionOutOfGrid: return "PositionOutOfGrid";
  }
  return "Unknown";
}

std::vector<ValidationIssue> validate_trace(const SurveyTrace& trace,
                                            const std::optional<GridSpec>& grid) {
  std::vector<ValidationIssue> issues;
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    const auto& s = trace.samples[i];
    if (i > 0) {
      const double prev = trace.samples[i - 1].t;
      if (s.t == prev)
        issues.push_back({IssueKind::DuplicateTimestamp, i, "t=" + std::to_string(s.t)});
      else if (s.t < prev)
        issues.push_back({IssueKind::NonMonotoneTimestamp, i,
                          "t=" + std::to_string(s.t) + " after " + std::to_string(prev)});
    }
    if (!std::isfinite(s.rssi) || s.rssi < kRssiMinDbm || s.rssi > kRssiMaxDbm)
      issues.push_back({IssueKind::RssiOutOfRange, i, std::to_string(s.rssi) + " dBm"});
    if (grid) {
      bool inside = false;
      try {
        inside = in_grid(*grid, to_local(*grid, s.pos));
      } catch (const Error&) {
        inside = false;
      }
      if (!inside) issues.push_back({IssueKind::PositionOutOfGrid, i, {}});
    }
  }
  return issues;
}

std::vector<SampleRef> merge_order(const std::vector<SurveyTrace>& traces) {
  std::vector<SampleRef> refs;
  for (std::size_t i = 0; i < traces.size(); ++i)
    for (std::size_t j = 0; j < traces[i].samples.size(); ++j) refs.push_back({i, j});

  auto sample = [&](const SampleRef& r) -> const SurveySample& {
    return traces[r.trace].samples[r.sample];
  };
  std::stable_sort(refs.begin(), refs.end(), [&](const SampleRef& a, const SampleRef& b) {
    const auto& sa = sample(a);
    const auto& sb = sample(b);
    if (sa.t != sb.t) return sa.t < sb.t;
    return sa.source_id < sb.source_id;
  });
  return refs;
}

SurveyTrace merge_traces(const std::vector<SurveyTrace>& traces) {
  const auto refs = merge_order(traces);
  SurveyTrace merged;
  merged.samples.reserve(refs.size());
  for (const auto& r : refs) merged.samples.push_back(traces[r.trace].samples[r.sample]);
  for (std::size_t i = 0; i < traces.size(); ++i) {
    if (i) merged.source_id += '+';
    merged.source_id += traces[i].source_id;
  }
  return merged;
}

}  // namespace radiomap
