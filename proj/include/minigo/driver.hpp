#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "minigo/checker.hpp"
#include "minigo/errors.hpp"

namespace minigo {

struct RunConfig {
  std::vector<std::string> inputs;
  std::map<std::string, std::int64_t> bounds;
  /// Value for every parameter not named in `bounds`.
  std::optional<std::int64_t> default_bound;
  std::optional<std::string> emit_promela_dir;
  bool json_output = false;
  /// Treat violated modelling assumptions as errors instead of warnings.
  bool strict_assumptions = false;
  bool stop_on_first_violation = false;
  /// Keep exploring after a channel-safety violation.
  bool exhaustive = false;
  std::size_t process_cap = 256;
  std::optional<std::size_t> state_cap;
  /// Partitions checked concurrently.
  unsigned jobs = 1;
};

/// A model parameter and the value it was checked with.
struct AppliedParam {
  std::string name;
  std::int64_t value = 0;
  /// `file:line:col` of the first sighting.
  std::string origin;
  std::string role;
  std::string source;
  bool operator==(const AppliedParam &) const = default;
};

struct PartitionReport {
  std::string file;
  std::string name;
  std::size_t states_explored = 0;
  bool channel_safe = true;
  bool global_deadlock_free = true;
  bool leaks = false;
  bool resource_bound_hit = false;
  bool aborted = false;
  double extract_millis = 0;
  double check_millis = 0;
  std::vector<AppliedParam> free_params;
  std::string trace_kind = "none";
  std::vector<TraceEvent> trace;
  /// Path of the emitted Promela file, if any.
  std::string promela_file;

  bool clean() const { return channel_safe && global_deadlock_free && !leaks; }
  bool operator==(const PartitionReport &o) const;
};

struct ReportTotals {
  std::size_t partitions = 0;
  std::size_t violations = 0;
  std::size_t states_explored = 0;
  double extract_millis = 0;
  double check_millis = 0;
  bool operator==(const ReportTotals &) const = default;
};

struct Report {
  std::vector<PartitionReport> partitions;
  std::vector<std::string> warnings;
  ReportTotals totals;

  bool any_violation() const { return totals.violations > 0; }
  bool operator==(const Report &) const = default;
};

/// Raised when some model parameter has neither a bound nor a default.
class UnresolvedBounds : public Error {
public:
  struct Entry {
    std::string symbol;
    std::string origin;
    std::string role;
    std::string source;
  };
  explicit UnresolvedBounds(std::vector<Entry> entries);
  const std::vector<Entry> &entries() const { return entries_; }

private:
  std::vector<Entry> entries_;
};

/// Raised when `strict_assumptions` is set and an input breaks one.
class AssumptionError : public Error {
public:
  using Error::Error;
};

/// Parses, partitions, builds, binds and checks every input.
Report run_analysis(const RunConfig &cfg);

/// Human-readable table with traces, or the JSON document.
std::string render_report(const Report &report, bool json);

std::string report_to_json(const Report &report);
/// Throws Error on malformed input or an unknown schema.
Report report_from_json(const std::string &text);

extern const char *const kReportSchema;

/// Parses `NAME=INT[,NAME=INT...]`. Throws Error on malformed entries.
std::map<std::string, std::int64_t> parse_bound_list(const std::string &text);

} // namespace minigo
