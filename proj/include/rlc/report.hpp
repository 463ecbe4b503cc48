#pragma once

// Serialization of reports: canonical JSON (sorted keys, %.12e floats,
// non-finite values as the strings "inf", "-inf" and "nan"), CSV and an
// aligned text table.

#include "rlc/relbound.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rlc {

enum class Format { json, csv, table };

/// Parses "json", "csv" or "table"; throws InvalidInput otherwise.
Format parse_format(std::string_view name);

/// One failed instance of a sweep: its index, the generated inputs and the report.
struct SweepFailure {
  std::uint64_t index = 0;
  /// Canonical JSON of the instance inputs.
  std::string instance;
  BoundReport report;
  friend bool operator==(const SweepFailure&, const SweepFailure&) = default;
};

struct SweepReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::uint64_t instances = 0;
  std::uint64_t passes = 0;
  /// Instances whose hypotheses failed; they carry no bound to check.
  std::uint64_t not_applicable = 0;
  std::vector<SweepFailure> dominance_failures;
  /// Minimum of (best bound - upper oracle TV) over applicable instances.
  std::optional<double> worst_slack;
  friend bool operator==(const SweepReport&, const SweepReport&) = default;
};

/// Text rendering of a double as used in every output: %.12e, or "inf",
/// "-inf", "nan".
std::string format_double(double x);

std::string dist_to_json(const DiscreteDist& d);
/// {"offset": int, "masses": [...], "tail_deficit": real}; a bare array of
/// masses is read as offset 0.
DiscreteDist dist_from_json(std::string_view text);

std::string to_json(const BoundReport& r);
BoundReport bound_report_from_json(std::string_view text);
std::string to_json(const SweepReport& r);
SweepReport sweep_report_from_json(std::string_view text);

/// Header plus one row per report.
std::string to_csv(const std::vector<BoundReport>& reports);
std::string to_csv(const SweepReport& r);
std::string to_table(const std::vector<BoundReport>& reports);
std::string to_table(const SweepReport& r);

}  // namespace rlc
