#pragma once

// JSON trees behind the canonical text form; shared by the report module and
// the C API, not installed.

#include "rlc/report.hpp"

#include <json.hpp>

#include <string>

namespace rlc::detail {

using Json = nlohmann::json;

/// Non-finite doubles become the strings "inf", "-inf" and "nan".
Json number(double x);
/// Reads a number or one of the non-finite strings.
double read_number(const Json& j);

Json dist_tree(const DiscreteDist& d);
DiscreteDist dist_from_tree(const Json& j);
Json certificate_tree(const LogConcavityCertificate& c);
Json report_tree(const BoundReport& r);
BoundReport report_from_tree(const Json& j);
Json sweep_tree(const SweepReport& r);

/// Sorted keys, no whitespace, floats as %.12e.
std::string canonical(const Json& j);

/// Parses text, rethrowing syntax errors as InvalidInput.
Json parse(std::string_view text);

}  // namespace rlc::detail
