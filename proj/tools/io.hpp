#pragma once

// Profile CSV, report JSON and atomic file writes.

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "plap/core.hpp"

namespace plaplab {

using Json = nlohmann::ordered_json;

/// Writes to a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, std::string_view content);

/// "%.17g".
std::string format_double(double value);

/// Header r,u,u_r,w; one row per node.
std::string profile_csv(const plap::RadialProfile& profile);
void write_profile_csv(const std::filesystem::path& path, const plap::RadialProfile& profile);

/// Reads a profile written by write_profile_csv. The grid is rebuilt from
/// the first radius and the row count and must reproduce every radius
/// exactly.
plap::RadialProfile read_profile_csv(const std::filesystem::path& path, double n, double p);

/// Finite values as numbers, +infinity as the string "inf".
Json to_json(const plap::ExtendedReal& value);

/// {"schema": 1, "tool", "version", "command", "config", "grid", ...}.
Json report_header(std::string_view command, const Json& config);

void write_json(const std::filesystem::path& path, const Json& report);

const char* tool_version();

}  // namespace plaplab
