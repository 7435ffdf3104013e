#pragma once

#include "morselab/cli.hpp"
#include "morselab/params.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace morse::cli {

using Json = nlohmann::ordered_json;

/// Shortest round-trip decimal, independent of the C locale.
std::string format_number(double x);
std::string format_number(std::size_t x);

/// Finite value or empty cell.
std::string csv_cell(const CriticalPower& p);
std::string csv_cell(const std::optional<double>& x);

/// Number or the string "infinity".
Json power_json(const CriticalPower& p);

std::string to_csv(const SweepTable& table);

/// UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

} // namespace morse::cli
