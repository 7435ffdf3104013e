#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace morse::cli {

inline constexpr const char* tool_name = "morselab";
inline constexpr const char* tool_version = "0.1.0";

enum ExitCode : int { exit_ok = 0, exit_invalid_input = 2, exit_numerical_failure = 3 };

/// Runs one command line (without the program name). The report goes to
/// `out`; diagnostics go to `err`. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

enum class SweepMode { exponents, spectrum };

/// Flat `key = value` configuration for the sweep command. Lines starting
/// with '#' are comments. List values are comma separated or written as
/// start:step:stop (inclusive).
struct SweepConfig {
    SweepMode mode = SweepMode::exponents;
    // exponents mode: the n_prime x tau grid, n_prime outermost
    std::vector<double> n_prime;
    std::vector<double> tau;
    // spectrum mode: V_inf spectrum over a list of p
    int N = 11;
    double theta = 0.0;
    double l = 0.0;
    std::vector<double> p;
    double a = 1e-3;
    double b = 1e3;
    std::size_t n = 2000;
    unsigned threads = 0; // 0: hardware concurrency
};

/// Throws InvalidInput("config") on unknown keys or malformed values.
SweepConfig parse_sweep_config(const std::string& text);

/// Expands "1,2,3" or "start:step:stop". An empty string gives an empty list.
std::vector<double> parse_number_list(const std::string& text);

struct SweepTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Evaluates every row (concurrently when threads != 1) and returns them in
/// grid order. Per-row failures are recorded in the status column.
SweepTable run_sweep(const SweepConfig& config);

} // namespace morse::cli
