#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nbody::cli {

/// "%.17g": round-trips every double and prints the same on every platform.
std::string format_number(double x);

/// Values joined with ", ".
std::string format_row(std::span<const double> values);

/// Inverse of format_row. Throws ConfigError on a malformed field.
std::vector<double> parse_row(std::string_view line);

/// Re-reads a CSV written by `simulate` (header line, then numeric rows) and
/// writes it back out.
std::string reformat_csv(std::string_view text);

/// Writes to a sibling temporary file and renames it over `path`, so a
/// failed run never leaves a partial file behind.
void write_atomically(const std::string& path, std::string_view content);

}  // namespace nbody::cli
