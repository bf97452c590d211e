#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ela::csv {

/// Splits one CSV line on commas. Quoting is not supported; none of the
/// toolkit's formats need it.
std::vector<std::string> split(std::string_view line);

std::string join(const std::vector<std::string>& fields);

/// Shortest decimal form that round-trips (at most 17 significant digits).
/// NaN renders as an empty cell, infinities as `inf` / `-inf`.
std::string format_double(double v);

/// Parses a full field as a double. Empty fields parse as NaN.
std::optional<double> parse_double(std::string_view field);
std::optional<long long> parse_int(std::string_view field);

/// Reads a whole file. Throws FileNotFound when it does not exist.
std::string read_file(const std::filesystem::path& path);

/// Splits text into lines, dropping a trailing '\r' from each line and a
/// final empty line.
std::vector<std::string> lines(const std::string& text);

/// Writes via a temporary sibling file followed by a rename, so readers never
/// see a partially written file.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace ela::csv
