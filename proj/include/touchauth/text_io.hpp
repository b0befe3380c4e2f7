#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace touchauth::text {

/// Shortest decimal form that parses back to the identical double.
std::string format_double(double value);
std::string format_float(float value);

std::optional<double> parse_double(std::string_view field);
std::optional<std::int64_t> parse_int(std::string_view field);

std::string_view trim(std::string_view s) noexcept;

/// Splits one line of a plain comma-separated table (no quoting).
std::vector<std::string_view> split_fields(std::string_view line, char delimiter = ',');

std::string read_file(const std::filesystem::path& path);

/// Writes via a sibling temp file and rename so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace touchauth::text
