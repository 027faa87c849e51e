#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace elicit::detail {

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

// Splits on '\n', dropping a trailing '\r' from each line and a final empty line.
std::vector<std::string_view> split_lines(std::string_view text);
// Comma-separated fields with surrounding blanks trimmed. No quoting.
std::vector<std::string_view> split_fields(std::string_view line);
std::string_view trim(std::string_view s);

double parse_double(std::string_view field);
long long parse_integer(std::string_view field);
// %.17g rendering; parse_double(format_double(x)) == x for every finite x.
std::string format_double(double value);

}  // namespace elicit::detail
