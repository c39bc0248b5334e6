#pragma once

// Small line-oriented helpers shared by the TSV/CSV readers.

#include <cstddef>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace zipfkit::detail {

std::vector<std::string_view> split(std::string_view line, char sep);
std::string_view trim(std::string_view s);
// Strips a trailing '\r' (CRLF input).
std::string_view chomp(std::string_view line);
bool is_blank_or_comment(std::string_view line);

// Parses a non-negative decimal integer, the whole string.
bool parse_size(std::string_view s, std::size_t& out);

std::string read_file(const std::filesystem::path& path);

}  // namespace zipfkit::detail
