#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace helio {

// Shortest decimal representation that round-trips the exact double.
std::string format_double(double value);

// Strict full-field parse; throws UnparseableRow on anything else.
double parse_double_field(std::string_view field, std::size_t line_no);
long parse_int_field(std::string_view field, std::size_t line_no);

std::vector<std::string_view> split_csv_line(std::string_view line);

// Whole-file read, newline-split, trailing \r stripped. Throws EmptyFile /
// MissingArtifact.
std::vector<std::string> read_lines(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, const std::string& content);

// FNV-1a over the file bytes, hex-encoded; used to pin artifacts to models.
std::string file_checksum(const std::filesystem::path& path);

}  // namespace helio
