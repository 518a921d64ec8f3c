#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace proxycast::csv {

// Splits one CSV record. Handles double-quoted fields with "" escapes.
std::vector<std::string> split_line(std::string_view line);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;  // 1-based source line of each row
};

// Reads a whole file. Blank lines are skipped; a missing file or an empty
// file raises DataError naming the path.
Table read_file(const std::filesystem::path& path);

std::string trim(std::string_view text);

// Shortest representation that parses back to the same double.
std::string format_double(double value);

// Writes `content` to `path` through a sibling temp file and rename.
void write_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace proxycast::csv
