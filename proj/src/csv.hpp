#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace leakage::csv {

struct Table {
    std::string path;  // for error messages
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // 1-based line number of data row i in the source file (comments/header skipped).
    std::vector<std::size_t> line_numbers;

    int column(std::string_view name) const;  // -1 if absent
};

// Reads a comma-separated file with one header row. Lines starting with '#'
// are treated as comments. Fields are not quoted in any of the formats used
// by this project.
Table read_file(const std::filesystem::path& path);

// Shortest representation of x that parses back to the same double.
std::string format_double(double x);

// Strict double parse; the whole field must be consumed.
bool parse_double(std::string_view field, double& out);

// ISO-8601 timestamps at second resolution, e.g. "2013-01-07T05:00:00".
// A space separator instead of 'T' is also accepted on input.
bool parse_timestamp(std::string_view field, std::int64_t& epoch_seconds);
std::string format_timestamp(std::int64_t epoch_seconds);

// Writes `content` to path atomically (temp file + rename).
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace leakage::csv
