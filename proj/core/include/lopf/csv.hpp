#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace lopf::csv {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Table {
    std::string file;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;          // -1 if absent
    int require_column(const std::string& name) const;  // throws ParseError
};

Table read_file(const std::filesystem::path& path);
Table parse(const std::string& text, const std::string& file_label);

// Shortest representation that round-trips bit-exactly through parse_double.
std::string format_double(double v);
double parse_double(const std::string& cell, const std::string& file, std::size_t row);

void write_file(const std::filesystem::path& path, const Table& table);

}  // namespace lopf::csv
