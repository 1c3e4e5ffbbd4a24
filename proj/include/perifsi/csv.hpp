#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace perifsi {

// Shortest text that reads back to the same double; "nan" and "inf" for
// non-finite values.
std::string format_double(double x);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;  // throws ValidationError if absent
    double number(std::size_t row, const std::string& name) const;
};

// Comma-separated, '\n' line ends, no quoting: cells must not contain commas,
// quotes or newlines.
void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);
CsvTable parse_csv(const std::string& text);

}  // namespace perifsi
