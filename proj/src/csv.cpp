#include "perifsi/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "perifsi/errors.hpp"

namespace perifsi {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, end);
}

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    throw ValidationError("csv column '" + name + "' missing");
}

double CsvTable::number(std::size_t row, const std::string& name) const {
    const std::string& cell = rows.at(row).at(column(name));
    double x = 0.0;
    const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), x);
    if (ec != std::errc{} || end != cell.data() + cell.size())
        throw ValidationError("csv cell '" + cell + "' is not a number");
    return x;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path.string());
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (cells[i].find_first_of(",\"\n\r") != std::string::npos)
                throw ValidationError("csv cell contains a separator: " + cells[i]);
            out << (i ? "," : "") << cells[i];
        }
        out << '\n';
    };
    line(table.header);
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size()) throw ValidationError("csv row width differs from header");
        line(row);
    }
    if (!out) throw ValidationError("write failed for " + path.string());
}

CsvTable parse_csv(const std::string& text) {
    CsvTable table;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream fields(line);
        while (std::getline(fields, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        if (first) {
            table.header = std::move(cells);
            first = false;
        } else {
            if (cells.size() != table.header.size())
                throw ParseError(static_cast<int>(table.rows.size()) + 2, "csv row width differs from header");
            table.rows.push_back(std::move(cells));
        }
    }
    return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_csv(text.str());
}

}  // namespace perifsi
