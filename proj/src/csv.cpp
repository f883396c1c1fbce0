#include "modechoice/csv.hpp"

#include <fstream>
#include <sstream>

namespace modechoice {

namespace {

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) {
        // trim surrounding whitespace
        std::size_t b = cell.find_first_not_of(" \t\r");
        std::size_t e = cell.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

} // namespace

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

int CsvTable::require_column(const std::string& name) const {
    int c = column(name);
    if (c < 0) throw DataError("missing CSV column '" + name + "'");
    return c;
}

CsvTable read_csv(std::istream& is) {
    CsvTable t;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = split_row(line);
        if (first) {
            t.header = std::move(cells);
            first = false;
        } else {
            if (cells.size() != t.header.size())
                throw DataError("CSV row " + std::to_string(t.rows.size() + 2) + " has " +
                                std::to_string(cells.size()) + " cells, expected " +
                                std::to_string(t.header.size()));
            t.rows.push_back(std::move(cells));
        }
    }
    if (first) throw DataError("empty CSV input");
    return t;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    return read_csv(in);
}

double csv_double(const CsvTable& t, std::size_t row, int col) {
    const std::string& s = t.cell(row, col);
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw DataError("CSV row " + std::to_string(row + 2) + ": expected a number in column '" +
                        t.header[static_cast<std::size_t>(col)] + "', got '" + s + "'");
    }
}

} // namespace modechoice
