#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "modechoice/types.hpp"

namespace modechoice {

/// Minimal CSV table: header row plus string cells. Covers the plain
/// comma-separated files this tool reads and writes (no quoting).
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const; // -1 when absent
    int require_column(const std::string& name) const;
    const std::string& cell(std::size_t row, int col) const { return rows[row][static_cast<std::size_t>(col)]; }
};

CsvTable read_csv(std::istream& is);
CsvTable read_csv_file(const std::string& path);

double csv_double(const CsvTable& t, std::size_t row, int col);

} // namespace modechoice
