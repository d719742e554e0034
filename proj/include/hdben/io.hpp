#pragma once

#include <string>
#include <vector>

#include "hdben/types.hpp"

namespace hdben {

// Shortest exact decimal form that round-trips the double (%.17g).
std::string format_double(double v);

// Rectangular text table; every row must match the header width.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

void write_csv(const std::string& path, const CsvTable& table);

CsvTable read_csv(const std::string& path);

// Reads a dataset whose header is y,x1,...,xd (response first). Ragged rows,
// non-numeric cells, or a malformed header raise CsvError.
Dataset read_dataset_csv(const std::string& path);

void write_dataset_csv(const std::string& path, const Dataset& data);

}  // namespace hdben
