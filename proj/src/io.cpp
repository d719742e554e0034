#include "hdben/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hdben {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const CsvTable& table) {
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size())
      throw CsvError("csv row width does not match header: " + path);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CsvError("cannot open for writing: " + path);
  auto emit = [&out](const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out << ',';
      out << cells[i];
    }
    out << '\n';
  };
  emit(table.header);
  for (const auto& row : table.rows) emit(row);
  if (!out) throw CsvError("write failed: " + path);
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  cells.push_back(cur);
  return cells;
}

double parse_cell(const std::string& cell, const std::string& path) {
  double v = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end)
    throw CsvError("non-numeric cell '" + cell + "' in " + path);
  return v;
}

}  // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CsvError("cannot open: " + path);

  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw CsvError("empty file: " + path);
  table.header = split_line(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split_line(line);
    if (cells.size() != table.header.size())
      throw CsvError("ragged row in " + path);
    table.rows.push_back(std::move(cells));
  }
  return table;
}

Dataset read_dataset_csv(const std::string& path) {
  CsvTable table = read_csv(path);
  if (table.header.empty() || table.header[0] != "y")
    throw CsvError("dataset header must start with 'y': " + path);
  for (size_t j = 1; j < table.header.size(); ++j) {
    if (table.header[j] != "x" + std::to_string(j))
      throw CsvError("dataset header column " + std::to_string(j) + " must be 'x" +
                     std::to_string(j) + "': " + path);
  }
  if (table.header.size() < 2) throw CsvError("dataset needs at least one predictor: " + path);
  if (table.rows.empty()) throw CsvError("dataset has no observations: " + path);

  const auto n = static_cast<Eigen::Index>(table.rows.size());
  const auto d = static_cast<Eigen::Index>(table.header.size() - 1);
  Dataset data;
  data.x.resize(n, d);
  data.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = table.rows[static_cast<size_t>(i)];
    data.y[i] = parse_cell(row[0], path);
    for (Eigen::Index j = 0; j < d; ++j)
      data.x(i, j) = parse_cell(row[static_cast<size_t>(j) + 1], path);
  }
  data.validate();
  return data;
}

void write_dataset_csv(const std::string& path, const Dataset& data) {
  data.validate();
  CsvTable table;
  table.header.push_back("y");
  for (Eigen::Index j = 0; j < data.d(); ++j)
    table.header.push_back("x" + std::to_string(j + 1));
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    std::vector<std::string> row;
    row.push_back(format_double(data.y[i]));
    for (Eigen::Index j = 0; j < data.d(); ++j) row.push_back(format_double(data.x(i, j)));
    table.rows.push_back(std::move(row));
  }
  write_csv(path, table);
}

}  // namespace hdben
