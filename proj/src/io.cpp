#include "censfit/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace censfit {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    std::size_t start = 0;
    while (start < cell.size() && cell[start] == ' ') ++start;
    cells.push_back(cell.substr(start));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_number(const std::string& cell, const std::string& column, int row) {
  if (cell.empty())
    throw SchemaError("empty value in column '" + column + "' at row " + std::to_string(row));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    throw SchemaError("non-numeric value '" + cell + "' in column '" + column + "' at row " +
                      std::to_string(row));
  }
  if (used != cell.size() || !std::isfinite(v))
    throw SchemaError("non-numeric value '" + cell + "' in column '" + column + "' at row " +
                      std::to_string(row));
  return v;
}

}  // namespace

Dataset read_csv(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open data file '" + path + "'");
  if (schema.covariate_columns.empty())
    throw SchemaError("at least one covariate column is required");

  std::string line;
  if (!std::getline(in, line) || split_csv_line(line).empty())
    throw SchemaError("data file '" + path + "' is empty (header row required)");
  const std::vector<std::string> header = split_csv_line(line);

  auto column_index = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw SchemaError("column '" + name + "' not found in header");
    return static_cast<int>(it - header.begin());
  };

  std::vector<int> xcols;
  for (const auto& name : schema.covariate_columns) xcols.push_back(column_index(name));
  const int zcol = column_index(schema.time_column);
  const int dcol = column_index(schema.status_column);

  Dataset data;
  data.p = static_cast<int>(xcols.size());
  int row = 1;  // header was physical row 1
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw SchemaError("row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                        " fields, header has " + std::to_string(header.size()));
    Observation obs;
    obs.x.resize(data.p);
    for (int j = 0; j < data.p; ++j)
      obs.x[j] = parse_number(cells[xcols[j]], schema.covariate_columns[j], row);
    obs.z = parse_number(cells[zcol], schema.time_column, row);
    const double d = parse_number(cells[dcol], schema.status_column, row);
    if (d != 0.0 && d != 1.0)
      throw SchemaError("status value '" + cells[dcol] + "' at row " + std::to_string(row) +
                        " is not 0 or 1");
    obs.delta = static_cast<int>(d);
    data.observations.push_back(std::move(obs));
  }
  if (data.observations.empty())
    throw SchemaError("data file '" + path + "' contains no observations");
  return data;
}

void write_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  for (int j = 0; j < data.p; ++j) out << "x" << (j + 1) << ",";
  out << "z,delta\n";
  for (const auto& obs : data.observations) {
    for (int j = 0; j < data.p; ++j) out << ReportDoc::format(obs.x[j]) << ",";
    out << ReportDoc::format(obs.z) << "," << obs.delta << "\n";
  }
}

ReportDoc::ReportDoc() { out_ << "format-version 1\n"; }

std::string ReportDoc::format(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void ReportDoc::add(const std::string& key, const std::string& value) {
  out_ << key << " " << value << "\n";
}

void ReportDoc::add(const std::string& key, long long value) {
  out_ << key << " " << value << "\n";
}

void ReportDoc::add(const std::string& key, double value) {
  out_ << key << " " << format(value) << "\n";
}

void ReportDoc::add(const std::string& key, const Eigen::VectorXd& values) {
  out_ << key;
  for (int i = 0; i < values.size(); ++i) out_ << " " << format(values[i]);
  out_ << "\n";
}

void ReportDoc::add(const std::string& key, const Eigen::MatrixXd& values) {
  out_ << key;
  for (int r = 0; r < values.rows(); ++r)
    for (int c = 0; c < values.cols(); ++c) out_ << " " << format(values(r, c));
  out_ << "\n";
}

}  // namespace censfit
