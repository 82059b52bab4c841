#pragma once

#include "censfit/likelihood.hpp"

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace censfit {

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Column roles for CSV ingestion; all columns are referenced by header name.
struct CsvSchema {
  std::vector<std::string> covariate_columns;
  std::string time_column;
  std::string status_column;
};

// Reads a comma-delimited file with a mandatory header row. Schema
// violations (missing column, non-numeric cell, status not in {0,1}) raise
// SchemaError naming the offending physical row.
Dataset read_csv(const std::string& path, const CsvSchema& schema);

// Companion writer: header x1..xp,z,delta; values at full precision.
void write_csv(const Dataset& data, const std::string& path);

// Machine-readable report: one key per line, space-separated values at
// round-trip precision, matrices flattened row-major. Every document starts
// with "format-version 1".
class ReportDoc {
 public:
  ReportDoc();
  void add(const std::string& key, const std::string& value);
  void add(const std::string& key, long long value);
  void add(const std::string& key, double value);
  void add(const std::string& key, const Eigen::VectorXd& values);
  void add(const std::string& key, const Eigen::MatrixXd& values);  // row-major
  std::string str() const { return out_.str(); }

  static std::string format(double value);

 private:
  std::ostringstream out_;
};

}  // namespace censfit
