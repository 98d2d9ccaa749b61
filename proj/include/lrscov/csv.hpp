#pragma once

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

#include "lrscov/types.hpp"

namespace lrscov {

// A numeric CSV, optionally with a single header row of variable labels
// (auto-detected: a non-numeric first row is treated as the header).
struct CsvMatrix {
  Eigen::MatrixXd values;
  std::vector<std::string> labels;  // empty when the file had no header
};

CsvMatrix read_csv_matrix(const std::string& path);

// Writes with 17 significant digits so a read-back is value-identical.
void write_csv_matrix(const std::string& path, const Eigen::MatrixXd& m,
                      const std::vector<std::string>& labels = {});

// Generic table writer for reports; cells are preformatted strings.
void write_csv_table(const std::string& path,
                     const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows);

// Shortest decimal form that round-trips the double exactly.
std::string format_double(double x);

// Formats an optional value, using "NA" when absent (undefined rates).
std::string format_optional(const std::optional<double>& x);

// Writes via a temporary file in the same directory plus an atomic rename.
void atomic_write_text(const std::string& path, const std::string& content);

}  // namespace lrscov
