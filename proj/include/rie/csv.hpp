#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>

#include <Eigen/Dense>

#include "rie/errors.hpp"

namespace rie {

/// Non-numeric or ragged CSV content. Row and column are 1-based positions
/// in the file.
class CsvError : public InputError {
 public:
  CsvError(const std::string& what, std::size_t row, std::size_t col)
      : InputError(what), row_(row), col_(col) {}
  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

/// Unreadable or unwritable file.
class FileError : public InputError {
 public:
  using InputError::InputError;
};

/// Parses comma-separated numbers. A first row containing any non-numeric
/// cell is taken as a header and skipped. Blank lines are ignored.
Eigen::MatrixXd parse_csv_matrix(std::istream& in);
Eigen::MatrixXd read_csv_matrix(const std::string& path);

/// Writes with 17 significant digits so values survive a round trip.
void write_csv_matrix(std::ostream& out, const Eigen::MatrixXd& m);
void write_csv_matrix(const std::string& path, const Eigen::MatrixXd& m);

}  // namespace rie
