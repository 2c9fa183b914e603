#pragma once

#include <coda_ica/coda.hpp>
#include <coda_ica/types.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace coda_ica::csv {

/// Malformed input. Row and column are 1-based positions in the file
/// (row 1 is the header); 0 means "not applicable".
class ParseError : public DomainError {
 public:
  ParseError(const std::string& what, std::size_t row, std::size_t column);
  std::size_t row() const { return row_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

struct Table {
  std::vector<std::string> names;
  Matrix values;
};

Table read_table(std::istream& in, char delimiter = ',');
Table read_table_file(const std::string& path, char delimiter = ',');

/// Header + numeric rows; numbers are written in shortest round-trip form.
void write_table(std::ostream& out, const std::vector<std::string>& names, const Matrix& values,
                 char delimiter = ',');
void write_table_file(const std::string& path, const std::vector<std::string>& names,
                      const Matrix& values, char delimiter = ',');

/// Reads a composition: header of part names, strictly positive values.
CompositionMatrix read_composition(std::istream& in, char delimiter = ',');
CompositionMatrix read_composition_file(const std::string& path, char delimiter = ',');

std::string format_double(double v);

}  // namespace coda_ica::csv
