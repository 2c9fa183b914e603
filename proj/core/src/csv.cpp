#include <coda_ica/csv.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace coda_ica::csv {

namespace {

std::string locate(const std::string& what, std::size_t row, std::size_t column) {
  std::ostringstream os;
  os << what;
  if (row) os << " (row " << row;
  if (column) os << ", column " << column;
  if (row) os << ")";
  return os.str();
}

std::vector<std::string> split(const std::string& line, char delimiter) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == delimiter) {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  fields.push_back(field);
  return fields;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\"");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\"");
  return s.substr(first, last - first + 1);
}

}  // namespace

ParseError::ParseError(const std::string& what, std::size_t row, std::size_t column)
    : DomainError(locate(what, row, column)), row_(row), column_(column) {}

Table read_table(std::istream& in, char delimiter) {
  Table table;
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty input: missing header row", 1, 0);
  for (auto& name : split(line, delimiter)) table.names.push_back(trim(name));
  const std::size_t ncol = table.names.size();

  std::vector<std::vector<double>> rows;
  std::size_t row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line, delimiter);
    if (fields.size() != ncol) {
      std::ostringstream os;
      os << "expected " << ncol << " fields, found " << fields.size();
      throw ParseError(os.str(), row_no, 0);
    }
    std::vector<double> values(ncol);
    for (std::size_t j = 0; j < ncol; ++j) {
      const std::string f = trim(fields[j]);
      const char* begin = f.data();
      const char* end = f.data() + f.size();
      auto [ptr, ec] = std::from_chars(begin, end, values[j]);
      if (f.empty() || ec != std::errc() || ptr != end)
        throw ParseError("not a decimal number: '" + f + "'", row_no, j + 1);
    }
    rows.push_back(std::move(values));
  }

  table.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(ncol));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < ncol; ++j)
      table.values(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  return table;
}

Table read_table_file(const std::string& path, char delimiter) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0, 0);
  return read_table(in, delimiter);
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_table(std::ostream& out, const std::vector<std::string>& names, const Matrix& values,
                 char delimiter) {
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (j) out << delimiter;
    out << names[j];
  }
  out << '\n';
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index j = 0; j < values.cols(); ++j) {
      if (j) out << delimiter;
      out << format_double(values(i, j));
    }
    out << '\n';
  }
}

void write_table_file(const std::string& path, const std::vector<std::string>& names,
                      const Matrix& values, char delimiter) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write '" + path + "'");
  write_table(out, names, values, delimiter);
}

CompositionMatrix read_composition(std::istream& in, char delimiter) {
  Table t = read_table(in, delimiter);
  if (t.names.size() < 2) throw ParseError("a composition needs at least 2 parts", 1, 0);
  for (Index i = 0; i < t.values.rows(); ++i)
    for (Index j = 0; j < t.values.cols(); ++j)
      if (!(t.values(i, j) > 0.0))
        throw ParseError("part values must be strictly positive", static_cast<std::size_t>(i) + 2,
                         static_cast<std::size_t>(j) + 1);
  return CompositionMatrix(std::move(t.values), std::nullopt, std::move(t.names));
}

CompositionMatrix read_composition_file(const std::string& path, char delimiter) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0, 0);
  return read_composition(in, delimiter);
}

}  // namespace coda_ica::csv
