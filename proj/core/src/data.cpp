#include "rvns/data.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "rvns/errors.hpp"

namespace rvns {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    fields.push_back(field);
  }
  if (!line.empty() && line.back() == ',') {
    fields.emplace_back();
  }
  return fields;
}

std::string strip(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

Dataset generate_chi_squared(int df, std::size_t n, const DataRange& range,
                             Rng& rng) {
  if (df < 1) {
    throw std::invalid_argument("generate_chi_squared: df must be >= 1");
  }
  if (n == 0) {
    throw std::invalid_argument("generate_chi_squared: n must be >= 1");
  }
  std::vector<double> values;
  values.reserve(n);
  while (values.size() < n) {
    const double x = rng.chi_squared(df);
    if (range.contains(x)) {
      values.push_back(x);
    }
  }
  return Dataset(std::move(values), range);
}

LoadResult load_csv(const std::string& path, const std::string& value_column,
                    const DataRange& range) {
  std::ifstream in(path);
  if (!in) {
    throw io_error("cannot open " + path);
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw io_error("empty file " + path);
  }

  const auto header = split_csv_line(line);
  std::size_t column = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (strip(header[i]) == value_column) {
      column = i;
      break;
    }
  }
  if (column == header.size()) {
    throw io_error("column '" + value_column + "' not found in " + path);
  }

  LoadResult result{Dataset({}, range), 0, 0};
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (strip(line).empty()) continue;
    ++result.rows_total;
    const auto fields = split_csv_line(line);
    if (column >= fields.size()) continue;
    const std::string cell = strip(fields[column]);
    if (cell.empty()) continue;
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str() || *end != '\0') continue;
    if (!range.contains(v)) continue;
    values.push_back(v);
    ++result.rows_retained;
  }
  if (values.empty()) {
    throw empty_dataset_error("no usable rows in " + path);
  }
  result.data = Dataset(std::move(values), range);
  return result;
}

}  // namespace rvns
