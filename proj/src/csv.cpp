#include "cqed/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "cqed/errors.hpp"

namespace cqed {

std::string format_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_csv(const std::string& path,
               const std::vector<CsvColumn>& columns) {
  if (columns.empty()) throw SolverError("write_csv: no columns");
  std::size_t rows = columns.front().values.size();
  for (const auto& c : columns)
    if (c.values.size() != rows)
      throw SolverError("write_csv: column length mismatch");

  std::string out;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) out += ',';
    out += columns[c].name;
  }
  out += '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      double v = columns[c].values[r];
      if (!std::isfinite(v))
        throw SolverError("write_csv: non-finite value in column '" +
                          columns[c].name + "'");
      if (c) out += ',';
      out += format_double(v);
    }
    out += '\n';
  }

  std::ofstream f(path, std::ios::binary);
  if (!f) throw SolverError("cannot open '" + path + "' for writing");
  f << out;
  if (!f) throw SolverError("write to '" + path + "' failed");
}

}  // namespace cqed
