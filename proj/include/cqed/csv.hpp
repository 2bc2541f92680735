#pragma once

#include <string>
#include <vector>

namespace cqed {

// Shortest round-trip decimal representation, locale independent.
std::string format_double(double v);

struct CsvColumn {
  std::string name;  // include the unit, e.g. "time_ps"
  std::vector<double> values;
};

// RFC-4180-style CSV with a mandatory header row. All columns must have the
// same length; NaN or infinite values are refused.
void write_csv(const std::string& path, const std::vector<CsvColumn>& columns);

}  // namespace cqed
