#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace specdiff {

/// Two-column CSV with header `index,value`; values at full precision.
void write_series_csv(std::ostream& out, const std::vector<double>& values);
void write_series_csv(const std::string& path, const std::vector<double>& values);

}  // namespace specdiff
