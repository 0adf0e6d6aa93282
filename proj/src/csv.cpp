#include "specdiff/csv.hpp"

#include <fstream>
#include <limits>

#include "specdiff/errors.hpp"

namespace specdiff {

void write_series_csv(std::ostream& out, const std::vector<double>& values) {
    const auto old = out.precision(std::numeric_limits<double>::max_digits10);
    out << "index,value\n";
    for (std::size_t i = 0; i < values.size(); ++i) out << i << ',' << values[i] << '\n';
    out.precision(old);
}

void write_series_csv(const std::string& path, const std::vector<double>& values) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write '" + path + "'");
    write_series_csv(out, values);
}

}  // namespace specdiff
