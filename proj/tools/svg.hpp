#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace crk::cli {

struct Series {
  std::string label;
  std::string color;
  std::vector<std::pair<double, double>> points;  // (ndof, value), all positive
};

/// Log-log plot of the series plus dashed guide lines through the first
/// point of the first series with the given slopes.
void write_loglog_svg(std::ostream& os, const std::vector<Series>& series,
                      const std::vector<std::pair<double, std::string>>& guides,
                      const std::string& title);

}  // namespace crk::cli
