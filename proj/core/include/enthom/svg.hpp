#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace enthom::svg {

// One polyline; x and y must have equal length.
struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

// Minimal deterministic line plot: fixed palette, axes with min/max labels,
// legend in the top-right corner. Output is byte-stable for identical input.
void write_plot(std::ostream& os, const std::vector<Series>& series,
                const std::string& title, int width = 720, int height = 440);

}  // namespace enthom::svg
