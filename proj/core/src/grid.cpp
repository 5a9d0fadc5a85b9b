#include "enthom/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace enthom {

Grid::Grid(double lo, double hi, std::size_t n) : lo_(lo), hi_(hi), n_(n) {
  if (!(std::isfinite(lo) && std::isfinite(hi)) || !(hi > lo)) {
    throw std::invalid_argument("Grid: need finite bounds with hi > lo");
  }
  if (n < 2) {
    throw std::invalid_argument("Grid: need at least 2 cells");
  }
  delta_ = (hi - lo) / static_cast<double>(n);
}

std::size_t Grid::cell_of(double x) const {
  double t = (x - lo_) / delta_;
  if (t <= 0.0) return 0;
  auto i = static_cast<std::size_t>(t);
  return i >= n_ ? n_ - 1 : i;
}

bool Grid::has_edge_at(double x, double tol) const {
  double t = (x - lo_) / delta_;
  double nearest = std::round(t);
  if (nearest < 0.0 || nearest > static_cast<double>(n_)) return false;
  return std::abs(t - nearest) * delta_ <= tol;
}

}  // namespace enthom
