#pragma once

#include <cstddef>

namespace enthom {

// Uniform partition of a bounded interval [lo, hi] into n cells.
// Cell i covers [edge(i), edge(i+1)) with center(i) at its midpoint.
class Grid {
 public:
  Grid(double lo, double hi, std::size_t n);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  std::size_t size() const { return n_; }
  double delta() const { return delta_; }

  double edge(std::size_t i) const { return lo_ + static_cast<double>(i) * delta_; }
  double center(std::size_t i) const { return lo_ + (static_cast<double>(i) + 0.5) * delta_; }

  // Index of the cell containing x, clamped to [0, n-1] at the boundaries.
  std::size_t cell_of(double x) const;

  // True if x coincides with some cell edge to within tol.
  bool has_edge_at(double x, double tol = 1e-12) const;

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.lo_ == b.lo_ && a.hi_ == b.hi_ && a.n_ == b.n_;
  }
  friend bool operator!=(const Grid& a, const Grid& b) { return !(a == b); }

 private:
  double lo_;
  double hi_;
  std::size_t n_;
  double delta_;
};

}  // namespace enthom
