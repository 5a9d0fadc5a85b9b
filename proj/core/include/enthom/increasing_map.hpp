#pragma once

#include <cstddef>
#include <vector>

namespace enthom {

// Strictly increasing piecewise-linear map given by knots (x_k, y_k).
// Evaluation interpolates linearly between knots; the inverse swaps roles.
// Both knot sequences must be strictly increasing, so the map is a bijection
// [x_front, x_back] -> [y_front, y_back].
class IncreasingMap {
 public:
  IncreasingMap(std::vector<double> xs, std::vector<double> ys);

  static IncreasingMap identity(double lo, double hi);

  double operator()(double x) const;
  double inverse(double y) const;

  double x_lo() const { return xs_.front(); }
  double x_hi() const { return xs_.back(); }
  double y_lo() const { return ys_.front(); }
  double y_hi() const { return ys_.back(); }

  std::size_t knot_count() const { return xs_.size(); }
  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }

  // Slope of segment k (between knots k and k+1); always positive.
  double slope(std::size_t k) const;

  // The same map with x and y exchanged.
  IncreasingMap inverted() const { return IncreasingMap(ys_, xs_); }

 private:
  std::vector<double> xs_;
  std::vector<double> ys_;
};

}  // namespace enthom
