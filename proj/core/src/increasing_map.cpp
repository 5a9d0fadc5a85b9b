#include "enthom/increasing_map.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "enthom/errors.hpp"

namespace enthom {

namespace {

// Shared interpolation core: piecewise-linear eval of (from, to) at v.
// Points a hair outside [from.front, from.back] are clamped; anything
// further out is a caller error.
double interp(const std::vector<double>& from, const std::vector<double>& to, double v) {
  double span = from.back() - from.front();
  double slack = 1e-9 * span;
  if (v < from.front() - slack || v > from.back() + slack) {
    throw DomainMismatch("IncreasingMap: point outside map domain");
  }
  v = std::clamp(v, from.front(), from.back());
  auto it = std::upper_bound(from.begin(), from.end(), v);
  std::size_t k = (it == from.begin()) ? 0 : static_cast<std::size_t>(it - from.begin()) - 1;
  if (k >= from.size() - 1) k = from.size() - 2;
  double t = (v - from[k]) / (from[k + 1] - from[k]);
  return to[k] + t * (to[k + 1] - to[k]);
}

void check_strictly_increasing(const std::vector<double>& v, const char* what) {
  for (std::size_t k = 0; k + 1 < v.size(); ++k) {
    if (!(v[k + 1] > v[k])) {
      throw std::invalid_argument(std::string("IncreasingMap: ") + what +
                                  " knots must be strictly increasing");
    }
  }
}

}  // namespace

IncreasingMap::IncreasingMap(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
  if (xs_.size() != ys_.size() || xs_.size() < 2) {
    throw std::invalid_argument("IncreasingMap: need >= 2 knot pairs of equal length");
  }
  for (double v : xs_)
    if (!std::isfinite(v)) throw std::invalid_argument("IncreasingMap: non-finite x knot");
  for (double v : ys_)
    if (!std::isfinite(v)) throw std::invalid_argument("IncreasingMap: non-finite y knot");
  check_strictly_increasing(xs_, "x");
  check_strictly_increasing(ys_, "y");
}

IncreasingMap IncreasingMap::identity(double lo, double hi) {
  return IncreasingMap({lo, hi}, {lo, hi});
}

double IncreasingMap::operator()(double x) const { return interp(xs_, ys_, x); }

double IncreasingMap::inverse(double y) const { return interp(ys_, xs_, y); }

double IncreasingMap::slope(std::size_t k) const {
  return (ys_[k + 1] - ys_[k]) / (xs_[k + 1] - xs_[k]);
}

}  // namespace enthom
