#include "enthom/density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "enthom/errors.hpp"

namespace enthom {

namespace {

// Mass allowed to fall outside a map's domain (or the target grid) before
// pushforward treats it as a real domain violation rather than rounding.
constexpr double kDomainSlackMass = 1e-13;

}  // namespace

Density::Density(Grid grid, std::vector<double> weights)
    : grid_(grid), heights_(std::move(weights)) {
  if (heights_.size() != grid_.size()) {
    throw GridMismatch("Density: weight count does not match grid cell count");
  }
  double total = 0.0;
  for (double w : heights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("Density: weights must be finite and >= 0");
    }
    total += w;
  }
  total *= grid_.delta();
  if (!(total > 0.0)) {
    throw std::invalid_argument("Density: total weight must be positive");
  }
  for (double& h : heights_) h /= total;

  std::size_t n = heights_.size();
  support_lo_ = 0;
  while (heights_[support_lo_] == 0.0) ++support_lo_;
  support_hi_ = n - 1;
  while (heights_[support_hi_] == 0.0) --support_hi_;
}

Density Density::uniform(const Grid& g) {
  return Density(g, std::vector<double>(g.size(), 1.0));
}

Density Density::uniform(const Grid& g, double a, double b) {
  if (!(a < b) || a < g.lo() - 1e-12 || b > g.hi() + 1e-12) {
    throw std::invalid_argument("Density::uniform: [a, b] must be a proper subinterval of the grid");
  }
  std::vector<double> w(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    double l = std::max(a, g.edge(i));
    double r = std::min(b, g.edge(i + 1));
    if (r > l) w[i] = r - l;
  }
  return Density(g, std::move(w));
}

double entropy_bits(std::span<const double> heights, double delta) {
  double acc = 0.0;
  for (double h : heights) {
    if (h > 0.0) acc += h * std::log2(h);
  }
  return -acc * delta;
}

double Density::entropy_bits() const {
  return enthom::entropy_bits(std::span<const double>(heights_), grid_.delta());
}

double Density::mean() const {
  double acc = 0.0;
  for (std::size_t i = 0; i < heights_.size(); ++i) {
    acc += heights_[i] * grid_.center(i);
  }
  return acc * grid_.delta();
}

double Density::variance() const {
  double mu = mean();
  double acc = 0.0;
  for (std::size_t i = 0; i < heights_.size(); ++i) {
    double d = grid_.center(i) - mu;
    acc += heights_[i] * d * d;
  }
  return acc * grid_.delta();
}

bool Density::has_interior_zero() const {
  for (std::size_t i = support_lo_; i <= support_hi_; ++i) {
    if (heights_[i] == 0.0) return true;
  }
  return false;
}

IncreasingMap cdf_map(const Density& d, bool restrict_support) {
  if (d.has_interior_zero() && !restrict_support) {
    throw InteriorZeroRegion(
        "cdf_map: density has a zero-height cell inside its support; "
        "the CDF is not invertible there (pass restrict_support to accept)");
  }
  const Grid& g = d.grid();
  std::size_t s = d.support_lo_cell();
  std::size_t e = d.support_hi_cell();

  std::vector<double> xs, ys;
  xs.reserve(e - s + 2);
  ys.reserve(e - s + 2);
  xs.push_back(g.edge(s));
  ys.push_back(0.0);
  for (std::size_t i = s; i <= e; ++i) {
    double y = ys.back() + d.mass(i);
    if (y <= ys.back()) y = ys.back() + 1e-15;  // keep flat stretches invertible
    xs.push_back(g.edge(i + 1));
    ys.push_back(y);
  }
  double total = ys.back();
  for (double& y : ys) y /= total;
  ys.back() = 1.0;
  return IncreasingMap(std::move(xs), std::move(ys));
}

double pushforward_masses(const Grid& src, std::span<const double> heights,
                          const IncreasingMap& m, const Grid& target,
                          std::span<double> out) {
  const std::vector<double>& kx = m.xs();
  const std::vector<double>& ky = m.ys();
  const double t_lo = target.lo(), t_hi = target.hi(), t_delta = target.delta();
  const auto t_n = static_cast<std::ptrdiff_t>(target.size());

  double outside = 0.0;
  std::size_t seg = 0;  // map segment cursor; advances with x

  for (std::size_t i = 0; i < src.size(); ++i) {
    double h = heights[i];
    if (h <= 0.0) continue;
    double l = src.edge(i), r = src.edge(i + 1);

    // Clip the cell against the map domain; whatever is cut off is outside.
    double cl = std::max(l, m.x_lo());
    double cr = std::min(r, m.x_hi());
    if (cr <= cl) {
      outside += h * (r - l);
      continue;
    }
    outside += h * ((r - l) - (cr - cl));

    while (seg + 2 < kx.size() && kx[seg + 1] <= cl) ++seg;

    // Walk the map segments covering [cl, cr]; the map is affine on each.
    double a = cl;
    std::size_t k = seg;
    while (a < cr) {
      while (k + 2 < kx.size() && kx[k + 1] <= a) ++k;
      double b = std::min(cr, kx[k + 1]);
      if (b <= a) b = cr;  // guard against zero-width slivers from rounding
      double slope = (ky[k + 1] - ky[k]) / (kx[k + 1] - kx[k]);
      double ya = ky[k] + slope * (a - kx[k]);
      double yb = ky[k] + slope * (b - kx[k]);
      if (a == kx[k]) ya = ky[k];
      if (b == kx[k + 1]) yb = ky[k + 1];
      double sub_mass = h * (b - a);

      // Deposit sub_mass over [ya, yb] proportionally onto target cells.
      double ca = std::max(ya, t_lo), cb = std::min(yb, t_hi);
      if (cb <= ca) {
        if (yb > ya) {
          outside += sub_mass;
        } else {
          // Zero-width image (nudged flat stretch): point-deposit.
          double y = std::clamp(ya, t_lo, t_hi);
          auto j = static_cast<std::ptrdiff_t>((y - t_lo) / t_delta);
          out[static_cast<std::size_t>(std::clamp(j, std::ptrdiff_t{0}, t_n - 1))] += sub_mass;
        }
        a = b;
        continue;
      }
      double frac_inside = (yb > ya) ? (cb - ca) / (yb - ya) : 1.0;
      outside += sub_mass * (1.0 - frac_inside);
      double inside_mass = sub_mass * frac_inside;

      auto ja = static_cast<std::ptrdiff_t>((ca - t_lo) / t_delta);
      auto jb = static_cast<std::ptrdiff_t>((cb - t_lo) / t_delta);
      ja = std::clamp(ja, std::ptrdiff_t{0}, t_n - 1);
      jb = std::clamp(jb, std::ptrdiff_t{0}, t_n - 1);
      if (ja == jb) {
        out[static_cast<std::size_t>(ja)] += inside_mass;
      } else {
        double inv_len = 1.0 / (cb - ca);
        for (std::ptrdiff_t j = ja; j <= jb; ++j) {
          double yl = std::max(ca, t_lo + static_cast<double>(j) * t_delta);
          double yr = std::min(cb, t_lo + static_cast<double>(j + 1) * t_delta);
          if (yr > yl) out[static_cast<std::size_t>(j)] += inside_mass * (yr - yl) * inv_len;
        }
      }
      a = b;
    }
  }
  return outside;
}

Density pushforward(const Density& d, const IncreasingMap& m, const Grid& target) {
  std::vector<double> masses(target.size(), 0.0);
  double outside = pushforward_masses(d.grid(), std::span<const double>(d.heights()), m,
                                      target, std::span<double>(masses));
  if (outside > kDomainSlackMass) {
    throw DomainMismatch("pushforward: source density has mass outside the map domain");
  }
  return Density(target, std::move(masses));
}

Density pushforward(const Density& d, const IncreasingMap& m) {
  double x0 = std::max(d.grid().lo(), m.x_lo());
  double x1 = std::min(d.grid().hi(), m.x_hi());
  if (!(x1 > x0)) {
    throw DomainMismatch("pushforward: map domain does not meet the source grid");
  }
  return pushforward(d, m, Grid(m(x0), m(x1), d.grid().size()));
}

}  // namespace enthom
