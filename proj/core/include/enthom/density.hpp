#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "enthom/grid.hpp"
#include "enthom/increasing_map.hpp"

namespace enthom {

// Piecewise-constant probability density on a Grid. Heights are per unit
// length; sum(height_i) * delta == 1 after every constructor and transform.
class Density {
 public:
  // Builds from nonnegative weights (any positive total); they are rescaled
  // so the density integrates to one exactly.
  Density(Grid grid, std::vector<double> weights);

  static Density uniform(const Grid& g);
  // Uniform on [a, b]; cells partially covered by [a, b] get fractional
  // weight so the construction is exact even when a or b is not a cell edge.
  static Density uniform(const Grid& g, double a, double b);

  const Grid& grid() const { return grid_; }
  const std::vector<double>& heights() const { return heights_; }
  double height(std::size_t i) const { return heights_[i]; }
  double mass(std::size_t i) const { return heights_[i] * grid_.delta(); }

  // Differential entropy -sum h_i * delta * log2(h_i), in bits; zero-height
  // cells contribute nothing.
  double entropy_bits() const;

  // Midpoint-rule moments over cell centers.
  double mean() const;
  double variance() const;

  std::size_t support_lo_cell() const { return support_lo_; }
  std::size_t support_hi_cell() const { return support_hi_; }
  bool has_interior_zero() const;

 private:
  Grid grid_;
  std::vector<double> heights_;
  std::size_t support_lo_ = 0;
  std::size_t support_hi_ = 0;
};

// Entropy of raw heights on a grid with spacing delta, without constructing
// a Density. Used in inner loops over channel rows.
double entropy_bits(std::span<const double> heights, double delta);

// CDF of d restricted to its support interval, as a strictly increasing map
// onto [0, 1]. Knots sit on cell edges. A zero-height cell strictly inside
// the support makes the CDF flat there; by default that raises
// InteriorZeroRegion. With restrict_support=true the flat stretch is kept
// strictly increasing by a ~1e-15 nudge, which makes the inverse a
// pseudo-inverse inside the (zero-mass) region.
IncreasingMap cdf_map(const Density& d, bool restrict_support = false);

// Pushforward of d through the increasing map m, rebinned onto `target`.
// Mass-conserving: each source cell's mass lands in the target cells its
// image overlaps, split exactly (source cells are cut at map knots first, so
// the result is exact up to target-grid rebinning). Source mass outside the
// map domain beyond a ~1e-13 rounding allowance raises DomainMismatch.
Density pushforward(const Density& d, const IncreasingMap& m, const Grid& target);

// Same, with the default target: [m(lo), m(hi)] at the source cell count.
Density pushforward(const Density& d, const IncreasingMap& m);

// Allocation-free core of pushforward for hot loops: writes unnormalized
// masses into out (sized target.size(), zero-filled by the callee).
// Returns the amount of source mass that fell outside the map domain.
double pushforward_masses(const Grid& src, std::span<const double> heights,
                          const IncreasingMap& m, const Grid& target,
                          std::span<double> out);

}  // namespace enthom
