#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

#include "enthom/channel.hpp"
#include "enthom/grid.hpp"
#include "enthom/homogenize.hpp"

namespace enthom {

// Per-cell description of a channel whose conditional density drifts slowly
// with e: mean map m(e), its slope, and the conditional entropy h(Q|e).
// sigma is the conditional spread (Gaussian-equivalent when only h is known).
struct SlowChangeProfile {
  Grid e_grid;
  std::vector<double> m;
  std::vector<double> m_prime;
  std::vector<double> h_bits;
  std::vector<double> sigma;
  double sigma_max;
};

// Profile of a Gaussian family N(mean(e), sigma(e)^2). The slope comes from
// dmean when given, otherwise from central differences of mean at the cell
// centers.
SlowChangeProfile gaussian_profile(const Grid& e_grid,
                                   const std::function<double(double)>& mean,
                                   const std::function<double(double)>& sigma,
                                   const std::function<double(double)>& dmean = nullptr);

// CSV with header "e,m,sigma" or "e,m,h". With sigma given, h is the
// Gaussian entropy 0.5 log2(2 pi e sigma^2); with h given, sigma is the
// Gaussian-equivalent spread 2^h / sqrt(2 pi e).
SlowChangeProfile profile_from_csv(std::istream& is);

struct SlowChangeInput {
  InputDistribution f_tilde_e;
  double n_value;        // integral of m'(e) / 2^{h(Q|e)}
  double capacity_bits;  // log2(n_value)
};

// Closed-form capacity-achieving input for the slow-change regime:
// density proportional to m'(e) / 2^{h(Q|e)}. Throws NonPositiveSlope
// where the mean map fails to increase.
SlowChangeInput slow_change_input(const SlowChangeProfile& p);

double slow_change_capacity(const SlowChangeProfile& p);

struct MeanAlignmentReport {
  double max_abs_dev;         // max |mean(star row at e*) - e*| over interior star cells
  double ratio_to_sigma_max;  // max_abs_dev / sigma_max
  double sigma_max;
  double boundary_margin;     // source-space width excluded at each e end
  std::size_t cells_checked;
};

// In star coordinates the conditional mean should collapse onto the
// diagonal: the mean of the star row at e* equals e* up to O(sigma_max).
// Star cells whose source point map_e^{-1}(e*) lies within boundary_margin
// of the e range are excluded; pass a negative margin to use 3 * sigma_max.
MeanAlignmentReport certify_mean_alignment(const HomogenizedSystem& sys,
                                           const SlowChangeProfile& p,
                                           double boundary_margin = -1.0);

// The profile's mean values as an invertible map over the e grid centers.
IncreasingMap profile_mean_map(const SlowChangeProfile& p);

// e-locations (cell edges) where sigma or m' jumps by more than rel_tol
// between adjacent cells. The flatness corollaries assume both vary slowly,
// so their statements do not cover neighborhoods of such points.
std::vector<double> regime_breakpoints(const SlowChangeProfile& p, double rel_tol = 0.05);

struct PosteriorUniformityReport {
  double max_mean_dev;       // max |E[E*|q*] - q*| over interior star cells
  double h_spread_interior;  // max - min of h(E*|q*) over interior cells
  double h_spread_all;       // same over every defined cell
  double boundary_margin;
  std::size_t cells_checked;
};

// Under a uniform star input the posterior mean of E* should sit near q*
// and h(E*|q*) should be flat wherever the slow-change assumptions hold.
// A q* cell counts as interior when its source point alpha = m^{-1}(q)
// keeps boundary_margin distance from the e range ends and from every
// regime breakpoint of the profile; observations outside the mean map's
// range are excluded outright. A negative margin selects
// 3 sigma_max / min(m'), the e-space width over which an observation
// constrains the source.
PosteriorUniformityReport certify_posterior_uniformity(const HomogenizedSystem& sys,
                                                       const SlowChangeProfile& p,
                                                       double boundary_margin = -1.0);

// Profile-free variant for channels outside the slow-change regime: every
// defined cell participates, so h_spread_interior == h_spread_all.
PosteriorUniformityReport certify_posterior_uniformity(const HomogenizedSystem& sys);

// Homogenized system driven by the closed-form slow-change input instead of
// a solver run: the smooth density of slow_change_input feeds the transform
// pair, which is what the alignment and posterior certificates describe.
HomogenizedSystem slow_change_system(const Channel& ch, const SlowChangeProfile& p,
                                     std::size_t n_star, bool restrict_support = false);

}  // namespace enthom
