#pragma once

#include <cstddef>

#include "enthom/capacity.hpp"
#include "enthom/channel.hpp"
#include "enthom/increasing_map.hpp"

namespace enthom {

// The channel rewritten in uniformized coordinates: e* = F(e) under the
// capacity-achieving input, q* = F(q) under the induced output marginal.
// Both axes land on [0, 1]; the input and output marginals become uniform.
struct HomogenizedSystem {
  IncreasingMap map_e;              // e -> e*
  IncreasingMap map_q;              // q -> q*
  Channel star_channel;             // K(q* | e*) on [0,1] x [0,1]
  std::vector<double> entropy_profile;  // h(Q*|e*) per star e-cell
  double capacity_bits;
  bool support_restricted_e;  // map_e is not a bijection on the full e grid
  bool support_restricted_q;  // (narrower support or an interior zero region)
};

// Builds the uniformized system. Each star row is the source row at
// e = map_e^{-1}(e*-center), pushed through map_q and rebinned onto the
// star grid. restrict_support is forwarded to cdf_map for densities with
// interior zero cells.
HomogenizedSystem build_homogenized(const Channel& ch, const CapacitySolution& sol,
                                    std::size_t n_star, bool restrict_support = false);

struct EntropyFlatnessReport {
  double capacity_bits;
  double max_abs_dev;           // max_i |h(Q*|e*_i) + C|
  double mean_abs_dev;
  double max_abs_dev_refined;   // same at twice the star resolution
  double max_abs_dev_interior;          // excludes cells near the e ends
  double max_abs_dev_interior_refined;  // interior figure at 2x resolution
  double boundary_margin;
  std::size_t n_star;
};

// Checks that the conditional entropy profile of the star channel is flat
// at -C, and reports how the deviation moves under star-grid refinement.
// boundary_margin (source e units) excludes star cells whose source point
// sits within that distance of the channel's e range; rows there are
// truncation-dominated for narrow-kernel channels.
EntropyFlatnessReport certify_entropy_flatness(const Channel& ch, const CapacitySolution& sol,
                                               const HomogenizedSystem& sys,
                                               double boundary_margin = 0.0);

struct MiInvarianceReport {
  double i_before_bits;
  double i_after_bits;
  double abs_delta;
};

// Applies increasing coordinate changes to both axes and recomputes the
// mutual information; the two values agree up to discretization.
// Passing 0 for an output cell count reuses the source grid's count.
MiInvarianceReport mi_invariance_check(const Channel& ch, const InputDistribution& fe,
                                       const IncreasingMap& map_q, const IncreasingMap& map_e,
                                       std::size_t n_e_out = 0, std::size_t n_q_out = 0);

}  // namespace enthom
