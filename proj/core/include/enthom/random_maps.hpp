#pragma once

#include <cstdint>
#include <random>

#include "enthom/increasing_map.hpp"

namespace enthom {

struct MapGenOptions {
  std::size_t min_knots = 2;
  std::size_t max_knots = 50;
  // Segment slopes are drawn log-uniformly from [min_slope, max_slope]
  // (relative to the overall y/x scale), so maps stay resolvable.
  double min_slope = 0.2;
  double max_slope = 5.0;
  // Probability of composing with a smooth power warp of the y values.
  double warp_probability = 0.5;
};

// Random strictly increasing piecewise-linear map on [lo, hi]. The y range
// starts at 0; its extent follows from the sampled slopes. Deterministic in
// the passed engine state.
IncreasingMap random_increasing_map(std::mt19937_64& rng, double lo, double hi,
                                    const MapGenOptions& opt = {});

}  // namespace enthom
