#include "enthom/random_maps.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace enthom {

IncreasingMap random_increasing_map(std::mt19937_64& rng, double lo, double hi,
                                    const MapGenOptions& opt) {
  std::uniform_int_distribution<std::size_t> knot_count(opt.min_knots, opt.max_knots);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::size_t k = knot_count(rng);
  std::size_t segments = k - 1;

  // Segment widths: a positive floor plus exponential noise keeps every
  // segment a reasonable fraction of the interval.
  std::vector<double> gap(segments);
  double gap_total = 0.0;
  for (double& g : gap) {
    g = 0.25 - std::log(1.0 - unit(rng));
    gap_total += g;
  }

  double log_lo = std::log(opt.min_slope), log_hi = std::log(opt.max_slope);
  std::vector<double> xs(k), slope(segments);
  xs[0] = lo;
  double span = hi - lo;
  double acc = 0.0;
  for (std::size_t s = 0; s < segments; ++s) {
    acc += gap[s];
    xs[s + 1] = lo + span * (acc / gap_total);
    slope[s] = std::exp(log_lo + (log_hi - log_lo) * unit(rng));
  }
  xs[k - 1] = hi;  // pin the endpoint exactly

  if (unit(rng) < opt.warp_probability) {
    // Smooth monotone warp: raise slopes to a common power, then clamp back
    // into the allowed band so the map stays resolvable on a grid.
    double gamma = std::exp(std::log(0.5) + std::log(4.0) * unit(rng));
    for (double& s : slope) {
      s = std::clamp(std::pow(s, gamma), opt.min_slope, opt.max_slope);
    }
  }

  std::vector<double> ys(k);
  ys[0] = 0.0;
  for (std::size_t s = 0; s < segments; ++s) {
    ys[s + 1] = ys[s] + slope[s] * (xs[s + 1] - xs[s]);
  }
  return IncreasingMap(std::move(xs), std::move(ys));
}

}  // namespace enthom
