#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "enthom/capacity.hpp"
#include "enthom/channel.hpp"
#include "enthom/errors.hpp"
#include "enthom/homogenize.hpp"
#include "enthom/random_maps.hpp"

using namespace enthom;

namespace {

const double kLog2Of5 = std::log2(5.0);

Channel two_form(std::size_t n) {
  return Channel::piecewise_uniform(Grid(0.0, 1.0, n), Grid(0.0, 1.0, n), [](double e) {
    return e < 0.6 ? std::pair{0.25, 0.75} : std::pair{0.0, 1.0};
  });
}

HomogenizedSystem solved_system(std::size_t n) {
  Channel ch = two_form(n);
  return build_homogenized(ch, solve_capacity(ch), n);
}

}  // namespace

TEST_CASE("uniformized maps hit the exact landmarks of the two-form channel") {
  HomogenizedSystem sys = solved_system(200);
  CHECK(sys.map_q(0.25) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(sys.map_q(0.75) == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(sys.map_q(0.0) == doctest::Approx(0.0));
  CHECK(sys.map_q(1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sys.map_e(0.6) == doctest::Approx(0.6).epsilon(1e-9));  // uniform optimal input
  CHECK(sys.capacity_bits == doctest::Approx(kLog2Of5 - 2.0).epsilon(1e-9));
  CHECK_FALSE(sys.support_restricted_e);
  CHECK_FALSE(sys.support_restricted_q);
}

TEST_CASE("star rows take the two exact transformed forms") {
  HomogenizedSystem sys = solved_system(200);
  const Channel& star = sys.star_channel;
  const Grid& se = star.e_grid();
  const Grid& sq = star.q_grid();
  CHECK(star.k(se.cell_of(0.3), sq.cell_of(0.5)) == doctest::Approx(1.25).epsilon(1e-9));
  CHECK(star.k(se.cell_of(0.3), sq.cell_of(0.05)) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(star.k(se.cell_of(0.8), sq.cell_of(0.05)) == doctest::Approx(2.5).epsilon(1e-9));
  CHECK(star.k(se.cell_of(0.8), sq.cell_of(0.5)) == doctest::Approx(0.625).epsilon(1e-9));
}

TEST_CASE("conditional entropy is flat at minus the capacity, e-labels notwithstanding") {
  Channel ch = two_form(200);
  CapacitySolution sol = solve_capacity(ch);
  HomogenizedSystem sys = build_homogenized(ch, sol, 200);

  // star-sampled profile
  for (double h : sys.entropy_profile)
    CHECK(h == doctest::Approx(-sys.capacity_bits).epsilon(1e-9));

  // untransformed conditioning: push each source row as-is; the entropy of
  // the transformed row cannot depend on how its source label was mapped
  Grid star_q(0.0, 1.0, 200);
  for (std::size_t i = 0; i < ch.ne(); ++i) {
    if (!sol.on_support(i)) continue;
    Density pushed = pushforward(ch.row_density(i), sys.map_q, star_q);
    CHECK(pushed.entropy_bits() == doctest::Approx(-sys.capacity_bits).epsilon(1e-9));
  }
}

TEST_CASE("flatness certificate stays flat under star refinement") {
  Channel ch = two_form(200);
  CapacitySolution sol = solve_capacity(ch);
  HomogenizedSystem sys = build_homogenized(ch, sol, 200);
  EntropyFlatnessReport rep = certify_entropy_flatness(ch, sol, sys);
  CHECK(rep.max_abs_dev <= 1e-9);
  CHECK(rep.max_abs_dev_refined <= 1e-9);
  CHECK(rep.mean_abs_dev <= rep.max_abs_dev);
  CHECK(rep.max_abs_dev_interior <= rep.max_abs_dev);
  CHECK(rep.n_star == 200);
  CHECK(rep.capacity_bits == doctest::Approx(kLog2Of5 - 2.0).epsilon(1e-9));
}

TEST_CASE("the star marginal is uniform at matched resolution") {
  for (std::size_t n : {200u, 400u}) {
    HomogenizedSystem sys = solved_system(n);
    Density mq = marginal_q(sys.star_channel, uniform_input(sys.star_channel));
    double dev = 0.0;
    for (std::size_t j = 0; j < mq.grid().size(); ++j)
      dev = std::max(dev, std::fabs(mq.height(j) - 1.0));
    CHECK(dev <= 1e-12);
  }
}

TEST_CASE("the star channel has the same capacity as its source") {
  HomogenizedSystem sys = solved_system(200);
  CapacitySolution again = solve_capacity(sys.star_channel);
  CHECK(again.capacity_bits == doctest::Approx(sys.capacity_bits).epsilon(1e-8));
  CHECK(sys.capacity_bits >= 0.0);  // star entropies stay <= 0 on [0,1]
}

TEST_CASE("information is untouched by increasing reparameterizations") {
  // the system's own maps on the exact channel
  Channel ch = two_form(200);
  CapacitySolution sol = solve_capacity(ch);
  HomogenizedSystem sys = build_homogenized(ch, sol, 200);
  MiInvarianceReport own = mi_invariance_check(ch, sol.f_tilde_e, sys.map_q, sys.map_e);
  CHECK(own.abs_delta <= 1e-6);

  // random map pairs on a smooth channel
  Channel smooth = Channel::gaussian(Grid(0.0, 1.0, 1024), Grid(0.0, 1.0, 1024),
                                     [](double e) { return e; }, [](double) { return 0.05; });
  InputDistribution fe = uniform_input(smooth);
  std::mt19937_64 rng(99u);
  for (int t = 0; t < 3; ++t) {
    IncreasingMap gq = random_increasing_map(rng, 0.0, 1.0);
    IncreasingMap ge = random_increasing_map(rng, 0.0, 1.0);
    MiInvarianceReport rep = mi_invariance_check(smooth, fe, gq, ge);
    CHECK(rep.abs_delta <= 1e-3);
    CHECK(rep.i_before_bits > 0.0);
  }
}

TEST_CASE("interior-zero inputs require explicit support restriction") {
  Channel ch = two_form(120);
  Grid eg = ch.e_grid();
  std::vector<double> w(120, 0.0);
  for (std::size_t i = 0; i < 120; ++i) {
    double e = eg.center(i);
    if (e < 0.3 || e > 0.7) w[i] = 1.0;
  }
  CapacitySolution sol = solution_from_input(ch, InputDistribution{Density(eg, w)});
  CHECK_THROWS_AS((void)build_homogenized(ch, sol, 120), InteriorZeroRegion);
  HomogenizedSystem sys = build_homogenized(ch, sol, 120, true);
  CHECK(sys.support_restricted_e);
  CHECK(sys.map_e(0.0) == doctest::Approx(0.0));
  CHECK(sys.map_e(1.0) == doctest::Approx(1.0).epsilon(1e-9));
}
