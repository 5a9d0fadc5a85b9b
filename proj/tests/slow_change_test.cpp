#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "enthom/channel.hpp"
#include "enthom/errors.hpp"
#include "enthom/slow_change.hpp"

using namespace enthom;

namespace {

double gauss_h(double sigma) {
  return 0.5 * std::log2(2.0 * std::numbers::pi_v<double> * std::numbers::e_v<double> * sigma *
                         sigma);
}

SlowChangeProfile step_profile(std::size_t n, double s0) {
  return gaussian_profile(
      Grid(0.0, 1.0, n), [](double e) { return e; },
      [s0](double e) { return e < 0.5 ? s0 : 2.0 * s0; }, [](double) { return 1.0; });
}

}  // namespace

TEST_CASE("gaussian profile carries the analytic fields") {
  SlowChangeProfile p = step_profile(100, 0.01);
  CHECK(p.m.size() == 100);
  CHECK(p.m[10] == doctest::Approx(Grid(0.0, 1.0, 100).center(10)).epsilon(1e-14));
  CHECK(p.m_prime[42] == doctest::Approx(1.0));
  CHECK(p.sigma[10] == doctest::Approx(0.01));
  CHECK(p.sigma[90] == doctest::Approx(0.02));
  CHECK(p.sigma_max == doctest::Approx(0.02));
  CHECK(p.h_bits[10] == doctest::Approx(gauss_h(0.01)).epsilon(1e-12));
}

TEST_CASE("slope falls back to central differences when not supplied") {
  auto mean = [](double e) { return e * e + e; };
  SlowChangeProfile p = gaussian_profile(Grid(0.0, 1.0, 400), mean,
                                         [](double) { return 0.05; });
  Grid g(0.0, 1.0, 400);
  for (std::size_t i = 40; i < 360; i += 40)
    CHECK(p.m_prime[i] == doctest::Approx(2.0 * g.center(i) + 1.0).epsilon(1e-5));
}

TEST_CASE("drift-free formula input is the uniform density with the closed-form rate") {
  double s = 0.01;
  SlowChangeProfile p = gaussian_profile(Grid(0.0, 1.0, 500), [](double e) { return e; },
                                         [s](double) { return s; }, [](double) { return 1.0; });
  SlowChangeInput sci = slow_change_input(p);
  for (std::size_t i = 0; i < 500; ++i)
    CHECK(sci.f_tilde_e.density().height(i) == doctest::Approx(1.0).epsilon(1e-12));
  double want = std::log2(1.0 / (s * std::sqrt(2.0 * std::numbers::pi_v<double> *
                                               std::numbers::e_v<double>)));
  CHECK(sci.capacity_bits == doctest::Approx(want).epsilon(1e-12));
  CHECK(sci.capacity_bits == doctest::Approx(-gauss_h(s)).epsilon(1e-12));
  CHECK(slow_change_capacity(p) == doctest::Approx(sci.capacity_bits).epsilon(1e-15));
  CHECK(sci.n_value == doctest::Approx(std::exp2(sci.capacity_bits)).epsilon(1e-12));
}

TEST_CASE("formula input is normalized and positive wherever the mean map climbs") {
  SlowChangeProfile p = step_profile(300, 0.02);
  SlowChangeInput sci = slow_change_input(p);
  double mass = 0.0;
  for (std::size_t i = 0; i < 300; ++i) {
    CHECK(sci.f_tilde_e.density().height(i) > 0.0);
    mass += sci.f_tilde_e.density().mass(i);
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  // the quieter half gets twice the density
  CHECK(sci.f_tilde_e.density().height(30) ==
        doctest::Approx(2.0 * sci.f_tilde_e.density().height(270)).epsilon(1e-12));
}

TEST_CASE("a sagging mean map is rejected") {
  SlowChangeProfile p = step_profile(100, 0.01);
  for (std::size_t i = 50; i < 100; ++i) p.m_prime[i] = -0.5;
  CHECK_THROWS_AS((void)slow_change_input(p), NonPositiveSlope);
}

TEST_CASE("profile csv accepts both column conventions") {
  std::stringstream with_sigma("e,m,sigma\n0.125,0.2,0.01\n0.375,0.4,0.01\n0.625,0.6,0.02\n0.875,0.8,0.02\n");
  SlowChangeProfile a = profile_from_csv(with_sigma);
  CHECK(a.e_grid.size() == 4);
  CHECK(a.sigma[2] == doctest::Approx(0.02));
  CHECK(a.h_bits[2] == doctest::Approx(gauss_h(0.02)).epsilon(1e-12));
  CHECK(a.m_prime[1] == doctest::Approx(0.8).epsilon(1e-9));  // central difference

  std::stringstream with_h("e,m,h\n0.25,0.25,-5.0\n0.75,0.75,-5.0\n");
  SlowChangeProfile b = profile_from_csv(with_h);
  CHECK(b.h_bits[0] == doctest::Approx(-5.0));
  CHECK(b.sigma[0] ==
        doctest::Approx(std::exp2(-5.0) / std::sqrt(2.0 * std::numbers::pi_v<double> *
                                                    std::numbers::e_v<double>)).epsilon(1e-12));

  std::stringstream bad("e,m,volume\n0,0,0\n");
  CHECK_THROWS_AS((void)profile_from_csv(bad), ParseError);
}

TEST_CASE("the marginal obeys the density and cdf transport identities") {
  // f_Q(m(e)) ~ f_E(e)/m'(e) and F_Q(m(e)) ~ F_E(e) at interior points
  std::size_t n = 1000;
  Grid eg(0.0, 1.0, n), qg(0.0, 1.0, n);
  auto mean = [](double e) { return e < 0.5 ? e : 0.25 + 0.5 * e; };
  auto dmean = [](double e) { return e < 0.5 ? 1.0 : 0.5; };
  auto sig = [](double) { return 0.01; };
  Channel ch = Channel::gaussian(eg, qg, mean, sig);
  SlowChangeProfile prof = gaussian_profile(eg, mean, sig, dmean);
  SlowChangeInput sci = slow_change_input(prof);
  Density fq = marginal_q(ch, sci.f_tilde_e);

  auto cdf_at = [](const Density& d, double x) {
    std::size_t c = d.grid().cell_of(x);
    double F = 0.0;
    for (std::size_t i = 0; i < c; ++i) F += d.mass(i);
    return F + d.height(c) * (x - d.grid().edge(c));
  };

  std::vector<double> breaks = regime_breakpoints(prof);
  double margin = 3.0 * prof.sigma_max;
  int used = 0;
  for (int k = 1; k <= 40 && used < 20; ++k) {
    double e = k / 41.0;
    bool ok = e > margin && e < 1.0 - margin;
    for (double b : breaks) ok = ok && std::fabs(e - b) > 2.0 * margin;
    if (!ok) continue;
    ++used;
    double lhs = fq.height(fq.grid().cell_of(mean(e)));
    double rhs = sci.f_tilde_e.density().height(eg.cell_of(e)) / dmean(e);
    CHECK(std::fabs(lhs - rhs) / rhs <= 0.5 * prof.sigma_max);
    CHECK(std::fabs(cdf_at(fq, mean(e)) - cdf_at(sci.f_tilde_e.density(), e)) <=
          0.1 * prof.sigma_max);
  }
  CHECK(used == 20);
}

TEST_CASE("regime breakpoints are found where the profile jumps") {
  SlowChangeProfile p = step_profile(200, 0.01);
  std::vector<double> br = regime_breakpoints(p);
  REQUIRE(br.size() == 1);
  CHECK(br[0] == doctest::Approx(0.5).epsilon(1e-12));

  SlowChangeProfile smooth = gaussian_profile(Grid(0.0, 1.0, 200), [](double e) { return e; },
                                              [](double) { return 0.01; },
                                              [](double) { return 1.0; });
  CHECK(regime_breakpoints(smooth).empty());
}

TEST_CASE("the profile mean map inverts back to the source point") {
  SlowChangeProfile p = gaussian_profile(
      Grid(0.0, 1.0, 500), [](double e) { return e < 0.5 ? e : 0.25 + 0.5 * e; },
      [](double) { return 0.01; }, [](double e) { return e < 0.5 ? 1.0 : 0.5; });
  IncreasingMap mm = profile_mean_map(p);
  for (double e : {0.1, 0.3, 0.45, 0.6, 0.9})
    CHECK(mm.inverse(mm(e)) == doctest::Approx(e).epsilon(1e-12));
  CHECK(mm(0.25) == doctest::Approx(0.25).epsilon(1e-3));
  CHECK(mm(0.9) == doctest::Approx(0.7).epsilon(1e-3));
}

TEST_CASE("alignment and posterior certificates hold in the slow regime") {
  std::size_t n = 500;
  double s0 = 0.02;
  Grid eg(0.0, 1.0, n), qg(0.0, 1.0, n);
  auto mean = [](double e) { return e; };
  auto sig = [s0](double e) { return e < 0.5 ? s0 : 2.0 * s0; };
  Channel ch = Channel::gaussian(eg, qg, mean, sig);
  SlowChangeProfile prof = gaussian_profile(eg, mean, sig, [](double) { return 1.0; });
  HomogenizedSystem sys = slow_change_system(ch, prof, n);

  MeanAlignmentReport align = certify_mean_alignment(sys, prof);
  CHECK(align.max_abs_dev <= 5.0 * s0);
  CHECK(align.ratio_to_sigma_max == doctest::Approx(align.max_abs_dev / prof.sigma_max));
  CHECK(align.cells_checked > 100);

  PosteriorUniformityReport post = certify_posterior_uniformity(sys, prof);
  CHECK(post.h_spread_interior <= 0.1);
  CHECK(post.h_spread_all >= post.h_spread_interior);
  CHECK(post.cells_checked > 50);
  CHECK(post.boundary_margin == doctest::Approx(3.0 * prof.sigma_max).epsilon(1e-12));
  // the step in the conditional spread violates the slow-change premise, so
  // the unfiltered spread shows the transition wiggle the filter excludes
  CHECK(post.h_spread_all > post.h_spread_interior);
}
