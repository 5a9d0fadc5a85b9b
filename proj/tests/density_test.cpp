#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "enthom/density.hpp"
#include "enthom/errors.hpp"
#include "enthom/grid.hpp"
#include "enthom/increasing_map.hpp"

using namespace enthom;

TEST_CASE("grid geometry") {
  Grid g(0.0, 2.0, 8);
  CHECK(g.delta() == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(g.edge(0) == 0.0);
  CHECK(g.edge(8) == doctest::Approx(2.0));
  CHECK(g.center(3) == doctest::Approx(0.875));
  CHECK(g.cell_of(0.30) == 1);
  CHECK(g.cell_of(-5.0) == 0);       // clamped
  CHECK(g.cell_of(99.0) == 7);       // clamped
  CHECK(g.has_edge_at(0.75));
  CHECK_FALSE(g.has_edge_at(0.80));
  CHECK(g == Grid(0.0, 2.0, 8));
  CHECK(g != Grid(0.0, 2.0, 16));
}

TEST_CASE("density normalizes any positive weights") {
  Grid g(0.0, 1.0, 10);
  Density d(g, std::vector<double>(10, 3.7));
  double mass = 0.0;
  for (std::size_t i = 0; i < 10; ++i) mass += d.mass(i);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(d.height(4) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("uniform on a subinterval cuts cells exactly") {
  Grid g(0.0, 1.0, 10);
  // [0.25, 0.75] starts and ends mid-cell at this resolution
  Density d = Density::uniform(g, 0.25, 0.75);
  CHECK(d.height(5) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(d.height(2) == doctest::Approx(1.0).epsilon(1e-14));  // half-covered cell
  CHECK(d.height(0) == 0.0);
  CHECK(d.mean() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("entropy of uniform densities is the log of the support length") {
  Grid g(0.0, 1.0, 100);
  CHECK(Density::uniform(g).entropy_bits() == doctest::Approx(0.0).epsilon(1e-13));
  CHECK(Density::uniform(g, 0.25, 0.75).entropy_bits() == doctest::Approx(-1.0).epsilon(1e-13));
  CHECK(Density::uniform(Grid(0.0, 4.0, 64)).entropy_bits() ==
        doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("midpoint moments of the uniform density") {
  Grid g(0.0, 1.0, 100);
  Density d = Density::uniform(g);
  CHECK(d.mean() == doctest::Approx(0.5).epsilon(1e-14));
  // midpoint rule gives 1/12 - delta^2/12 exactly
  CHECK(d.variance() == doctest::Approx(1.0 / 12.0 - 1e-4 / 12.0).epsilon(1e-12));
}

TEST_CASE("cdf_map of the uniform density is the identity") {
  Grid g(0.0, 1.0, 50);
  IncreasingMap f = cdf_map(Density::uniform(g));
  for (double x : {0.0, 0.123, 0.5, 0.987, 1.0}) {
    CHECK(f(x) == doctest::Approx(x).epsilon(1e-13));
    CHECK(f.inverse(x) == doctest::Approx(x).epsilon(1e-13));
  }
}

TEST_CASE("increasing map round-trips at 1000 random points") {
  std::mt19937_64 rng(11u);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> xs, ys;
  double x = 0.0, y = 0.0;
  for (int k = 0; k < 40; ++k) {
    xs.push_back(x);
    ys.push_back(y);
    x += 0.01 + u(rng);
    y += 0.01 + u(rng);
  }
  IncreasingMap m(xs, ys);
  for (int k = 0; k < 1000; ++k) {
    double p = xs.front() + u(rng) * (xs.back() - xs.front());
    CHECK(m.inverse(m(p)) == doctest::Approx(p).epsilon(1e-12));
  }
}

TEST_CASE("interior zero region is rejected unless support restriction is requested") {
  Grid g(0.0, 1.0, 3);
  Density d(g, {1.0, 0.0, 1.0});
  CHECK(d.has_interior_zero());
  CHECK_THROWS_AS((void)cdf_map(d), InteriorZeroRegion);
  IncreasingMap f = cdf_map(d, true);
  CHECK(f(0.0) == doctest::Approx(0.0));
  CHECK(f(1.0) == doctest::Approx(1.0).epsilon(1e-12));
  // pseudo-inverse stays monotone through the flat stretch
  CHECK(f(2.0 / 3.0) > f(1.0 / 3.0));
}

TEST_CASE("pushforward conserves mass through random maps") {
  std::mt19937_64 rng(7u);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Grid g(0.0, 1.0, 64);
    std::vector<double> w(64);
    for (double& v : w) v = u(rng);
    Density d(g, w);

    std::vector<double> xs{0.0}, ys{0.0};
    for (int k = 0; k < 6; ++k) {
      xs.push_back(xs.back() + u(rng));
      ys.push_back(ys.back() + u(rng));
    }
    for (double& v : xs) v /= xs.back();  // domain exactly [0, 1]
    IncreasingMap m(xs, ys);

    Density out = pushforward(d, m, Grid(0.0, ys.back(), 97));
    double mass = 0.0;
    for (std::size_t i = 0; i < out.grid().size(); ++i) mass += out.mass(i);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("affine pushforward shifts entropy by exactly the log slope") {
  Grid g(0.0, 1.0, 80);
  std::vector<double> w(80);
  for (std::size_t i = 0; i < 80; ++i) w[i] = 1.0 + 0.5 * std::sin(0.2 * double(i));
  Density d(g, w);
  double h0 = d.entropy_bits();
  for (double s : {0.5, 2.0, 3.0}) {
    IncreasingMap affine({0.0, 1.0}, {1.0, 1.0 + s});
    Density out = pushforward(d, affine, Grid(1.0, 1.0 + s, 80));
    CHECK(out.entropy_bits() == doctest::Approx(h0 + std::log2(s)).epsilon(1e-12));
  }
}

TEST_CASE("pushing a density through its own cdf uniformizes it") {
  std::mt19937_64 rng(3u);
  std::uniform_real_distribution<double> u(0.2, 2.0);
  for (std::size_t n : {50u, 200u, 800u}) {
    Grid g(0.0, 1.0, n);
    std::vector<double> w(n);
    for (double& v : w) v = u(rng);
    Density d(g, w);
    Density out = pushforward(d, cdf_map(d), Grid(0.0, 1.0, n));
    for (std::size_t i = 0; i < n; ++i) CHECK(out.height(i) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("mass outside the map domain raises DomainMismatch") {
  Grid g(0.0, 1.0, 10);
  Density d = Density::uniform(g);
  IncreasingMap narrow({0.2, 0.8}, {0.0, 1.0});
  CHECK_THROWS_AS((void)pushforward(d, narrow, Grid(0.0, 1.0, 10)), DomainMismatch);
}

TEST_CASE("raw pushforward reports out-of-domain mass instead of throwing") {
  Grid g(0.0, 1.0, 10);
  Density d = Density::uniform(g);
  IncreasingMap half({0.0, 0.5}, {0.0, 1.0});
  Grid target(0.0, 1.0, 10);
  std::vector<double> out(target.size(), 0.0);
  double lost = pushforward_masses(g, d.heights(), half, target, out);
  CHECK(lost == doctest::Approx(0.5).epsilon(1e-12));
  double kept = 0.0;
  for (double v : out) kept += v;
  CHECK(kept == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("entropy helper matches Density::entropy_bits") {
  Grid g(0.0, 1.0, 16);
  std::vector<double> w{1, 2, 3, 4, 5, 6, 7, 8, 8, 7, 6, 5, 4, 3, 2, 1};
  Density d(g, w);
  CHECK(entropy_bits(d.heights(), g.delta()) ==
        doctest::Approx(d.entropy_bits()).epsilon(1e-14));
}
