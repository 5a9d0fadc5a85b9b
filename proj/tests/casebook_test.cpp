#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "enthom/casebook.hpp"
#include "enthom/increasing_map.hpp"

using namespace enthom;

TEST_CASE("the registry lists the built-in cases") {
  auto names = list_cases();
  for (const char* n : {"independent", "noise-step", "gain-step", "two-uniform"}) {
    CHECK(is_case(n));
    CHECK(std::find(names.begin(), names.end(), n) != names.end());
  }
  CHECK_FALSE(is_case("nonsense"));
  CHECK_THROWS_AS((void)make_case("nonsense"), std::invalid_argument);
}

TEST_CASE("cases fill in their own solver target when none is given") {
  CHECK(make_case("two-uniform").params.tol == doctest::Approx(1e-9));
  CHECK(make_case("independent").params.tol == doctest::Approx(1e-9));
  CHECK(make_case("noise-step").params.tol == doctest::Approx(1e-3));
  CHECK(make_case("gain-step").params.tol == doctest::Approx(1e-3));
  CaseParams p;
  p.tol = 1e-5;
  CHECK(make_case("noise-step", p).params.tol == doctest::Approx(1e-5));
}

TEST_CASE("breakpoints must land on cell edges unless waived") {
  CaseParams p;
  p.n_e = 999;  // not a multiple of 5
  CHECK_THROWS_AS((void)make_case("two-uniform", p), std::invalid_argument);
  p.allow_misaligned = true;
  CHECK_NOTHROW((void)make_case("two-uniform", p));
  CaseParams q;
  q.n_q = 998;  // not a multiple of 4
  CHECK_THROWS_AS((void)make_case("gain-step", q), std::invalid_argument);
}

TEST_CASE("the exact cases run green end to end") {
  CaseParams small;
  small.n_e = 200;
  small.n_q = 200;
  small.n_star = 200;
  CaseRun tu = run_case(make_case("two-uniform", small));
  CHECK(tu.converged);
  CHECK(tu.all_passed);
  for (const CaseOutcome& o : tu.outcomes) {
    CAPTURE(o.quantity);
    CHECK(o.pass);
  }
  CHECK(tu.outcomes.size() >= 19);

  CaseParams tiny;
  tiny.n_e = 64;
  tiny.n_q = 64;
  tiny.n_star = 64;
  CaseRun ind = run_case(make_case("independent", tiny));
  CHECK(ind.converged);
  CHECK(ind.all_passed);
}

TEST_CASE("case results serialize with one row per expectation") {
  CaseParams tiny;
  tiny.n_e = 64;
  tiny.n_q = 64;
  tiny.n_star = 64;
  CaseRun run = run_case(make_case("independent", tiny));
  std::stringstream ss;
  write_results_csv(ss, run.outcomes);
  std::string line;
  std::getline(ss, line);
  CHECK(line == "case,quantity,expected,actual,tolerance,pass");
  std::size_t rows = 0;
  while (std::getline(ss, line))
    if (!line.empty()) ++rows;
  CHECK(rows == run.outcomes.size());
}

TEST_CASE("uniform pushes through piecewise maps integrate in closed form") {
  IncreasingMap id({0.0, 1.0}, {0.0, 1.0});
  ExactMoments full = pushed_uniform_moments(0.0, 1.0, id);
  CHECK(full.mean == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(full.variance == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
  ExactMoments narrow = pushed_uniform_moments(0.25, 0.75, id);
  CHECK(narrow.variance == doctest::Approx(1.0 / 48.0).epsilon(1e-15));
  CHECK(full.variance - narrow.variance == doctest::Approx(1.0 / 16.0).epsilon(1e-15));

  IncreasingMap affine({0.0, 1.0}, {3.0, 5.0});
  CHECK(pushed_uniform_moments(0.0, 1.0, affine).variance ==
        doctest::Approx(4.0 / 12.0).epsilon(1e-14));

  // kinked map, integrated by hand: G(0)=0, G(1/2)=1, G(1)=3/2
  IncreasingMap kink({0.0, 0.5, 1.0}, {0.0, 1.0, 1.5});
  ExactMoments m = pushed_uniform_moments(0.0, 1.0, kink);
  CHECK(m.mean == doctest::Approx(0.875).epsilon(1e-14));
  CHECK(m.variance == doctest::Approx(37.0 / 192.0).epsilon(1e-14));
}

TEST_CASE("no sampled transform reverses the variance order of the two forms") {
  VarianceExperimentResult r = variance_impossibility_experiment(500, 123u);
  CHECK(r.trials == 500);
  CHECK(r.positive_trials == 500);
  CHECK(r.min_diff > 0.0);
  CHECK(r.identity_diff == doctest::Approx(1.0 / 16.0).epsilon(1e-15));
  CHECK(r.seed == 123u);

  VarianceExperimentResult again = variance_impossibility_experiment(500, 123u);
  CHECK(again.min_diff == r.min_diff);  // bitwise reproducible
  VarianceExperimentResult other = variance_impossibility_experiment(500, 124u);
  CHECK(other.min_diff != r.min_diff);
}
