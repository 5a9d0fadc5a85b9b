#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "enthom/capacity.hpp"
#include "enthom/channel.hpp"
#include "enthom/homogenize.hpp"
#include "enthom/increasing_map.hpp"
#include "enthom/slow_change.hpp"

namespace enthom {

// Where an expected value comes from: exact arithmetic on the construction,
// a published reference value, or a bound calibrated against oracle runs.
enum class ValueBasis { closed_form, reference, calibrated };
const char* to_string(ValueBasis b);

struct ExpectedValue {
  std::string quantity;
  double expected;
  double tolerance;
  ValueBasis basis;
};

struct CaseParams {
  std::size_t n_e = 1000;
  std::size_t n_q = 1000;
  std::size_t n_star = 1000;
  double sigma0 = 0.01;   // base conditional spread for the Gaussian cases
  double tol = 0.0;       // solver bound-gap target; 0 = the case's own default
  std::size_t max_iter = 20000;
  bool allow_misaligned = false;  // skip the grid alignment checks
  bool restrict_support = false;
};

struct PipelineArtifacts {
  Channel channel;
  CapacitySolution solution;
  HomogenizedSystem system;
};

struct CaseDefinition {
  std::string name;
  std::string summary;
  CaseParams params;
  std::function<Channel()> build_channel;
  std::function<SlowChangeProfile()> build_profile;  // empty for non-drift cases
  std::vector<ExpectedValue> expected;
  std::function<std::map<std::string, double>(const PipelineArtifacts&)> measure;
};

std::vector<std::string> list_cases();
bool is_case(const std::string& name);

// Throws std::invalid_argument for unknown names or misaligned grids
// (cases pin their structural breakpoints to cell edges unless
// params.allow_misaligned is set).
CaseDefinition make_case(const std::string& name, const CaseParams& params = {});

struct CaseOutcome {
  std::string case_name;
  std::string quantity;
  double expected;
  double actual;
  double tolerance;
  bool pass;
  ValueBasis basis;
};

struct CaseRun {
  std::string case_name;
  bool converged;
  bool all_passed;
  std::vector<CaseOutcome> outcomes;
};

PipelineArtifacts run_pipeline(const CaseDefinition& def);
CaseRun run_case(const CaseDefinition& def);

// Columns: case,quantity,expected,actual,tolerance,pass
void write_results_csv(std::ostream& os, const std::vector<CaseOutcome>& outcomes);

struct ExactMoments {
  double mean;
  double variance;
};

// Moments of G(U) for U uniform on [a, b], integrated segment by segment in
// closed form (exact for piecewise-linear G; no grid involved).
ExactMoments pushed_uniform_moments(double a, double b, const IncreasingMap& g);

struct VarianceExperimentResult {
  std::size_t trials;
  std::uint64_t seed;
  double min_diff;               // min over trials of Var(G(wide)) - Var(G(narrow))
  std::size_t positive_trials;   // how many diffs were strictly positive
  double identity_diff;          // the G = identity value
};

// No increasing transform can reverse the variance order of the two
// uniform forms (narrow on [1/4,3/4] vs wide on [0,1]): for every sampled
// G the wide form keeps strictly larger variance. Exact integration,
// seeded and deterministic.
VarianceExperimentResult variance_impossibility_experiment(std::size_t n_transforms,
                                                           std::uint64_t seed);

}  // namespace enthom
