// Command-line front end: builds channels, runs the capacity pipeline, and
// writes CSV/SVG artifacts. Exit codes: 0 ok, 1 config error, 2 solver did
// not converge, 3 transform domain error, 4 verification failure.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "enthom/capacity.hpp"
#include "enthom/casebook.hpp"
#include "enthom/channel.hpp"
#include "enthom/csv.hpp"
#include "enthom/errors.hpp"
#include "enthom/homogenize.hpp"
#include "enthom/slow_change.hpp"
#include "enthom/svg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace enthom;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNotConverged = 2;
constexpr int kExitDomain = 3;
constexpr int kExitVerification = 4;

struct RunConfig {
  std::string case_name;
  std::string channel_path;
  std::size_t ne = 1000;
  std::size_t nq = 1000;
  std::size_t nstar = 1000;
  double tol = 0.0;  // 0 = the case's own default (1e-9 for raw channels)
  std::size_t max_iter = 20000;
  double sigma = 0.01;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  bool svg = false;
  bool restrict_support = false;
  bool all_cases = false;
};

// Figure-style shorthands accepted on the command line.
const std::map<std::string, std::string> kCaseAliases = {
    {"fig1", "noise-step"},
    {"fig2", "gain-step"},
    {"fig3", "two-uniform"},
};

std::string resolve_case(const std::string& name) {
  auto it = kCaseAliases.find(name);
  std::string canonical = it == kCaseAliases.end() ? name : it->second;
  if (!is_case(canonical))
    throw std::invalid_argument("unknown case '" + name + "'; run `enthom case list`");
  return canonical;
}

void load_json_config(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("config '" + path + "': " + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config '" + path + "': expected a JSON object");
  for (auto& [key, val] : j.items()) {
    try {
      if (key == "case") cfg.case_name = val.get<std::string>();
      else if (key == "channel") cfg.channel_path = val.get<std::string>();
      else if (key == "ne") cfg.ne = val.get<std::size_t>();
      else if (key == "nq") cfg.nq = val.get<std::size_t>();
      else if (key == "nstar") cfg.nstar = val.get<std::size_t>();
      else if (key == "tol") cfg.tol = val.get<double>();
      else if (key == "max_iter") cfg.max_iter = val.get<std::size_t>();
      else if (key == "sigma") cfg.sigma = val.get<double>();
      else if (key == "seed") cfg.seed = val.get<std::uint64_t>();
      else if (key == "out") cfg.out_dir = val.get<std::string>();
      else if (key == "svg") cfg.svg = val.get<bool>();
      else if (key == "restrict_support") cfg.restrict_support = val.get<bool>();
      else if (key == "all") cfg.all_cases = val.get<bool>();
      else throw std::invalid_argument("config '" + path + "': unknown key '" + key + "'");
    } catch (const json::exception& e) {
      throw std::invalid_argument("config '" + path + "', key '" + key + "': " + e.what());
    }
  }
}

void validate(const RunConfig& cfg, bool needs_source) {
  if (cfg.ne < 16 || cfg.nq < 16 || cfg.nstar < 16)
    throw std::invalid_argument("grid sizes must be at least 16");
  if (cfg.tol < 0.0) throw std::invalid_argument("tol must be positive");
  if (cfg.max_iter == 0) throw std::invalid_argument("max-iter must be positive");
  if (cfg.sigma <= 0.0) throw std::invalid_argument("sigma must be positive");
  if (needs_source && cfg.case_name.empty() && cfg.channel_path.empty() && !cfg.all_cases)
    throw std::invalid_argument("give a channel source: --case NAME or --channel FILE");
  if (!cfg.case_name.empty() && !cfg.channel_path.empty())
    throw std::invalid_argument("--case and --channel are mutually exclusive");
}

CaseParams params_from(const RunConfig& cfg) {
  CaseParams p;
  p.n_e = cfg.ne;
  p.n_q = cfg.nq;
  p.n_star = cfg.nstar;
  p.sigma0 = cfg.sigma;
  p.tol = cfg.tol;
  p.max_iter = cfg.max_iter;
  p.restrict_support = cfg.restrict_support;
  return p;
}

std::ofstream open_out(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out_dir);
  fs::path p = fs::path(cfg.out_dir) / name;
  std::ofstream out(p);
  if (!out) throw std::invalid_argument("cannot write '" + p.string() + "'");
  return out;
}

void write_density_csv(std::ostream& os, const char* axis, const Density& d) {
  os << axis << ",density\n";
  for (std::size_t i = 0; i < d.grid().size(); ++i)
    os << csv::format(d.grid().center(i)) << ',' << csv::format(d.height(i)) << '\n';
}

void write_map_csv(std::ostream& os, const IncreasingMap& m) {
  os << "x,y\n";
  for (std::size_t k = 0; k < m.xs().size(); ++k)
    os << csv::format(m.xs()[k]) << ',' << csv::format(m.ys()[k]) << '\n';
}

svg::Series density_series(const std::string& label, const Density& d) {
  svg::Series s;
  s.label = label;
  for (std::size_t i = 0; i < d.grid().size(); ++i) {
    s.x.push_back(d.grid().center(i));
    s.y.push_back(d.height(i));
  }
  return s;
}

struct SolvedSource {
  Channel channel;
  CapacitySolution solution;
  std::optional<SlowChangeProfile> profile;  // set for the drifting cases
};

SolvedSource solve_source(const RunConfig& cfg) {
  if (!cfg.channel_path.empty()) {
    std::ifstream in(cfg.channel_path);
    if (!in) throw std::invalid_argument("cannot open channel file '" + cfg.channel_path + "'");
    Channel ch = Channel::from_csv(in);
    SolverOptions opt;
    opt.tol = cfg.tol > 0.0 ? cfg.tol : 1e-9;
    opt.max_iter = cfg.max_iter;
    CapacitySolution sol = solve_capacity(ch, opt);
    return {std::move(ch), std::move(sol), std::nullopt};
  }
  CaseDefinition def = make_case(resolve_case(cfg.case_name), params_from(cfg));
  Channel ch = def.build_channel();
  SolverOptions opt;
  opt.tol = def.params.tol;
  opt.max_iter = def.params.max_iter;
  CapacitySolution sol = solve_capacity(ch, opt);
  std::optional<SlowChangeProfile> prof;
  if (def.build_profile) prof = def.build_profile();
  return {std::move(ch), std::move(sol), std::move(prof)};
}

void emit_capacity_files(const RunConfig& cfg, const SolvedSource& src) {
  const CapacitySolution& sol = src.solution;
  {
    auto out = open_out(cfg, "capacity.csv");
    out << "capacity_bits,lower_bound,upper_bound,gap,iterations,converged\n"
        << csv::format(sol.capacity_bits) << ',' << csv::format(sol.lower_bound_bits) << ','
        << csv::format(sol.upper_bound_bits) << ','
        << csv::format(sol.upper_bound_bits - sol.lower_bound_bits) << ',' << sol.iterations
        << ',' << (sol.converged ? 1 : 0) << '\n';
  }
  {
    auto out = open_out(cfg, "ftilde_e.csv");
    write_density_csv(out, "e", sol.f_tilde_e.density());
  }
  {
    auto out = open_out(cfg, "ftilde_q.csv");
    write_density_csv(out, "q", sol.f_tilde_q);
  }
  {
    auto out = open_out(cfg, "kkt.csv");
    out << "e,gain_minus_capacity,on_support\n";
    const Grid& eg = src.channel.e_grid();
    for (std::size_t i = 0; i < eg.size(); ++i)
      out << csv::format(eg.center(i)) << ',' << csv::format(sol.kkt_residual[i]) << ','
          << (sol.on_support(i) ? 1 : 0) << '\n';
  }
  if (cfg.svg) {
    auto out = open_out(cfg, "plots.svg");
    svg::write_plot(out,
                    {density_series("input density", sol.f_tilde_e.density()),
                     density_series("output density", sol.f_tilde_q)},
                    "capacity-achieving densities");
  }
}

int cmd_capacity(const RunConfig& cfg) {
  SolvedSource src = solve_source(cfg);
  emit_capacity_files(cfg, src);
  StationarityReport rep = verify_stationarity(src.channel, src.solution);
  std::cout << "capacity_bits=" << csv::format(src.solution.capacity_bits)
            << " gap=" << csv::format(src.solution.upper_bound_bits -
                                      src.solution.lower_bound_bits)
            << " iterations=" << src.solution.iterations
            << " support_residual=" << csv::format(rep.max_abs_residual_support)
            << " converged=" << (src.solution.converged ? 1 : 0) << '\n';
  return src.solution.converged ? kExitOk : kExitNotConverged;
}

int cmd_homogenize(const RunConfig& cfg) {
  SolvedSource src = solve_source(cfg);
  HomogenizedSystem sys =
      build_homogenized(src.channel, src.solution, cfg.nstar, cfg.restrict_support);
  {
    auto out = open_out(cfg, "map_e.csv");
    write_map_csv(out, sys.map_e);
  }
  {
    auto out = open_out(cfg, "map_q.csv");
    write_map_csv(out, sys.map_q);
  }
  {
    auto out = open_out(cfg, "star_channel.csv");
    sys.star_channel.to_csv(out);
  }
  double margin = src.profile ? 3.0 * src.profile->sigma_max : 0.0;
  EntropyFlatnessReport rep =
      certify_entropy_flatness(src.channel, src.solution, sys, margin);
  {
    auto out = open_out(cfg, "theorem1.csv");
    out << "e_star,h_bits,deviation,interior\n";
    const Grid& se = sys.star_channel.e_grid();
    for (std::size_t i = 0; i < se.size(); ++i) {
      double es = se.center(i);
      double e = sys.map_e.inverse(es);
      bool interior = e - src.channel.e_grid().lo() >= margin &&
                      src.channel.e_grid().hi() - e >= margin;
      out << csv::format(es) << ',' << csv::format(sys.entropy_profile[i]) << ','
          << csv::format(sys.entropy_profile[i] + sys.capacity_bits) << ','
          << (interior ? 1 : 0) << '\n';
    }
  }
  if (cfg.svg) {
    svg::Series h{"h(Q*|e*)", {}, {}};
    const Grid& se = sys.star_channel.e_grid();
    for (std::size_t i = 0; i < se.size(); ++i) {
      h.x.push_back(se.center(i));
      h.y.push_back(sys.entropy_profile[i]);
    }
    auto out = open_out(cfg, "plots.svg");
    svg::write_plot(out,
                    {density_series("input density", src.solution.f_tilde_e.density()),
                     density_series("output density", src.solution.f_tilde_q), h},
                    "uniformized system");
  }
  std::cout << "capacity_bits=" << csv::format(sys.capacity_bits)
            << " flatness_max_dev=" << csv::format(rep.max_abs_dev)
            << " flatness_interior_dev=" << csv::format(rep.max_abs_dev_interior)
            << " converged=" << (src.solution.converged ? 1 : 0) << '\n';
  return src.solution.converged ? kExitOk : kExitNotConverged;
}

int cmd_slowchange(const RunConfig& cfg) {
  SlowChangeProfile prof = [&] {
    if (!cfg.channel_path.empty()) {
      // for this subcommand the file is a profile table (e,m,sigma|h)
      std::ifstream in(cfg.channel_path);
      if (!in) throw std::invalid_argument("cannot open profile file '" + cfg.channel_path + "'");
      return profile_from_csv(in);
    }
    CaseDefinition def = make_case(resolve_case(cfg.case_name), params_from(cfg));
    if (!def.build_profile)
      throw std::invalid_argument("case '" + def.name + "' has no drift profile");
    return def.build_profile();
  }();
  SlowChangeInput sci = slow_change_input(prof);
  {
    auto out = open_out(cfg, "slowchange.csv");
    out << "e,m,m_prime,sigma,h_bits,formula_density\n";
    for (std::size_t i = 0; i < prof.e_grid.size(); ++i)
      out << csv::format(prof.e_grid.center(i)) << ',' << csv::format(prof.m[i]) << ','
          << csv::format(prof.m_prime[i]) << ',' << csv::format(prof.sigma[i]) << ','
          << csv::format(prof.h_bits[i]) << ','
          << csv::format(sci.f_tilde_e.density().height(i)) << '\n';
  }
  if (cfg.svg) {
    svg::Series m{"m(e)", {}, {}};
    for (std::size_t i = 0; i < prof.e_grid.size(); ++i) {
      m.x.push_back(prof.e_grid.center(i));
      m.y.push_back(prof.m[i]);
    }
    auto out = open_out(cfg, "plots.svg");
    svg::write_plot(out, {density_series("formula density", sci.f_tilde_e.density()), m},
                    "slow-change profile");
  }
  std::cout << "n_value=" << csv::format(sci.n_value)
            << " capacity_bits=" << csv::format(sci.capacity_bits) << '\n';
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg) {
  std::vector<CaseOutcome> outcomes;
  bool all_converged = true;

  std::vector<std::string> names;
  if (cfg.all_cases)
    names = list_cases();
  else
    names.push_back(resolve_case(cfg.case_name));

  for (const std::string& name : names) {
    CaseRun run = run_case(make_case(name, params_from(cfg)));
    all_converged = all_converged && run.converged;
    outcomes.insert(outcomes.end(), run.outcomes.begin(), run.outcomes.end());
  }

  if (cfg.all_cases) {
    VarianceExperimentResult vr = variance_impossibility_experiment(10000, cfg.seed);
    auto add = [&](const char* q, double expected, double actual, double tol) {
      outcomes.push_back({"variance-order", q, expected, actual, tol,
                          std::abs(actual - expected) <= tol, ValueBasis::closed_form});
    };
    add("positive_trials", double(vr.trials), double(vr.positive_trials), 0.0);
    add("min_diff_positive", 1.0, vr.min_diff > 0.0 ? 1.0 : 0.0, 0.0);
    add("identity_diff", 1.0 / 16.0, vr.identity_diff, 1e-15);
  }

  {
    auto out = open_out(cfg, "results.csv");
    write_results_csv(out, outcomes);
  }

  std::size_t failed = 0;
  for (const CaseOutcome& o : outcomes) {
    if (o.pass) continue;
    ++failed;
    std::cerr << "FAIL " << o.case_name << '/' << o.quantity
              << ": expected " << csv::format(o.expected) << " +- " << csv::format(o.tolerance)
              << ", got " << csv::format(o.actual) << '\n';
  }
  std::cout << outcomes.size() - failed << '/' << outcomes.size() << " checks passed\n";
  if (failed > 0) return kExitVerification;
  if (!all_converged) return kExitNotConverged;
  return kExitOk;
}

int cmd_case_list() {
  for (const std::string& name : list_cases()) {
    CaseDefinition def = make_case(name);
    std::cout << name << ": " << def.summary << '\n';
  }
  for (const auto& [alias, target] : kCaseAliases)
    std::cout << alias << " -> " << target << " (alias)\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;

  // --config is applied before flag parsing so flags win
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      try {
        load_json_config(argv[i + 1], cfg);
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
      }
    }
  }

  CLI::App app{"capacity and coordinate-uniformization toolkit"};
  app.require_subcommand(1);
  std::string config_dummy;
  app.add_option("--config", config_dummy, "JSON config file; flags override its values");

  auto add_common = [&](CLI::App* sub, bool with_star) {
    sub->add_option("--config", config_dummy, "JSON config file; flags override its values");
    sub->add_option("--case", cfg.case_name, "builtin case name (see `case list`)");
    sub->add_option("--channel", cfg.channel_path, "input CSV file");
    sub->add_option("--ne", cfg.ne, "source grid cells");
    sub->add_option("--nq", cfg.nq, "observation grid cells");
    if (with_star) sub->add_option("--nstar", cfg.nstar, "uniformized grid cells");
    sub->add_option("--tol", cfg.tol, "solver bound-gap target in bits");
    sub->add_option("--max-iter", cfg.max_iter, "solver iteration budget");
    sub->add_option("--sigma", cfg.sigma, "base conditional spread for Gaussian cases");
    sub->add_option("--seed", cfg.seed, "seed for randomized checks");
    sub->add_option("--out", cfg.out_dir, "output directory");
    sub->add_flag("--svg", cfg.svg, "also write plots.svg");
    sub->add_flag("--restrict-support", cfg.restrict_support,
                  "accept inputs with interior zero-mass regions");
  };

  CLI::App* cap = app.add_subcommand("capacity", "solve for the capacity-achieving input");
  add_common(cap, false);
  CLI::App* hom = app.add_subcommand("homogenize", "build the uniformized system");
  add_common(hom, true);
  CLI::App* slo = app.add_subcommand("slowchange", "closed-form slow-drift quantities");
  add_common(slo, false);
  CLI::App* ver = app.add_subcommand("verify", "run casebook expectations");
  add_common(ver, true);
  ver->add_flag("--all", cfg.all_cases, "run every case plus the seeded experiments");
  CLI::App* cas = app.add_subcommand("case", "casebook registry");
  CLI::App* cas_list = cas->add_subcommand("list", "list builtin cases");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (cas->parsed()) {
      if (!cas_list->parsed()) {
        std::cerr << "error: expected `case list`\n";
        return kExitConfig;
      }
      return cmd_case_list();
    }
    validate(cfg, !ver->parsed() || !cfg.all_cases);
    if (cap->parsed()) return cmd_capacity(cfg);
    if (hom->parsed()) return cmd_homogenize(cfg);
    if (slo->parsed()) return cmd_slowchange(cfg);
    if (ver->parsed()) return cmd_verify(cfg);
    std::cerr << "error: no subcommand\n";
    return kExitConfig;
  } catch (const InteriorZeroRegion& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const DomainMismatch& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}
