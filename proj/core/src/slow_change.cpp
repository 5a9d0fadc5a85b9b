#include "enthom/slow_change.hpp"

#include "enthom/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "enthom/csv.hpp"
#include "enthom/errors.hpp"

namespace enthom {

namespace {

// 0.5 * log2(2 pi e sigma^2)
double gaussian_entropy_bits(double sigma) {
  return 0.5 * std::log2(2.0 * std::numbers::pi_v<double> * std::numbers::e_v<double> * sigma *
                         sigma);
}

double equivalent_sigma(double h_bits) {
  return std::exp2(h_bits) /
         std::sqrt(2.0 * std::numbers::pi_v<double> * std::numbers::e_v<double>);
}

std::vector<double> central_differences(const Grid& g, const std::vector<double>& m) {
  std::size_t n = m.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0) {
      d[i] = (m[1] - m[0]) / g.delta();
    } else if (i == n - 1) {
      d[i] = (m[n - 1] - m[n - 2]) / g.delta();
    } else {
      d[i] = (m[i + 1] - m[i - 1]) / (2.0 * g.delta());
    }
  }
  return d;
}

}  // namespace

SlowChangeProfile gaussian_profile(const Grid& e_grid,
                                   const std::function<double(double)>& mean,
                                   const std::function<double(double)>& sigma,
                                   const std::function<double(double)>& dmean) {
  std::size_t n = e_grid.size();
  SlowChangeProfile p{e_grid, std::vector<double>(n), {}, std::vector<double>(n),
                      std::vector<double>(n), 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    double e = e_grid.center(i);
    p.m[i] = mean(e);
    double sd = sigma(e);
    if (!(sd > 0.0)) throw std::invalid_argument("gaussian_profile: sigma must be positive");
    p.sigma[i] = sd;
    p.h_bits[i] = gaussian_entropy_bits(sd);
    p.sigma_max = std::max(p.sigma_max, sd);
  }
  if (dmean) {
    p.m_prime.resize(n);
    for (std::size_t i = 0; i < n; ++i) p.m_prime[i] = dmean(e_grid.center(i));
  } else {
    p.m_prime = central_differences(e_grid, p.m);
  }
  return p;
}

SlowChangeProfile profile_from_csv(std::istream& is) {
  auto rows = csv::read_table(is);
  if (rows.size() < 3) throw ParseError("profile CSV: need a header row and at least 2 data rows");
  const auto& header = rows[0];
  if (header.size() != 3 || header[0] != "e" || header[1] != "m" ||
      (header[2] != "sigma" && header[2] != "h")) {
    throw ParseError("profile CSV: header must be 'e,m,sigma' or 'e,m,h'");
  }
  bool sigma_given = header[2] == "sigma";

  std::size_t n = rows.size() - 1;
  std::vector<double> e(n), m(n), third(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = rows[i + 1];
    if (r.size() != 3) {
      throw ParseError("profile CSV: row " + std::to_string(i + 2) + " must have 3 fields");
    }
    e[i] = csv::parse_double(r[0], i + 2);
    m[i] = csv::parse_double(r[1], i + 2);
    third[i] = csv::parse_double(r[2], i + 2);
  }

  // Rebuild the grid from the e centers, exactly as the channel CSV does.
  double delta = (e.back() - e.front()) / static_cast<double>(n - 1);
  if (!(delta > 0.0)) throw ParseError("profile CSV: e values must increase");
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(e[i] - (e.front() + static_cast<double>(i) * delta)) > 1e-6 * delta) {
      throw ParseError("profile CSV: e values are not uniformly spaced");
    }
  }
  Grid g(e.front() - 0.5 * delta, e.back() + 0.5 * delta, n);

  SlowChangeProfile p{g, std::move(m), {}, std::vector<double>(n), std::vector<double>(n), 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    if (sigma_given) {
      if (!(third[i] > 0.0)) throw ParseError("profile CSV: sigma must be positive");
      p.sigma[i] = third[i];
      p.h_bits[i] = gaussian_entropy_bits(third[i]);
    } else {
      p.h_bits[i] = third[i];
      p.sigma[i] = equivalent_sigma(third[i]);
    }
    p.sigma_max = std::max(p.sigma_max, p.sigma[i]);
  }
  p.m_prime = central_differences(g, p.m);
  return p;
}

SlowChangeInput slow_change_input(const SlowChangeProfile& p) {
  std::size_t n = p.e_grid.size();
  std::vector<double> w(n);
  double n_value = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(p.m_prime[i] > 0.0)) {
      throw NonPositiveSlope("slow_change_input: m'(e) <= 0 at e = " +
                             std::to_string(p.e_grid.center(i)));
    }
    w[i] = p.m_prime[i] * std::exp2(-p.h_bits[i]);
    n_value += w[i] * p.e_grid.delta();
  }
  return SlowChangeInput{InputDistribution(Density(p.e_grid, std::move(w))), n_value,
                         std::log2(n_value)};
}

double slow_change_capacity(const SlowChangeProfile& p) { return slow_change_input(p).capacity_bits; }

MeanAlignmentReport certify_mean_alignment(const HomogenizedSystem& sys,
                                           const SlowChangeProfile& p, double boundary_margin) {
  if (boundary_margin < 0.0) boundary_margin = 3.0 * p.sigma_max;

  const Channel& star = sys.star_channel;
  const Grid& eg = star.e_grid();
  const Grid& qg = star.q_grid();
  MeanAlignmentReport rep{0.0, 0.0, p.sigma_max, boundary_margin, 0};
  for (std::size_t i = 0; i < eg.size(); ++i) {
    double e_star = eg.center(i);
    double e = sys.map_e.inverse(e_star);
    if (e - p.e_grid.lo() < boundary_margin || p.e_grid.hi() - e < boundary_margin) continue;
    auto row = star.row(i);
    double mean = 0.0;
    for (std::size_t j = 0; j < qg.size(); ++j) mean += qg.center(j) * row[j];
    mean *= qg.delta();
    rep.max_abs_dev = std::max(rep.max_abs_dev, std::abs(mean - e_star));
    ++rep.cells_checked;
  }
  rep.ratio_to_sigma_max = rep.max_abs_dev / p.sigma_max;
  return rep;
}

IncreasingMap profile_mean_map(const SlowChangeProfile& p) {
  std::vector<double> xs(p.e_grid.size());
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = p.e_grid.center(i);
  return IncreasingMap(std::move(xs), p.m);
}

std::vector<double> regime_breakpoints(const SlowChangeProfile& p, double rel_tol) {
  auto jumps = [rel_tol](double a, double b) {
    double scale = std::max(std::abs(a), std::abs(b));
    return scale > 0.0 && std::abs(a - b) > rel_tol * scale;
  };
  std::vector<double> br;
  for (std::size_t i = 1; i < p.e_grid.size(); ++i) {
    if (jumps(p.sigma[i - 1], p.sigma[i]) || jumps(p.m_prime[i - 1], p.m_prime[i]))
      br.push_back(p.e_grid.edge(i));
  }
  return br;
}

namespace {

PosteriorUniformityReport posterior_uniformity_impl(
    const HomogenizedSystem& sys, double boundary_margin,
    const std::function<bool(double)>& source_ok) {
  const Channel& star = sys.star_channel;
  ReverseSummary rev = reverse_quantities(star, uniform_input(star));

  PosteriorUniformityReport rep{0.0, 0.0, 0.0, boundary_margin, 0};
  double h_min_all = std::numeric_limits<double>::infinity(), h_max_all = -h_min_all;
  double h_min_int = h_min_all, h_max_int = -h_min_all;

  const Grid& qg = star.q_grid();
  for (std::size_t j = 0; j < qg.size(); ++j) {
    double h = rev.h_e_given_q[j];
    if (std::isnan(h)) continue;
    h_min_all = std::min(h_min_all, h);
    h_max_all = std::max(h_max_all, h);

    if (!source_ok(sys.map_q.inverse(qg.center(j)))) continue;
    h_min_int = std::min(h_min_int, h);
    h_max_int = std::max(h_max_int, h);
    rep.max_mean_dev = std::max(rep.max_mean_dev,
                                std::abs(rev.posterior_mean_e[j] - qg.center(j)));
    ++rep.cells_checked;
  }
  rep.h_spread_all = (h_max_all > h_min_all) ? h_max_all - h_min_all : 0.0;
  rep.h_spread_interior = (rep.cells_checked > 0) ? h_max_int - h_min_int : 0.0;
  return rep;
}

}  // namespace

PosteriorUniformityReport certify_posterior_uniformity(const HomogenizedSystem& sys,
                                                       const SlowChangeProfile& p,
                                                       double boundary_margin) {
  if (boundary_margin < 0.0) {
    double mp_min = *std::min_element(p.m_prime.begin(), p.m_prime.end());
    boundary_margin = 3.0 * p.sigma_max / std::max(mp_min, 1e-12);
  }
  IncreasingMap mmap = profile_mean_map(p);
  std::vector<double> breaks = regime_breakpoints(p);
  auto source_ok = [&, boundary_margin](double q) {
    if (q < mmap.y_lo() || q > mmap.y_hi()) return false;
    double alpha = mmap.inverse(q);
    if (alpha - p.e_grid.lo() < boundary_margin || p.e_grid.hi() - alpha < boundary_margin)
      return false;
    for (double b : breaks)
      if (std::abs(alpha - b) < boundary_margin) return false;
    return true;
  };
  return posterior_uniformity_impl(sys, boundary_margin, source_ok);
}

PosteriorUniformityReport certify_posterior_uniformity(const HomogenizedSystem& sys) {
  return posterior_uniformity_impl(sys, 0.0, [](double) { return true; });
}

HomogenizedSystem slow_change_system(const Channel& ch, const SlowChangeProfile& p,
                                     std::size_t n_star, bool restrict_support) {
  CapacitySolution sol = solution_from_input(ch, slow_change_input(p).f_tilde_e);
  return build_homogenized(ch, sol, n_star, restrict_support);
}

}  // namespace enthom
