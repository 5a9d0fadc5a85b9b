#include "enthom/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "enthom/csv.hpp"
#include "enthom/errors.hpp"

namespace enthom {

namespace {

double normal_cdf(double x, double mu, double sigma) {
  return 0.5 * std::erfc(-(x - mu) / (sigma * std::numbers::sqrt2_v<double>));
}

void check_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (a != b) throw GridMismatch(what);
}

}  // namespace

Channel::Channel(Grid e_grid, Grid q_grid, std::vector<double> kernel)
    : e_grid_(e_grid), q_grid_(q_grid), kernel_(std::move(kernel)) {
  if (kernel_.size() != e_grid_.size() * q_grid_.size()) {
    throw GridMismatch("Channel: kernel size does not match ne * nq");
  }
  const std::size_t ne = e_grid_.size(), nq = q_grid_.size();
  const double dq = q_grid_.delta();
  for (std::size_t i = 0; i < ne; ++i) {
    double* row = kernel_.data() + i * nq;
    double mass = 0.0;
    for (std::size_t j = 0; j < nq; ++j) {
      if (!(row[j] >= 0.0) || !std::isfinite(row[j])) {
        throw std::invalid_argument("Channel: kernel entries must be finite and >= 0");
      }
      mass += row[j];
    }
    mass *= dq;
    if (!(mass > 0.0)) {
      throw std::invalid_argument("Channel: row " + std::to_string(i) + " has zero mass");
    }
    row_mass_correction_ = std::max(row_mass_correction_, std::abs(mass - 1.0));
    for (std::size_t j = 0; j < nq; ++j) row[j] /= mass;
  }
}

Channel Channel::gaussian(const Grid& e_grid, const Grid& q_grid,
                          const std::function<double(double)>& mean,
                          const std::function<double(double)>& sigma) {
  const std::size_t ne = e_grid.size(), nq = q_grid.size();
  std::vector<double> kernel(ne * nq);
  std::vector<double> cdf(nq + 1);
  const double dq = q_grid.delta();
  for (std::size_t i = 0; i < ne; ++i) {
    double e = e_grid.center(i);
    double mu = mean(e);
    double sd = sigma(e);
    if (!(sd > 0.0)) {
      throw std::invalid_argument("Channel::gaussian: sigma must be positive");
    }
    for (std::size_t j = 0; j <= nq; ++j) cdf[j] = normal_cdf(q_grid.edge(j), mu, sd);
    double* row = kernel.data() + i * nq;
    for (std::size_t j = 0; j < nq; ++j) row[j] = std::max(0.0, cdf[j + 1] - cdf[j]) / dq;
  }
  return Channel(e_grid, q_grid, std::move(kernel));
}

Channel Channel::piecewise_uniform(
    const Grid& e_grid, const Grid& q_grid,
    const std::function<std::pair<double, double>(double)>& support) {
  const std::size_t ne = e_grid.size(), nq = q_grid.size();
  std::vector<double> kernel(ne * nq, 0.0);
  for (std::size_t i = 0; i < ne; ++i) {
    auto [a, b] = support(e_grid.center(i));
    if (!(b > a)) {
      throw std::invalid_argument("Channel::piecewise_uniform: empty support interval");
    }
    a = std::max(a, q_grid.lo());
    b = std::min(b, q_grid.hi());
    double* row = kernel.data() + i * nq;
    for (std::size_t j = 0; j < nq; ++j) {
      double l = std::max(a, q_grid.edge(j));
      double r = std::min(b, q_grid.edge(j + 1));
      if (r > l) row[j] = r - l;
    }
  }
  return Channel(e_grid, q_grid, std::move(kernel));
}

Density Channel::row_density(std::size_t i) const {
  auto r = row(i);
  return Density(q_grid_, std::vector<double>(r.begin(), r.end()));
}

InputDistribution uniform_input(const Channel& ch) {
  return InputDistribution(Density::uniform(ch.e_grid()));
}

Density marginal_q(const Channel& ch, const InputDistribution& fe) {
  check_same_grid(fe.density().grid(), ch.e_grid(), "marginal_q: input lives on the wrong grid");
  const std::size_t ne = ch.ne(), nq = ch.nq();
  const double de = ch.e_grid().delta();
  std::vector<double> fq(nq, 0.0);
  for (std::size_t i = 0; i < ne; ++i) {
    double w = fe.density().height(i) * de;
    if (w == 0.0) continue;
    auto row = ch.row(i);
    for (std::size_t j = 0; j < nq; ++j) fq[j] += w * row[j];
  }
  return Density(ch.q_grid(), std::move(fq));
}

std::vector<double> cond_entropy_profile(const Channel& ch) {
  std::vector<double> h(ch.ne());
  for (std::size_t i = 0; i < ch.ne(); ++i) {
    h[i] = entropy_bits(ch.row(i), ch.q_grid().delta());
  }
  return h;
}

JointSummary mutual_information(const Channel& ch, const InputDistribution& fe) {
  check_same_grid(fe.density().grid(), ch.e_grid(),
                  "mutual_information: input lives on the wrong grid");
  const std::size_t ne = ch.ne(), nq = ch.nq();
  const double de = ch.e_grid().delta(), dq = ch.q_grid().delta();

  Density marginal = marginal_q(ch, fe);
  std::vector<double> lg(nq);
  for (std::size_t j = 0; j < nq; ++j) {
    double f = marginal.height(j);
    lg[j] = f > 0.0 ? std::log2(f) : 0.0;  // zero-marginal cells never pair with positive kernel
  }

  JointSummary s{std::move(marginal), 0.0, std::vector<double>(ne), 0.0, 0.0,
                 std::vector<double>(ne)};
  s.h_q = s.marginal.entropy_bits();
  for (std::size_t i = 0; i < ne; ++i) {
    auto row = ch.row(i);
    double hi = entropy_bits(row, dq);
    double cross = 0.0;
    for (std::size_t j = 0; j < nq; ++j) cross += row[j] * lg[j];
    s.h_q_given_e[i] = hi;
    s.per_e_gain[i] = -hi - dq * cross;
    s.h_q_given_big_e += fe.density().height(i) * de * hi;
  }
  s.mutual_info_bits = s.h_q - s.h_q_given_big_e;
  return s;
}

double mutual_information_kl(const Channel& ch, const InputDistribution& fe) {
  check_same_grid(fe.density().grid(), ch.e_grid(),
                  "mutual_information_kl: input lives on the wrong grid");
  const std::size_t ne = ch.ne(), nq = ch.nq();
  const double de = ch.e_grid().delta(), dq = ch.q_grid().delta();
  Density marginal = marginal_q(ch, fe);

  double acc = 0.0;
  for (std::size_t i = 0; i < ne; ++i) {
    double w = fe.density().height(i) * de;
    if (w == 0.0) continue;
    auto row = ch.row(i);
    double d = 0.0;
    for (std::size_t j = 0; j < nq; ++j) {
      double k = row[j];
      if (k <= 0.0) continue;
      double f = marginal.height(j);
      if (f <= 0.0) continue;
      d += k * std::log2(k / f);
    }
    acc += w * d * dq;
  }
  return acc;
}

ReverseSummary reverse_quantities(const Channel& ch, const InputDistribution& fe) {
  check_same_grid(fe.density().grid(), ch.e_grid(),
                  "reverse_quantities: input lives on the wrong grid");
  const std::size_t ne = ch.ne(), nq = ch.nq();
  const double de = ch.e_grid().delta(), dq = ch.q_grid().delta();
  const double nan = std::numeric_limits<double>::quiet_NaN();

  std::vector<double> w(ne);
  for (std::size_t i = 0; i < ne; ++i) w[i] = fe.density().height(i) * de;

  ReverseSummary s;
  s.h_e_given_q.assign(nq, nan);
  s.i_e_given_q.assign(nq, nan);
  s.posterior_mean_e.assign(nq, nan);
  s.h_e = fe.density().entropy_bits();
  s.i_eq_bits = 0.0;
  s.excluded_mass = 0.0;
  s.excluded_cells = 0;

  for (std::size_t j = 0; j < nq; ++j) {
    // Column pass: the posterior over e given q_j has heights K(q_j|e) w_e / (de * fq_j).
    double fq = 0.0, s_log = 0.0, s_mean = 0.0;
    for (std::size_t i = 0; i < ne; ++i) {
      double kw = ch.k(i, j) * w[i];
      if (kw > 0.0) {
        fq += kw;
        s_log += kw * std::log2(kw);
        s_mean += kw * ch.e_grid().center(i);
      }
    }
    if (fq <= 0.0) {
      ++s.excluded_cells;
      continue;
    }
    double h = -s_log / fq + std::log2(de * fq);
    s.h_e_given_q[j] = h;
    s.i_e_given_q[j] = s.h_e - h;
    s.posterior_mean_e[j] = s_mean / fq;
    s.i_eq_bits += fq * dq * s.i_e_given_q[j];
  }
  return s;
}

void Channel::to_csv(std::ostream& os) const {
  os << "e";
  for (std::size_t j = 0; j < nq(); ++j) os << ',' << csv::format(q_grid_.center(j));
  os << '\n';
  for (std::size_t i = 0; i < ne(); ++i) {
    os << csv::format(e_grid_.center(i));
    auto r = row(i);
    for (std::size_t j = 0; j < nq(); ++j) os << ',' << csv::format(r[j]);
    os << '\n';
  }
}

namespace {

// Rebuilds a Grid from a list of cell centers, validating uniform spacing.
Grid grid_from_centers(const std::vector<double>& c, const char* axis) {
  if (c.size() < 2) {
    throw ParseError(std::string("channel CSV: need at least 2 cells on the ") + axis + " axis");
  }
  double delta = (c.back() - c.front()) / static_cast<double>(c.size() - 1);
  if (!(delta > 0.0)) {
    throw ParseError(std::string("channel CSV: ") + axis + " centers must increase");
  }
  for (std::size_t k = 0; k < c.size(); ++k) {
    double expect = c.front() + static_cast<double>(k) * delta;
    if (std::abs(c[k] - expect) > 1e-6 * delta) {
      throw ParseError(std::string("channel CSV: ") + axis + " centers are not uniformly spaced");
    }
  }
  return Grid(c.front() - 0.5 * delta, c.back() + 0.5 * delta, c.size());
}

}  // namespace

Channel Channel::from_csv(std::istream& is) {
  auto rows = csv::read_table(is);
  if (rows.size() < 3) throw ParseError("channel CSV: need a header row and at least 2 data rows");

  const auto& header = rows[0];
  if (header.size() < 3) throw ParseError("channel CSV: need at least 2 q columns");
  std::vector<double> q_centers;
  for (std::size_t j = 1; j < header.size(); ++j) {
    q_centers.push_back(csv::parse_double(header[j], 1));
  }

  std::size_t ne = rows.size() - 1, nq = q_centers.size();
  std::vector<double> e_centers(ne);
  std::vector<double> kernel(ne * nq);
  for (std::size_t i = 0; i < ne; ++i) {
    const auto& r = rows[i + 1];
    if (r.size() != nq + 1) {
      throw ParseError("channel CSV: row " + std::to_string(i + 2) + " has " +
                       std::to_string(r.size()) + " fields, expected " + std::to_string(nq + 1));
    }
    e_centers[i] = csv::parse_double(r[0], i + 2);
    for (std::size_t j = 0; j < nq; ++j) {
      kernel[i * nq + j] = csv::parse_double(r[j + 1], i + 2);
    }
  }
  return Channel(grid_from_centers(e_centers, "e"), grid_from_centers(q_centers, "q"),
                 std::move(kernel));
}

}  // namespace enthom
