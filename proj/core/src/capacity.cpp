#include "enthom/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "enthom/errors.hpp"

namespace enthom {

namespace {

// D_i for every row: D_i = -h(Q|e_i) - dq * sum_j K_ij log2(fq_j).
// Row entropies are fixed per channel, so callers precompute them once.
void information_gains(const Channel& ch, const std::vector<double>& row_entropy,
                       const std::vector<double>& fq, std::vector<double>& lg,
                       std::vector<double>& d) {
  const std::size_t ne = ch.ne(), nq = ch.nq();
  const double dq = ch.q_grid().delta();
  for (std::size_t j = 0; j < nq; ++j) {
    lg[j] = fq[j] > 0.0 ? std::log2(fq[j]) : 0.0;  // empty columns pair only with zero kernel
  }
  for (std::size_t i = 0; i < ne; ++i) {
    auto row = ch.row(i);
    double cross = 0.0;
    for (std::size_t j = 0; j < nq; ++j) cross += row[j] * lg[j];
    d[i] = -row_entropy[i] - dq * cross;
  }
}

}  // namespace

CapacitySolution solve_capacity(const Channel& ch, const SolverOptions& opt) {
  const std::size_t ne = ch.ne(), nq = ch.nq();

  std::vector<double> row_entropy = cond_entropy_profile(ch);
  std::vector<double> w(ne, 1.0 / static_cast<double>(ne));  // cell masses
  std::vector<double> fq(nq), lg(nq), d(ne);
  std::vector<double> trace;
  trace.reserve(std::min<std::size_t>(opt.max_iter, 65536));

  // Decaying cells sit above the support floor for many iterations, so the
  // bound gap alone is not enough: wait until every cell still classified
  // as support has its residual inside the reporting budget too.
  const double residual_budget = 0.7 * std::max(10.0 * opt.tol, 1e-6);

  double lb = 0.0, ub = 0.0;
  std::size_t it = 0;
  bool converged = false;

  for (it = 1; it <= opt.max_iter; ++it) {
    std::fill(fq.begin(), fq.end(), 0.0);
    for (std::size_t i = 0; i < ne; ++i) {
      if (w[i] == 0.0) continue;
      auto row = ch.row(i);
      for (std::size_t j = 0; j < nq; ++j) fq[j] += w[i] * row[j];
    }
    information_gains(ch, row_entropy, fq, lg, d);

    lb = 0.0;
    ub = d[0];
    for (std::size_t i = 0; i < ne; ++i) {
      lb += w[i] * d[i];
      ub = std::max(ub, d[i]);
    }
    trace.push_back(lb);
    if (ub - lb <= opt.tol) {
      double worst = 0.0;
      for (std::size_t i = 0; i < ne; ++i) {
        if (w[i] > opt.mass_floor) worst = std::max(worst, std::abs(d[i] - lb));
      }
      if (worst <= residual_budget) {
        converged = true;
        break;
      }
    }

    // w_i <- w_i 2^{D_i} / Z, shifted by ub so the exponent never overflows.
    double z = 0.0;
    for (std::size_t i = 0; i < ne; ++i) {
      w[i] *= std::exp2(d[i] - ub);
      z += w[i];
    }
    for (std::size_t i = 0; i < ne; ++i) w[i] /= z;
  }
  if (!converged) it = opt.max_iter;

  const double de = ch.e_grid().delta();
  std::vector<double> fe_heights(ne);
  for (std::size_t i = 0; i < ne; ++i) fe_heights[i] = w[i] / de;

  CapacitySolution sol{
      InputDistribution(Density(ch.e_grid(), std::move(fe_heights))),
      Density(ch.q_grid(), std::vector<double>(fq)),
      lb,
      lb,
      ub,
      std::vector<double>(ne),
      std::move(trace),
      it,
      converged,
      opt.mass_floor,
  };
  for (std::size_t i = 0; i < ne; ++i) sol.kkt_residual[i] = d[i] - lb;
  return sol;
}

CapacitySolution solution_from_input(const Channel& ch, InputDistribution fe) {
  const std::size_t ne = ch.ne(), nq = ch.nq();

  std::vector<double> row_entropy = cond_entropy_profile(ch);
  Density fq = marginal_q(ch, fe);
  std::vector<double> lg(nq), d(ne);
  information_gains(ch, row_entropy, fq.heights(), lg, d);

  const Density& fed = fe.density();
  double rate = 0.0, ub = d[0];
  for (std::size_t i = 0; i < ne; ++i) {
    rate += fed.mass(i) * d[i];
    ub = std::max(ub, d[i]);
  }

  CapacitySolution sol{
      std::move(fe),
      std::move(fq),
      rate,
      rate,
      ub,
      std::vector<double>(ne),
      {rate},
      0,
      true,
      1e-9,
  };
  for (std::size_t i = 0; i < ne; ++i) sol.kkt_residual[i] = d[i] - rate;
  return sol;
}

StationarityReport verify_stationarity(const Channel& ch, const CapacitySolution& sol) {
  const std::size_t ne = ch.ne(), nq = ch.nq();

  // Rebuild everything from the solution's input distribution.
  std::vector<double> row_entropy = cond_entropy_profile(ch);
  Density fq_density = marginal_q(ch, sol.f_tilde_e);
  std::vector<double> fq(fq_density.heights());
  std::vector<double> lg(nq), d(ne);
  information_gains(ch, row_entropy, fq, lg, d);

  StationarityReport rep;
  rep.capacity_bits = sol.capacity_bits;
  rep.max_abs_residual_support = 0.0;
  rep.max_residual_off_support = -std::numeric_limits<double>::infinity();
  rep.support_cells = 0;
  rep.residual.resize(ne);
  for (std::size_t i = 0; i < ne; ++i) {
    double r = d[i] - sol.capacity_bits;
    rep.residual[i] = r;
    if (sol.on_support(i)) {
      ++rep.support_cells;
      rep.max_abs_residual_support = std::max(rep.max_abs_residual_support, std::abs(r));
    } else {
      rep.max_residual_off_support = std::max(rep.max_residual_off_support, r);
    }
  }
  return rep;
}

}  // namespace enthom
