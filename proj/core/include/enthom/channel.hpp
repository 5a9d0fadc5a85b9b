#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "enthom/density.hpp"
#include "enthom/grid.hpp"

namespace enthom {

// Conditional density family K(q | e) discretized on a pair of grids.
// Row i is the output density for inputs in e-cell i: heights per unit q,
// stored row-major. Every constructor renormalizes rows to unit mass and
// records the largest correction it had to apply.
class Channel {
 public:
  Channel(Grid e_grid, Grid q_grid, std::vector<double> kernel);

  // Rows are Gaussians N(mean(e), sigma(e)^2) truncated to the q range and
  // renormalized; cell masses are computed from the normal CDF, not sampled.
  static Channel gaussian(const Grid& e_grid, const Grid& q_grid,
                          const std::function<double(double)>& mean,
                          const std::function<double(double)>& sigma);

  // Rows are uniform on [support(e).first, support(e).second]; cells cut by
  // a support endpoint get exact fractional weight.
  static Channel piecewise_uniform(
      const Grid& e_grid, const Grid& q_grid,
      const std::function<std::pair<double, double>(double)>& support);

  const Grid& e_grid() const { return e_grid_; }
  const Grid& q_grid() const { return q_grid_; }
  std::size_t ne() const { return e_grid_.size(); }
  std::size_t nq() const { return q_grid_.size(); }

  double k(std::size_t i, std::size_t j) const { return kernel_[i * nq() + j]; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(kernel_).subspan(i * nq(), nq());
  }
  Density row_density(std::size_t i) const;

  // Largest |row mass - 1| seen before renormalization.
  double row_mass_correction() const { return row_mass_correction_; }

  // CSV layout: header "e" followed by q-cell centers; one row per e-cell,
  // first column the e-cell center, then the kernel heights.
  void to_csv(std::ostream& os) const;
  static Channel from_csv(std::istream& is);

 private:
  Grid e_grid_;
  Grid q_grid_;
  std::vector<double> kernel_;
  double row_mass_correction_ = 0.0;
};

// Input density on the e-grid of a channel. A distinct type so the two
// axes cannot be swapped accidentally.
class InputDistribution {
 public:
  explicit InputDistribution(Density d) : d_(std::move(d)) {}
  const Density& density() const { return d_; }

 private:
  Density d_;
};

InputDistribution uniform_input(const Channel& ch);

// Output marginal f_Q under input fe.
Density marginal_q(const Channel& ch, const InputDistribution& fe);

// h(Q|e) per e-cell, in bits.
std::vector<double> cond_entropy_profile(const Channel& ch);

struct JointSummary {
  Density marginal;                  // f_Q
  double h_q;                        // h(Q)
  std::vector<double> h_q_given_e;   // h(Q|e) per e-cell
  double h_q_given_big_e;            // h(Q|E) = E_e[h(Q|e)]
  double mutual_info_bits;           // h(Q) - h(Q|E)
  std::vector<double> per_e_gain;    // D(K(.|e) || f_Q) per e-cell
};

// Forward quantities via the entropy decomposition I = h(Q) - h(Q|E).
JointSummary mutual_information(const Channel& ch, const InputDistribution& fe);

// The same quantity evaluated as an explicit double integral of
// K log2(K / f_Q); deliberately separate arithmetic for cross-checking.
double mutual_information_kl(const Channel& ch, const InputDistribution& fe);

struct ReverseSummary {
  std::vector<double> h_e_given_q;      // h(E|q) per q-cell, NaN where undefined
  std::vector<double> i_e_given_q;      // h(E) - h(E|q), NaN where undefined
  std::vector<double> posterior_mean_e; // E[E|q], NaN where undefined
  double h_e;                           // h(E) of the input
  double i_eq_bits;                     // average of i_e_given_q under f_Q
  double excluded_mass;                 // q-mass of cells with zero marginal
  std::size_t excluded_cells;
};

// Posterior quantities per q-cell. Cells with zero output marginal have no
// posterior; they are reported and left out of the average.
ReverseSummary reverse_quantities(const Channel& ch, const InputDistribution& fe);

}  // namespace enthom
