#pragma once

#include <cstddef>
#include <vector>

#include "enthom/channel.hpp"

namespace enthom {

struct SolverOptions {
  // Stop when (max_i D_i) - (sum_i w_i D_i) <= tol bits. The two sides
  // sandwich the capacity, so tol bounds the final error directly.
  double tol = 1e-9;
  std::size_t max_iter = 20000;
  // Cells whose input mass ends below this are classified off-support.
  double mass_floor = 1e-9;
};

struct CapacitySolution {
  InputDistribution f_tilde_e;       // capacity-achieving input
  Density f_tilde_q;                 // output marginal under f_tilde_e
  double capacity_bits;              // sum_i w_i D_i at exit (lower bound)
  double lower_bound_bits;
  double upper_bound_bits;           // max_i D_i at exit
  std::vector<double> kkt_residual;  // D_i - capacity per e-cell
  std::vector<double> lower_bound_trace;  // lower bound after each iteration
  std::size_t iterations;
  bool converged;
  double mass_floor;

  bool on_support(std::size_t i) const {
    return f_tilde_e.density().mass(i) > mass_floor;
  }
};

// Multiplicative fixed-point iteration for the capacity-achieving input:
// w_i <- w_i 2^{D_i} / Z with D_i = D(K(.|e_i) || f_Q), starting uniform.
// Converged means both the capacity sandwich (max D - sum w D <= tol) and
// the per-cell optimality residual on surviving support cells are inside
// budget; the second clause matters because decaying cells can linger above
// the support floor long after the bounds have pinched.
// Deterministic: same channel and options give bitwise-identical output.
// A run that exhausts max_iter returns converged=false with the best
// iterate and its bound gap; it does not throw.
CapacitySolution solve_capacity(const Channel& ch, const SolverOptions& opt = {});

// Packages an externally chosen input (for instance a closed-form one) in
// the same shape the solver returns: marginal, achieved rate as capacity,
// and the per-cell residual profile for that input.
CapacitySolution solution_from_input(const Channel& ch, InputDistribution fe);

struct StationarityReport {
  double capacity_bits;
  double max_abs_residual_support;  // max |D_i - C| over support cells
  double max_residual_off_support;  // max (D_i - C) over off-support cells
  std::size_t support_cells;
  std::vector<double> residual;     // D_i - C per e-cell, recomputed
};

// Recomputes D_i from the solution itself (not solver internals) and
// checks the optimality condition: D_i = C on the support of f_tilde_e,
// D_i <= C elsewhere.
StationarityReport verify_stationarity(const Channel& ch, const CapacitySolution& sol);

}  // namespace enthom
