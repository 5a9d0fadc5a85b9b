#include "enthom/homogenize.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "enthom/density.hpp"
#include "enthom/errors.hpp"

namespace enthom {

namespace {

constexpr double kDomainSlackMass = 1e-13;

// Star kernel rows: source row at map_e^{-1}(center), pushed through map_q.
std::vector<double> star_kernel(const Channel& ch, const IncreasingMap& map_e,
                                const IncreasingMap& map_q, const Grid& star_e,
                                const Grid& star_q) {
  std::vector<double> kernel(star_e.size() * star_q.size(), 0.0);
  for (std::size_t i = 0; i < star_e.size(); ++i) {
    double e = map_e.inverse(star_e.center(i));
    std::size_t src = ch.e_grid().cell_of(e);
    std::span<double> out(kernel.data() + i * star_q.size(), star_q.size());
    double outside = pushforward_masses(ch.q_grid(), ch.row(src), map_q, star_q, out);
    if (outside > kDomainSlackMass) {
      throw DomainMismatch(
          "build_homogenized: a source row has mass outside the output transform's domain "
          "(its support exceeds the support of the output marginal)");
    }
  }
  return kernel;
}

}  // namespace

HomogenizedSystem build_homogenized(const Channel& ch, const CapacitySolution& sol,
                                    std::size_t n_star, bool restrict_support) {
  IncreasingMap map_e = cdf_map(sol.f_tilde_e.density(), restrict_support);
  IncreasingMap map_q = cdf_map(sol.f_tilde_q, restrict_support);

  Grid star_e(0.0, 1.0, n_star);
  Grid star_q(0.0, 1.0, n_star);
  Channel star(star_e, star_q, star_kernel(ch, map_e, map_q, star_e, star_q));
  std::vector<double> profile = cond_entropy_profile(star);

  bool restricted_e = map_e.x_lo() > ch.e_grid().lo() || map_e.x_hi() < ch.e_grid().hi() ||
                      sol.f_tilde_e.density().has_interior_zero();
  bool restricted_q = map_q.x_lo() > ch.q_grid().lo() || map_q.x_hi() < ch.q_grid().hi() ||
                      sol.f_tilde_q.has_interior_zero();

  return HomogenizedSystem{std::move(map_e),  std::move(map_q), std::move(star),
                           std::move(profile), sol.capacity_bits, restricted_e, restricted_q};
}

namespace {

// Max |h + C| over all cells and over cells whose source point keeps
// boundary_margin distance from the e range.
std::pair<double, double> flatness_devs(const HomogenizedSystem& sys, const Grid& e_range,
                                        double boundary_margin) {
  const Grid& star = sys.star_channel.e_grid();
  double max_all = 0.0, max_int = 0.0;
  for (std::size_t i = 0; i < star.size(); ++i) {
    double dev = std::abs(sys.entropy_profile[i] + sys.capacity_bits);
    max_all = std::max(max_all, dev);
    double e = sys.map_e.inverse(star.center(i));
    if (e - e_range.lo() < boundary_margin || e_range.hi() - e < boundary_margin) continue;
    max_int = std::max(max_int, dev);
  }
  return {max_all, max_int};
}

}  // namespace

EntropyFlatnessReport certify_entropy_flatness(const Channel& ch, const CapacitySolution& sol,
                                               const HomogenizedSystem& sys,
                                               double boundary_margin) {
  EntropyFlatnessReport rep;
  rep.capacity_bits = sys.capacity_bits;
  rep.boundary_margin = boundary_margin;
  rep.n_star = sys.star_channel.e_grid().size();

  double sum_dev = 0.0;
  for (double h : sys.entropy_profile) sum_dev += std::abs(h + sys.capacity_bits);
  rep.mean_abs_dev = sum_dev / static_cast<double>(sys.entropy_profile.size());

  auto [max_all, max_int] = flatness_devs(sys, ch.e_grid(), boundary_margin);
  rep.max_abs_dev = max_all;
  rep.max_abs_dev_interior = max_int;

  bool restricted = sys.support_restricted_e || sys.support_restricted_q;
  HomogenizedSystem fine = build_homogenized(ch, sol, 2 * rep.n_star, restricted);
  fine.capacity_bits = sys.capacity_bits;
  auto [fine_all, fine_int] = flatness_devs(fine, ch.e_grid(), boundary_margin);
  rep.max_abs_dev_refined = fine_all;
  rep.max_abs_dev_interior_refined = fine_int;
  return rep;
}

MiInvarianceReport mi_invariance_check(const Channel& ch, const InputDistribution& fe,
                                       const IncreasingMap& map_q, const IncreasingMap& map_e,
                                       std::size_t n_e_out, std::size_t n_q_out) {
  if (n_e_out == 0) n_e_out = ch.ne();
  if (n_q_out == 0) n_q_out = ch.nq();

  double i_before = mutual_information(ch, fe).mutual_info_bits;

  Grid e_out(map_e.y_lo(), map_e.y_hi(), n_e_out);
  Grid q_out(map_q.y_lo(), map_q.y_hi(), n_q_out);

  std::vector<double> kernel(n_e_out * n_q_out, 0.0);
  for (std::size_t i = 0; i < n_e_out; ++i) {
    double e = map_e.inverse(e_out.center(i));
    std::size_t src = ch.e_grid().cell_of(e);
    std::span<double> out(kernel.data() + i * n_q_out, n_q_out);
    double outside = pushforward_masses(ch.q_grid(), ch.row(src), map_q, q_out, out);
    if (outside > kDomainSlackMass) {
      throw DomainMismatch("mi_invariance_check: row mass outside the output transform's domain");
    }
  }
  Channel transformed(e_out, q_out, std::move(kernel));
  InputDistribution fe_out(pushforward(fe.density(), map_e, e_out));

  double i_after = mutual_information(transformed, fe_out).mutual_info_bits;
  return MiInvarianceReport{i_before, i_after, std::abs(i_after - i_before)};
}

}  // namespace enthom
