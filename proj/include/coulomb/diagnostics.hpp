#pragma once

#include <map>
#include <string>
#include <vector>

#include "coulomb/dynamics.hpp"
#include "coulomb/model.hpp"
#include "coulomb/stats.hpp"

namespace coulomb {

// C^1 smoothstep cutoff: 1 on |x| <= q, 0 on |x| >= q + 1,
// 1 - (3u^2 - 2u^3) with u = |x| - q in between.
struct CutoffFq {
  double q = 1.0;
  double operator()(const Vec& x) const;
};

struct Curve {
  std::vector<double> abscissa;
  std::vector<double> ordinate;
  std::vector<double> stderr_;
};

// Named results with provenance metadata; the CLI serializes these.
struct DiagnosticsReport {
  std::string name;
  std::map<std::string, double> scalars;
  std::map<std::string, Curve> curves;
  std::map<std::string, std::string> metadata;
};

// Sample mean and unbiased variance of N_r(s) = #{i : |x^i| <= r} per
// radius, with jackknife stderr on the variance. Returns (mean curve,
// variance curve).
std::pair<Curve, Curve> number_variance(const std::vector<Configuration>& samples,
                                        const std::vector<double>& radii);

// OLS slope of log Var vs log r over the supplied curve window.
std::pair<double, double> growth_exponent(const Curve& variance_curve);

// Monte-Carlo estimate of sum_i f_q(x^i) |d^N(x^i, rest)|^2 averaged over
// samples (empirical one-Campbell integral), with stderr.
std::pair<double, double> l2_drift_estimate(const std::vector<Configuration>& samples,
                                            const GibbsModel& model, double q,
                                            std::size_t threads = 1);

// Minimum pair distance over all recorded states of a trajectory.
double min_pair_distance(const Trajectory& trajectory);

// I_{R,T}: the largest sorted label whose path enters the closed ball of
// radius R before time T; 0 if none. Assumes trajectory states are in
// label order (as produced by evolve).
std::size_t entry_count_irt(const Trajectory& trajectory, double R, double T);

// Per cutoff radius R: the scaled max coefficient norm
// max_{|i| <= l0} ||C_R^i|| q^{|i|} and the sup of |residual| over a grid
// of the closed ball of radius q with pitch q/20. Returns (coefficient
// curve, residual curve).
std::pair<Curve, Curve> correction_decay_table(const Configuration& config,
                                               const std::vector<double>& radii,
                                               int l0, double probe_radius_q);

// Norm of  sum_i (1_{S_R}(s^i) - 1_{S_R}(x - s^i)) (x - s^i)/|x - s^i|^d
// minus grad Phi(x), per radius R.
Curve a4_residual(const Configuration& config, const ConfinementField& confinement,
                  const Vec& x, const std::vector<double>& radii);

}  // namespace coulomb
