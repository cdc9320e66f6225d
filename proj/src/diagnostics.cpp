#include "coulomb/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "coulomb/parallel.hpp"

namespace coulomb {

double CutoffFq::operator()(const Vec& x) const {
  double r = x.norm();
  if (r <= q) return 1.0;
  if (r >= q + 1.0) return 0.0;
  double u = r - q;
  return 1.0 - (3.0 * u * u - 2.0 * u * u * u);
}

std::pair<Curve, Curve> number_variance(const std::vector<Configuration>& samples,
                                        const std::vector<double>& radii) {
  if (samples.size() < 2)
    throw InsufficientSamples("number_variance needs >= 2 samples");
  for (std::size_t k = 1; k < radii.size(); ++k)
    if (radii[k] <= radii[k - 1] || radii[k - 1] <= 0)
      throw DomainError("radii must be positive and increasing");

  Curve mean_curve, var_curve;
  for (double r : radii) {
    std::vector<double> counts;
    counts.reserve(samples.size());
    for (const Configuration& s : samples) {
      double c = 0;
      for (const Vec& p : s.positions)
        if (p.norm() <= r) c += 1;
      counts.push_back(c);
    }
    // Counts are small integers; a sorted reduction order makes the
    // statistics exactly invariant under sample-list permutations.
    std::sort(counts.begin(), counts.end());
    MeanVar mv = mean_variance(counts);
    mean_curve.abscissa.push_back(r);
    mean_curve.ordinate.push_back(mv.mean);
    mean_curve.stderr_.push_back(std::sqrt(mv.variance / counts.size()));
    var_curve.abscissa.push_back(r);
    var_curve.ordinate.push_back(mv.variance);
    var_curve.stderr_.push_back(jackknife_variance_stderr(counts));
  }
  return {std::move(mean_curve), std::move(var_curve)};
}

std::pair<double, double> growth_exponent(const Curve& variance_curve) {
  if (variance_curve.abscissa.size() < 3)
    throw DegenerateFit("growth_exponent needs >= 3 radii");
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < variance_curve.abscissa.size(); ++k) {
    if (variance_curve.ordinate[k] <= 0)
      throw DegenerateFit("non-positive variance in growth_exponent");
    lx.push_back(std::log(variance_curve.abscissa[k]));
    ly.push_back(std::log(variance_curve.ordinate[k]));
  }
  OlsFit fit = ols_fit(lx, ly);
  return {fit.slope, fit.slope_stderr};
}

std::pair<double, double> l2_drift_estimate(const std::vector<Configuration>& samples,
                                            const GibbsModel& model, double q,
                                            std::size_t threads) {
  if (samples.empty()) throw InsufficientSamples("l2_drift_estimate needs samples");
  CutoffFq cutoff{q};
  std::vector<double> per_sample(samples.size());
  parallel_for(samples.size(), threads, [&](std::size_t s) {
    const PointList& pts = samples[s].positions;
    auto rows = log_density_gradient(model, pts, 1);
    double acc = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      double f = cutoff(pts[i]);
      if (f == 0.0) continue;
      acc += f * rows[i].norm2();
    }
    per_sample[s] = acc;
  });
  MeanVar mv = mean_variance(per_sample);
  double se = per_sample.size() > 1
                  ? std::sqrt(mv.variance / static_cast<double>(per_sample.size()))
                  : 0.0;
  return {mv.mean, se};
}

double min_pair_distance(const Trajectory& trajectory) {
  if (trajectory.states.empty())
    throw DomainError("min_pair_distance on empty trajectory");
  double best = std::numeric_limits<double>::infinity();
  for (const PointList& state : trajectory.states) {
    for (std::size_t i = 0; i < state.size(); ++i)
      for (std::size_t j = i + 1; j < state.size(); ++j)
        best = std::min(best, dist(state[i], state[j]));
  }
  return best;
}

std::size_t entry_count_irt(const Trajectory& trajectory, double R, double T) {
  std::size_t best = 0;
  for (std::size_t k = 0; k < trajectory.states.size(); ++k) {
    if (trajectory.times[k] > T) break;
    const PointList& state = trajectory.states[k];
    for (std::size_t i = 0; i < state.size(); ++i) {
      if (state[i].norm() <= R) best = std::max(best, i + 1);
    }
  }
  return best;
}

std::pair<Curve, Curve> correction_decay_table(const Configuration& config,
                                               const std::vector<double>& radii,
                                               int l0, double probe_radius_q) {
  Curve coeff_curve, resid_curve;
  double q = probe_radius_q;

  // Probe grid over the closed ball of radius q, pitch q/20.
  std::vector<Vec> grid;
  if (config.dim == 2) {
    for (int a = -20; a <= 20; ++a)
      for (int b = -20; b <= 20; ++b) {
        Vec x{a * q / 20.0, b * q / 20.0};
        if (x.norm() <= q) grid.push_back(x);
      }
  } else {
    throw DomainError("correction_decay_table implemented for d = 2");
  }

  for (double R : radii) {
    auto [interior, exterior] = split_interior_exterior(config, R);
    (void)interior;
    CorrectionTable table = taylor_correction_constants(exterior, R, l0);
    double coeff_max = 0.0;
    for (const auto& [idx, c] : table.coefficients) {
      double scale = std::pow(q, static_cast<double>(idx.order()));
      coeff_max = std::max(coeff_max, c.norm() * scale);
    }
    double resid_sup = 0.0;
    for (const Vec& x : grid)
      resid_sup = std::max(resid_sup, taylor_residual(exterior, R, l0, x).norm());
    coeff_curve.abscissa.push_back(R);
    coeff_curve.ordinate.push_back(coeff_max);
    coeff_curve.stderr_.push_back(0.0);
    resid_curve.abscissa.push_back(R);
    resid_curve.ordinate.push_back(resid_sup);
    resid_curve.stderr_.push_back(0.0);
  }
  return {std::move(coeff_curve), std::move(resid_curve)};
}

Curve a4_residual(const Configuration& config, const ConfinementField& confinement,
                  const Vec& x, const std::vector<double>& radii) {
  for (const Vec& s : config.positions)
    if (s == x) throw DomainError("a4 probe point coincides with a particle");
  Vec grad_phi = confinement.gradient(x);
  std::size_t d = config.dim;

  Curve curve;
  for (double R : radii) {
    Vec acc = Vec::zero(d);
    for (const Vec& s : config.positions) {
      double in_s = s.norm() <= R ? 1.0 : 0.0;
      double in_xs = (x - s).norm() <= R ? 1.0 : 0.0;
      if (in_s == in_xs) continue;
      Vec diff = x - s;
      double r = diff.norm();
      if (r == 0.0) throw DomainError("a4 probe point coincides with a particle");
      acc += ((in_s - in_xs) * std::pow(r, -static_cast<double>(d))) * diff;
    }
    curve.abscissa.push_back(R);
    curve.ordinate.push_back((acc - grad_phi).norm());
    curve.stderr_.push_back(0.0);
  }
  return curve;
}

}  // namespace coulomb
