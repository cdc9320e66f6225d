#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "coulomb/diagnostics.hpp"
#include "coulomb/drift.hpp"
#include "coulomb/io.hpp"
#include "coulomb/parallel.hpp"
#include "coulomb/runspec.hpp"

namespace coulomb {

namespace {

std::vector<std::string> header_lines(const RunSpec& spec) {
  std::vector<std::string> lines{std::string("artifact: ") + kArtifactVersion};
  std::stringstream ss(serialize_runspec(spec));
  std::string line;
  while (std::getline(ss, line)) lines.push_back(line);
  return lines;
}

std::size_t effective_threads(const RunSpec& spec) {
  return spec.threads == 0 ? default_threads() : spec.threads;
}

double median(std::vector<double> v) {
  if (v.empty()) throw InsufficientSamples("median of empty list");
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string out_path(const RunSpec& spec, const std::string& name) {
  std::filesystem::create_directories(spec.out_dir);
  return (std::filesystem::path(spec.out_dir) / name).string();
}

// Empirical bulk density: torus domains are exactly N / side^d; otherwise
// count particles inside 60% of the median droplet radius.
double bulk_density(const RunSpec& spec, const std::vector<Configuration>& samples) {
  if (spec.model_domain == "torus")
    return static_cast<double>(spec.model_n) /
           std::pow(spec.model_domain_side, static_cast<double>(spec.model_dim));
  std::vector<double> rmax;
  for (const auto& s : samples) {
    double m = 0;
    for (const Vec& p : s.positions) m = std::max(m, p.norm());
    rmax.push_back(m);
  }
  double droplet = median(rmax);
  double rb = 0.6 * droplet;
  double mean_count = 0;
  for (const auto& s : samples) {
    for (const Vec& p : s.positions)
      if (p.norm() <= rb) mean_count += 1;
  }
  mean_count /= static_cast<double>(samples.size());
  double d = static_cast<double>(spec.model_dim);
  double volume = std::pow(std::numbers::pi, d / 2.0) /
                  std::tgamma(d / 2.0 + 1.0) * std::pow(rb, d);
  return mean_count / volume;
}

std::vector<Configuration> draw_samples(const RunSpec& spec, const GibbsModel& model) {
  auto [samples, stats] = sample_gibbs_replicas(model, make_chain_params(spec),
                                                spec.diag_replicas,
                                                effective_threads(spec));
  (void)stats;
  return samples;
}

int cmd_sample(const RunSpec& spec) {
  GibbsModel model = make_model(spec);
  auto [samples, stats] = sample_gibbs_replicas(model, make_chain_params(spec),
                                                spec.diag_replicas,
                                                effective_threads(spec));
  auto header = header_lines(spec);
  write_samples_csv(out_path(spec, "samples.csv"), samples, header);
  write_scalars(out_path(spec, "sample_report.txt"),
                {{"acceptance_rate", stats.acceptance_rate},
                 {"n_steps", static_cast<double>(stats.n_steps)},
                 {"convergence_warning", stats.convergence_warning ? 1.0 : 0.0}},
                header);
  return 0;
}

Configuration draw_initial(const RunSpec& spec, const GibbsModel& model,
                           std::uint64_t replica) {
  ChainParams params = make_chain_params(spec);
  params.n_samples = 1;
  CounterRng rng(params.seed, replica);
  Configuration state = initial_configuration(model, rng);
  for (std::size_t step = 0; step < params.burn_in; ++step) {
    auto r = mala_step(model, state.positions, params.step_size, rng, 1);
    state.positions = std::move(r.positions);
  }
  return state;
}

int cmd_evolve(const RunSpec& spec) {
  GibbsModel model = make_model(spec);
  Configuration initial = draw_initial(spec, model, 0);
  Trajectory traj = evolve(model, make_dyn_spec(spec), initial, effective_threads(spec));
  auto header = header_lines(spec);
  write_trajectory_csv(out_path(spec, "trajectory.csv"), traj, model.dim, header);
  write_events_csv(out_path(spec, "events.csv"), traj, header);
  write_scalars(out_path(spec, "evolve_report.txt"),
                {{"min_pair_distance", min_pair_distance(traj)},
                 {"n_snapshots", static_cast<double>(traj.states.size())},
                 {"n_moving", static_cast<double>(traj.n_moving)}},
                header);
  return 0;
}

int cmd_drift_table(const RunSpec& spec) {
  GibbsModel model = make_model(spec);
  auto samples = draw_samples(spec, model);
  if (spec.diag_radii.empty()) throw ParseError("drift-table requires diag.radii");

  std::vector<std::vector<double>> coeff_cols(spec.diag_radii.size());
  std::vector<std::vector<double>> resid_cols(spec.diag_radii.size());
  for (const Configuration& s : samples) {
    auto [coeff, resid] = correction_decay_table(s, spec.diag_radii,
                                                 spec.drift_taylor_order, spec.diag_q);
    for (std::size_t k = 0; k < spec.diag_radii.size(); ++k) {
      coeff_cols[k].push_back(coeff.ordinate[k]);
      resid_cols[k].push_back(resid.ordinate[k]);
    }
  }
  Curve coeff_med, resid_med;
  for (std::size_t k = 0; k < spec.diag_radii.size(); ++k) {
    coeff_med.abscissa.push_back(spec.diag_radii[k]);
    coeff_med.ordinate.push_back(median(coeff_cols[k]));
    coeff_med.stderr_.push_back(0.0);
    resid_med.abscissa.push_back(spec.diag_radii[k]);
    resid_med.ordinate.push_back(median(resid_cols[k]));
    resid_med.stderr_.push_back(0.0);
  }
  write_curve_csv(out_path(spec, "correction_decay.csv"), "R",
                  {{"coeff_max", &coeff_med}, {"residual_sup", &resid_med}},
                  header_lines(spec));
  return 0;
}

int cmd_hyperuniformity(const RunSpec& spec) {
  GibbsModel model = make_model(spec);
  auto samples = draw_samples(spec, model);
  if (spec.diag_radii.empty())
    throw ParseError("hyperuniformity requires diag.radii (mean-spacing units)");
  double rho = bulk_density(spec, samples);
  double spacing = std::pow(rho, -1.0 / static_cast<double>(spec.model_dim));
  std::vector<double> radii;
  for (double r : spec.diag_radii) radii.push_back(r * spacing);
  auto [mean_curve, var_curve] = number_variance(samples, radii);
  auto [gamma, gamma_se] = growth_exponent(var_curve);
  auto header = header_lines(spec);
  write_curve_csv(out_path(spec, "variance_curve.csv"), "r",
                  {{"mean_count", &mean_curve}, {"count_variance", &var_curve}},
                  header);
  write_scalars(out_path(spec, "hyperuniformity_report.txt"),
                {{"growth_exponent", gamma},
                 {"growth_exponent_stderr", gamma_se},
                 {"bulk_density", rho},
                 {"n_samples", static_cast<double>(samples.size())}},
                header);
  return 0;
}

int cmd_l2_bound(const RunSpec& spec) {
  GibbsModel model = make_model(spec);
  auto samples = draw_samples(spec, model);
  auto [estimate, se] =
      l2_drift_estimate(samples, model, spec.diag_q, effective_threads(spec));
  write_scalars(out_path(spec, "l2_report.txt"),
                {{"l2_estimate", estimate},
                 {"l2_stderr", se},
                 {"q", spec.diag_q},
                 {"n_samples", static_cast<double>(samples.size())}},
                header_lines(spec));
  return 0;
}

// Sup distance over [0, T] of the m innermost labels between two coupled
// trajectories sharing a snapshot grid.
double coupled_sup_distance(const Trajectory& a, const Trajectory& b, std::size_t m) {
  double sup = 0.0;
  std::size_t n = std::min(a.states.size(), b.states.size());
  for (std::size_t s = 0; s < n; ++s) {
    std::size_t mm = std::min(m, std::min(a.states[s].size(), b.states[s].size()));
    for (std::size_t i = 0; i < mm; ++i)
      sup = std::max(sup, dist(a.states[s][i], b.states[s][i]));
  }
  return sup;
}

int cmd_converge(const RunSpec& spec) {
  GibbsModel model = make_model(spec);
  if (spec.diag_radii.empty()) throw ParseError("converge requires diag.radii");
  constexpr std::size_t kInnerLabels = 4;
  std::size_t threads = effective_threads(spec);

  Curve result;
  for (double R : spec.diag_radii) {
    std::vector<double> sups(spec.diag_replicas);
    parallel_for(spec.diag_replicas, threads, [&](std::size_t rep) {
      RunSpec local = spec;
      local.seed = spec.seed;  // shared noise; replica enters via the initial state
      GibbsModel m2 = model;
      Configuration initial = draw_initial(local, m2, rep + 1);
      DynSpec spec_a = make_dyn_spec(local);
      spec_a.scheme = Scheme::ReflectedFrozen;
      spec_a.reflect_radius = R;
      spec_a.drift_spec.cutoff_R = R;
      spec_a.seed = spec.seed + rep;
      DynSpec spec_b = spec_a;
      spec_b.reflect_radius = 2 * R;
      spec_b.drift_spec.cutoff_R = 2 * R;
      auto [ta, tb] = coupled_evolve(m2, spec_a, spec_b, initial, 1);
      sups[rep] = coupled_sup_distance(ta, tb, kInnerLabels);
    });
    result.abscissa.push_back(R);
    result.ordinate.push_back(median(sups));
    result.stderr_.push_back(0.0);
  }
  write_curve_csv(out_path(spec, "converge.csv"), "R",
                  {{"median_sup_distance", &result}}, header_lines(spec));
  return 0;
}

int cmd_a4_check(const RunSpec& spec) {
  GibbsModel model = make_model(spec);
  auto samples = draw_samples(spec, model);
  if (spec.diag_radii.empty()) throw ParseError("a4-check requires diag.radii");
  Vec x = Vec::zero(model.dim);
  x[0] = spec.diag_probe_radius;

  std::vector<std::vector<double>> cols(spec.diag_radii.size());
  for (const Configuration& s : samples) {
    Curve c = a4_residual(s, model.confinement, x, spec.diag_radii);
    for (std::size_t k = 0; k < cols.size(); ++k) cols[k].push_back(c.ordinate[k]);
  }
  Curve med;
  for (std::size_t k = 0; k < cols.size(); ++k) {
    med.abscissa.push_back(spec.diag_radii[k]);
    med.ordinate.push_back(median(cols[k]));
    med.stderr_.push_back(0.0);
  }
  write_curve_csv(out_path(spec, "a4_residual.csv"), "R",
                  {{"median_residual", &med}}, header_lines(spec));
  return 0;
}

}  // namespace

int run_subcommand(const RunSpec& spec, const std::string& subcommand) {
  if (subcommand == "sample") return cmd_sample(spec);
  if (subcommand == "evolve") return cmd_evolve(spec);
  if (subcommand == "drift-table") return cmd_drift_table(spec);
  if (subcommand == "hyperuniformity") return cmd_hyperuniformity(spec);
  if (subcommand == "l2-bound") return cmd_l2_bound(spec);
  if (subcommand == "converge") return cmd_converge(spec);
  if (subcommand == "a4-check") return cmd_a4_check(spec);
  throw ParseError("unknown subcommand '" + subcommand + "'");
}

}  // namespace coulomb
