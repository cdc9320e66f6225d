#include "coulomb/sampler.hpp"

#include <cmath>
#include <cstdio>

#include "coulomb/parallel.hpp"

namespace coulomb {

namespace {

constexpr double kMinSeparationFactor = 1e-3;
constexpr std::size_t kMaxPlacementRetries = 10000;

double domain_scale(const GibbsModel& model) {
  switch (model.domain.kind) {
    case DomainKind::Ball:
      return model.domain.radius;
    case DomainKind::UnitTorusScaled:
      return model.domain.side;
    case DomainKind::FullSpace:
      break;
  }
  // Droplet radius heuristic: for Gaussian confinement the mean-field
  // density is 2c/pi per unit area (d = 2 scaling carried over as-is for
  // other d), giving radius ~ sqrt(N / (2c)).
  if (model.confinement.kind == ConfinementKind::Gaussian)
    return std::max(1.0, std::sqrt(static_cast<double>(model.n_particles) /
                                   (2.0 * model.confinement.c)));
  return std::max(1.0, std::sqrt(static_cast<double>(model.n_particles)));
}

bool inside_domain(const GibbsModel& model, const Vec& x) {
  if (model.domain.kind == DomainKind::Ball)
    return x.norm() <= model.domain.radius;
  return true;
}

Vec wrap_into_domain(const GibbsModel& model, Vec x) {
  if (model.domain.kind == DomainKind::UnitTorusScaled) {
    double s = model.domain.side;
    for (std::size_t k = 0; k < x.dim; ++k) {
      x[k] -= s * std::floor(x[k] / s + 0.5);
      if (x[k] <= -s / 2) x[k] += s;  // keep the half-open convention
    }
  }
  return x;
}

// a - b, minimum-image for torus domains so boundary wraps do not inflate
// the proposal-density terms.
Vec displacement(const GibbsModel& model, const Vec& a, const Vec& b) {
  Vec d = a - b;
  if (model.domain.kind == DomainKind::UnitTorusScaled) {
    double s = model.domain.side;
    for (std::size_t k = 0; k < d.dim; ++k) d[k] -= s * std::round(d[k] / s);
  }
  return d;
}

}  // namespace

void ChainParams::validate() const {
  if (step_size <= 0) throw DomainError("step_size must be positive");
  if (thinning < 1) throw DomainError("thinning must be >= 1");
}

Configuration initial_configuration(const GibbsModel& model, CounterRng& rng) {
  double scale = domain_scale(model);
  double min_sep = kMinSeparationFactor * scale;
  Configuration config{model.dim, {}, model.domain};
  bool torus = model.domain.kind == DomainKind::UnitTorusScaled;
  for (std::size_t i = 0; i < model.n_particles; ++i) {
    bool placed = false;
    for (std::size_t attempt = 0; attempt < kMaxPlacementRetries; ++attempt) {
      Vec x(model.dim);
      if (torus) {
        for (std::size_t k = 0; k < model.dim; ++k)
          x[k] = (rng.uniform() - 0.5) * model.domain.side;
      } else {
        // Uniform in the ball of radius `scale` by rejection from the cube.
        for (std::size_t k = 0; k < model.dim; ++k)
          x[k] = (2.0 * rng.uniform() - 1.0) * scale;
        if (x.norm() > scale) continue;
      }
      bool ok = true;
      for (const Vec& p : config.positions) {
        if (dist(p, x) < min_sep) {
          ok = false;
          break;
        }
      }
      if (ok) {
        config.positions.push_back(x);
        placed = true;
        break;
      }
    }
    if (!placed)
      throw NumericalError("initial placement failed: minimum separation unreachable");
  }
  return config;
}

MalaResult mala_step(const GibbsModel& model, const PointList& positions,
                     double step_size, CounterRng& rng, std::size_t threads) {
  if (step_size <= 0) throw DomainError("step_size must be positive");
  const std::size_t n = positions.size();
  const std::size_t d = model.dim;

  std::vector<Vec> grad = log_density_gradient(model, positions, threads);
  for (const Vec& g : grad)
    if (!g.all_finite())
      throw NumericalError("non-finite log-density gradient in MALA step");

  PointList proposal(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vec y = positions[i] + (step_size / 2.0) * grad[i];
    for (std::size_t k = 0; k < d; ++k)
      y[k] += std::sqrt(step_size) * rng.gaussian();
    proposal[i] = wrap_into_domain(model, y);
  }
  double u = rng.uniform();  // consumed regardless of outcome, keeps streams aligned

  if (model.domain.kind == DomainKind::Ball) {
    for (const Vec& y : proposal)
      if (!inside_domain(model, y)) return {positions, false};
  }

  double logpi_x = log_density(model, positions);
  double logpi_y = log_density(model, proposal);
  if (logpi_y == kLogDensityNegInf) return {positions, false};

  // log q(a -> b) = -|b - a - (tau/2) grad(a)|^2 / (2 tau), up to a constant.
  std::vector<Vec> grad_y = log_density_gradient(model, proposal, threads);
  double fwd = 0.0, rev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    Vec mf = displacement(model, proposal[i], positions[i]) - (step_size / 2.0) * grad[i];
    Vec mr = displacement(model, positions[i], proposal[i]) - (step_size / 2.0) * grad_y[i];
    fwd += mf.norm2();
    rev += mr.norm2();
  }
  double log_alpha = logpi_y - logpi_x + (fwd - rev) / (2.0 * step_size);
  if (std::log(u) < log_alpha) return {std::move(proposal), true};
  return {positions, false};
}

namespace {

std::pair<std::vector<Configuration>, ChainStats> run_chain(
    const GibbsModel& model, const ChainParams& params, std::uint64_t stream,
    std::size_t threads) {
  CounterRng rng(params.seed, stream);
  Configuration state = initial_configuration(model, rng);
  std::size_t total = params.burn_in + params.n_samples * params.thinning;
  std::size_t accepted = 0;
  std::vector<Configuration> samples;
  samples.reserve(params.n_samples);
  for (std::size_t step = 0; step < total; ++step) {
    MalaResult r = mala_step(model, state.positions, params.step_size, rng, threads);
    if (r.accepted) ++accepted;
    state.positions = std::move(r.positions);
    if (step >= params.burn_in &&
        (step - params.burn_in + 1) % params.thinning == 0) {
      samples.push_back(state);
    }
  }
  ChainStats stats;
  stats.n_steps = total;
  stats.acceptance_rate =
      total == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(total);
  stats.convergence_warning =
      stats.acceptance_rate < 0.05 || stats.acceptance_rate > 0.95;
  if (stats.convergence_warning)
    std::fprintf(stderr, "warning: MALA acceptance rate %.3f outside [0.05, 0.95]\n",
                 stats.acceptance_rate);
  return {std::move(samples), stats};
}

}  // namespace

std::pair<std::vector<Configuration>, ChainStats> sample_gibbs(
    const GibbsModel& model, const ChainParams& params, std::size_t threads) {
  model.validate();
  params.validate();
  return run_chain(model, params, /*stream=*/0, threads);
}

std::pair<std::vector<Configuration>, ChainStats> sample_gibbs_replicas(
    const GibbsModel& model, const ChainParams& params, std::size_t n_replicas,
    std::size_t threads) {
  model.validate();
  params.validate();
  std::vector<std::vector<Configuration>> per_replica(n_replicas);
  std::vector<ChainStats> stats(n_replicas);
  parallel_for(n_replicas, threads, [&](std::size_t r) {
    auto [samples, st] = run_chain(model, params, r, 1);
    per_replica[r] = std::move(samples);
    stats[r] = st;
  });
  std::vector<Configuration> all;
  ChainStats agg;
  double acc = 0.0;
  for (std::size_t r = 0; r < n_replicas; ++r) {
    for (auto& c : per_replica[r]) all.push_back(std::move(c));
    agg.n_steps += stats[r].n_steps;
    acc += stats[r].acceptance_rate;
    agg.convergence_warning = agg.convergence_warning || stats[r].convergence_warning;
  }
  agg.acceptance_rate = n_replicas == 0 ? 0.0 : acc / static_cast<double>(n_replicas);
  return {std::move(all), agg};
}

}  // namespace coulomb
