#pragma once

#include <cstdint>
#include <vector>

#include "coulomb/model.hpp"
#include "coulomb/rng.hpp"

namespace coulomb {

struct ChainParams {
  double step_size = 1e-2;
  std::size_t burn_in = 1000;
  std::size_t n_samples = 100;
  std::size_t thinning = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

struct ChainStats {
  double acceptance_rate = 0.0;
  std::size_t n_steps = 0;
  // Set when the acceptance rate leaves [0.05, 0.95].
  bool convergence_warning = false;
};

struct MalaResult {
  PointList positions;
  bool accepted = false;
};

// One Metropolis-adjusted Langevin step targeting the model's Gibbs
// density. Ball domains reject proposals that leave the ball; torus
// domains wrap proposals periodically.
MalaResult mala_step(const GibbsModel& model, const PointList& positions,
                     double step_size, CounterRng& rng, std::size_t threads = 1);

// Run one chain: burn-in, then n_samples states with the given thinning.
// Deterministic in (model, params); the initial state is a uniform
// placement with minimum-separation rejection.
std::pair<std::vector<Configuration>, ChainStats> sample_gibbs(
    const GibbsModel& model, const ChainParams& params, std::size_t threads = 1);

// Independent replicas, each on its own counter stream derived from
// (seed, replica-id); sample lists are concatenated in replica order, so
// the output is independent of the thread count.
std::pair<std::vector<Configuration>, ChainStats> sample_gibbs_replicas(
    const GibbsModel& model, const ChainParams& params, std::size_t n_replicas,
    std::size_t threads = 1);

// Uniform placement inside the model's natural droplet (or its torus /
// ball domain) with pairwise minimum separation; used as the chain start.
Configuration initial_configuration(const GibbsModel& model, CounterRng& rng);

}  // namespace coulomb
