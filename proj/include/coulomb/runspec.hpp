#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coulomb/dynamics.hpp"
#include "coulomb/model.hpp"
#include "coulomb/sampler.hpp"

namespace coulomb {

inline constexpr const char* kArtifactVersion = "coulombsim 0.1.0";

// One flat key = value experiment description. Field names mirror the
// config keys (section.key); see parse_config for the full key list.
struct RunSpec {
  // model
  std::size_t model_dim = 2;
  double model_beta = 1.0;
  std::size_t model_n = 16;
  std::string model_confinement = "gaussian";  // zero | gaussian | sphere
  double model_confinement_c = 1.0;
  std::string model_kernel = "free";  // free | torus | sphere
  double model_kernel_amp = 1.0;
  double model_kernel_len = 1.0;
  std::string model_domain = "full";  // full | ball | torus
  double model_domain_radius = 0.0;
  double model_domain_side = 0.0;

  // sampler
  double sampler_step = 1e-3;
  std::size_t sampler_burn_in = 1000;
  std::size_t sampler_samples = 100;
  std::size_t sampler_thin = 1;

  // drift
  std::string drift_mode = "corrected";  // naive | corrected | translation
  double drift_cutoff = 4.0;
  int drift_taylor_order = 2;

  // dyn
  double dyn_dt = 1e-3;
  double dyn_t_end = 1.0;
  std::string dyn_scheme = "free";  // free | reflected
  double dyn_reflect_radius = 0.0;
  std::size_t dyn_snapshot_every = 1;
  bool dyn_adaptive = true;
  std::string dyn_coeff = "identity";  // identity | diagonal
  double dyn_coeff_eps = 0.0;

  // diag
  std::vector<double> diag_radii;
  double diag_q = 2.0;
  std::size_t diag_replicas = 1;
  double diag_probe_radius = 2.0;

  std::uint64_t seed = 0;
  std::size_t threads = 0;  // 0 = available cores
  std::string out_dir = "out";
};

// Parse `key = value` lines with `#` comments; unknown keys are rejected,
// invalid values raise ParseError naming the key.
RunSpec parse_config(const std::string& text);

// Canonical key = value rendering; parse(serialize(s)) == s.
std::string serialize_runspec(const RunSpec& spec);

GibbsModel make_model(const RunSpec& spec);
ChainParams make_chain_params(const RunSpec& spec);
DynSpec make_dyn_spec(const RunSpec& spec);

// Execute one subcommand (sample, evolve, drift-table, hyperuniformity,
// l2-bound, converge, a4-check), writing files under spec.out_dir.
// Returns the process exit status.
int run_subcommand(const RunSpec& spec, const std::string& subcommand);

}  // namespace coulomb
