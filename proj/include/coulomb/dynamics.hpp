#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "coulomb/drift.hpp"
#include "coulomb/model.hpp"
#include "coulomb/rng.hpp"

namespace coulomb {

enum class Scheme { Free, ReflectedFrozen };

struct DynSpec {
  double dt = 1e-3;
  double t_end = 1.0;
  Scheme scheme = Scheme::Free;
  double reflect_radius = 0.0;  // R for ReflectedFrozen
  DriftSpec drift_spec;
  CoefficientField coeff_field;
  std::uint64_t seed = 0;
  bool adaptive = true;
  std::size_t snapshot_every = 1;
  // Extra knob for deterministic (sigma -> 0) runs and tests.
  double noise_scale = 1.0;

  void validate() const;
};

enum class EventKind { Reflection, DtHalving };

struct Event {
  double time;
  std::size_t particle;
  EventKind kind;
  double magnitude;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<PointList> states;  // particle order = label order at t = 0
  LabelOrder labels;              // permutation applied to the input configuration
  std::vector<Event> events;
  // Cumulative radial-projection displacement per particle, the numeric
  // stand-in for the Skorokhod local time on the boundary sphere.
  std::vector<double> local_time;
  std::size_t n_moving = 0;  // ReflectedFrozen: labels [0, n_moving) move
};

// x if |x| <= R, else the radial projection x R / |x|.
Vec reflect_into_ball(const Vec& x, double R);

// The per-(step, substep, label, coordinate) gaussian supply. A pure
// function of its arguments, so coupled runs and replays agree exactly.
class NoiseStream {
 public:
  explicit NoiseStream(std::uint64_t seed) : seed_(seed) {}
  double gaussian(std::uint64_t step, std::uint64_t substep, std::uint64_t label,
                  std::uint64_t coord) const {
    return counter_gaussian(seed_, step, substep, label, coord);
  }

 private:
  std::uint64_t seed_;
};

struct EmStepOptions {
  bool adaptive = false;
  double noise_scale = 1.0;
  std::size_t threads = 1;
  double time0 = 0.0;
  // Indices allowed to move; empty means all.
  const std::vector<std::size_t>* active = nullptr;
  std::vector<Event>* events = nullptr;
  // Applied after every substep (reflection, collision checks, ...);
  // receives the state and the in-step time just reached.
  std::function<void(PointList&, double)> post_substep;
};

// One synchronous Euler-Maruyama step over [0, dt]:
//   x_i' = x_i + b_i(state) h + sigma(x_i) sqrt(h) xi_i
// with adaptive halving of the substep h (at most 20 times per step)
// whenever max_i |b_i| h > 0.1 * (current minimum pair distance).
PointList em_step(const PointList& positions,
                  const std::function<Vec(const PointList&, std::size_t)>& drift,
                  const CoefficientField& coeff, double dt, const NoiseStream& noise,
                  std::uint64_t step_index, const EmStepOptions& opt = {});

// Integrate the model dynamics from `initial`. Free: every particle moves
// under the elliptic drift b = (1/2)(div a + a d^N) with the full
// finite-N log derivative. ReflectedFrozen: particles with initial
// |x| <= R diffuse with radial-projection reflection and the drift of
// dyn_spec.drift_spec evaluated against the frozen exterior; the rest
// never move.
Trajectory evolve(const GibbsModel& model, const DynSpec& dyn_spec,
                  const Configuration& initial, std::size_t threads = 1);

// Two runs consuming the identical gaussian stream; specs must share dt,
// t_end and seed so that parameter differences are the only divergence
// source. Adaptive halving is decided per run, so a halving triggered in
// only one run shifts its substep indices and decouples the noise; disable
// `adaptive` when an exact pathwise coupling is required.
std::pair<Trajectory, Trajectory> coupled_evolve(const GibbsModel& model,
                                                 const DynSpec& dyn_spec_a,
                                                 const DynSpec& dyn_spec_b,
                                                 const Configuration& initial,
                                                 std::size_t threads = 1);

}  // namespace coulomb
