#include "coulomb/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "coulomb/parallel.hpp"

namespace coulomb {

namespace {

constexpr int kMaxHalvings = 20;
constexpr double kCollisionThreshold = 1e-12;
constexpr double kAdaptiveFraction = 0.1;

double min_pair_distance_involving(const PointList& pts,
                                   const std::vector<std::size_t>& active) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a : active) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (j == a) continue;
      double r = dist(pts[a], pts[j]);
      if (r < best) best = r;
    }
  }
  return best;
}

}  // namespace

void DynSpec::validate() const {
  if (dt <= 0) throw DomainError("dt must be positive");
  if (t_end <= 0) throw DomainError("t_end must be positive");
  if (dt >= t_end) throw DomainError("dt must be smaller than t_end");
  if (scheme == Scheme::ReflectedFrozen && reflect_radius <= 0)
    throw DomainError("ReflectedFrozen requires a positive radius");
  if (snapshot_every < 1) throw DomainError("snapshot_every must be >= 1");
  drift_spec.validate();
}

Vec reflect_into_ball(const Vec& x, double R) {
  if (R <= 0) throw DomainError("reflection radius must be positive");
  double r = x.norm();
  if (r <= R) return x;
  Vec y = (R / r) * x;
  // Rounding can leave the scaled point a ulp outside; nudge it back in so
  // the |y| <= R invariant holds exactly.
  while (y.norm() > R) y = std::nextafter(1.0, 0.0) * y;
  return y;
}

PointList em_step(const PointList& positions,
                  const std::function<Vec(const PointList&, std::size_t)>& drift,
                  const CoefficientField& coeff, double dt, const NoiseStream& noise,
                  std::uint64_t step_index, const EmStepOptions& opt) {
  if (dt <= 0) throw DomainError("dt must be positive");
  std::vector<std::size_t> all;
  const std::vector<std::size_t>* active = opt.active;
  if (active == nullptr) {
    all.resize(positions.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    active = &all;
  }

  PointList state = positions;
  double remaining = dt;
  std::uint64_t substep = 0;
  int halvings = 0;
  std::vector<Vec> b(active->size());

  while (remaining > 0) {
    parallel_for(active->size(), opt.threads, [&](std::size_t k) {
      b[k] = drift(state, (*active)[k]);
    });
    double max_b = 0.0;
    for (const Vec& v : b) {
      if (!v.all_finite()) throw NumericalError("non-finite drift in EM step");
      max_b = std::max(max_b, v.norm());
    }

    double h = remaining;
    if (opt.adaptive) {
      double min_pair = min_pair_distance_involving(state, *active);
      while (max_b * h > kAdaptiveFraction * min_pair) {
        if (++halvings > kMaxHalvings)
          throw StepCollapse("adaptive halving exhausted in EM step");
        h /= 2.0;
        if (opt.events != nullptr)
          opt.events->push_back({opt.time0 + (dt - remaining), 0,
                                 EventKind::DtHalving, h});
      }
    }

    double sqrt_h = std::sqrt(h);
    for (std::size_t k = 0; k < active->size(); ++k) {
      std::size_t i = (*active)[k];
      Vec x = state[i];
      Vec next = x + h * b[k];
      for (std::size_t c = 0; c < x.dim; ++c) {
        double xi = noise.gaussian(step_index, substep, i, c);
        next[c] += opt.noise_scale * coeff.sigma_kk(x, c) * sqrt_h * xi;
      }
      state[i] = next;
    }
    remaining -= h;
    ++substep;
    if (opt.post_substep) opt.post_substep(state, dt - remaining);
  }
  return state;
}

namespace {

struct EvolvePlan {
  PointList initial;  // label order
  LabelOrder labels;
  std::vector<std::size_t> moving;
  Configuration frozen_exterior;  // ReflectedFrozen + Corrected drift
  std::optional<CorrectionTable> table;
};

EvolvePlan make_plan(const GibbsModel& model, const DynSpec& spec,
                     const Configuration& initial) {
  initial.validate();
  EvolvePlan plan;
  plan.labels = label_sort(initial);
  plan.initial.reserve(initial.size());
  for (std::size_t idx : plan.labels.permutation)
    plan.initial.push_back(initial.positions[idx]);

  if (spec.scheme == Scheme::Free) {
    for (std::size_t i = 0; i < plan.initial.size(); ++i) plan.moving.push_back(i);
    return plan;
  }

  double R = spec.reflect_radius;
  for (std::size_t i = 0; i < plan.initial.size(); ++i)
    if (plan.initial[i].norm() <= R) plan.moving.push_back(i);

  if (spec.drift_spec.mode == DriftMode::Corrected) {
    if (spec.drift_spec.cutoff_R < R)
      throw DomainError(
          "corrected drift cutoff must not be smaller than the frozen radius");
    Configuration full{model.dim, plan.initial, Domain::full_space()};
    auto [interior, exterior] =
        split_interior_exterior(full, spec.drift_spec.cutoff_R);
    (void)interior;
    plan.frozen_exterior = std::move(exterior);
    plan.table = taylor_correction_constants(
        plan.frozen_exterior, spec.drift_spec.cutoff_R, spec.drift_spec.taylor_order_l0);
  }
  return plan;
}

}  // namespace

Trajectory evolve(const GibbsModel& model, const DynSpec& spec,
                  const Configuration& initial, std::size_t threads) {
  spec.validate();
  EvolvePlan plan = make_plan(model, spec, initial);
  const std::size_t n = plan.initial.size();
  const double R = spec.reflect_radius;

  Trajectory traj;
  traj.labels = plan.labels;
  traj.local_time.assign(n, 0.0);
  traj.n_moving = plan.moving.size();
  traj.times.push_back(0.0);
  traj.states.push_back(plan.initial);

  auto drift_fn = [&](const PointList& state, std::size_t i) -> Vec {
    Vec d;
    if (spec.scheme == Scheme::Free) {
      d = finite_drift(model, i, state);
    } else if (spec.drift_spec.mode == DriftMode::Corrected) {
      d = truncated_drift_cached(model, spec.drift_spec, i, state,
                                 plan.frozen_exterior, *plan.table);
    } else {
      d = truncated_drift(model, spec.drift_spec, i, state);
    }
    return elliptic_drift(spec.coeff_field, d, state[i]);
  };

  NoiseStream noise(spec.seed);
  PointList state = plan.initial;
  double t = 0.0;
  std::uint64_t step = 0;

  while (t < spec.t_end - 1e-15) {
    double dt = std::min(spec.dt, spec.t_end - t);
    double step_start = t;

    EmStepOptions opt;
    opt.adaptive = spec.adaptive;
    opt.noise_scale = spec.noise_scale;
    opt.threads = threads;
    opt.time0 = step_start;
    opt.active = &plan.moving;
    opt.events = &traj.events;
    opt.post_substep = [&](PointList& s, double elapsed) {
      double now = step_start + elapsed;
      if (spec.scheme == Scheme::ReflectedFrozen) {
        for (std::size_t i : plan.moving) {
          Vec projected = reflect_into_ball(s[i], R);
          double moved = dist(projected, s[i]);
          if (moved > 0) {
            traj.events.push_back({now, i, EventKind::Reflection, moved});
            traj.local_time[i] += moved;
            s[i] = projected;
          }
        }
      }
      double min_pair = min_pair_distance_involving(s, plan.moving);
      if (min_pair < kCollisionThreshold) {
        // identify one offending pair for the diagnostic record
        for (std::size_t a : plan.moving)
          for (std::size_t j = 0; j < s.size(); ++j)
            if (j != a && dist(s[a], s[j]) < kCollisionThreshold)
              throw CollisionDetected("pair collision during integration", now, a, j);
      }
      for (std::size_t i : plan.moving)
        if (!s[i].all_finite())
          throw NumericalError("non-finite position during integration");
    };

    state = em_step(state, drift_fn, spec.coeff_field, dt, noise, step, opt);
    t = std::min(spec.t_end, t + dt);
    ++step;
    if (step % spec.snapshot_every == 0 || t >= spec.t_end - 1e-15) {
      traj.times.push_back(t);
      traj.states.push_back(state);
    }
  }
  return traj;
}

std::pair<Trajectory, Trajectory> coupled_evolve(const GibbsModel& model,
                                                 const DynSpec& dyn_spec_a,
                                                 const DynSpec& dyn_spec_b,
                                                 const Configuration& initial,
                                                 std::size_t threads) {
  if (dyn_spec_a.dt != dyn_spec_b.dt || dyn_spec_a.t_end != dyn_spec_b.t_end)
    throw DomainError("coupled runs must share the dt grid");
  if (dyn_spec_a.seed != dyn_spec_b.seed)
    throw DomainError("coupled runs must share the seed");
  Trajectory a = evolve(model, dyn_spec_a, initial, threads);
  Trajectory b = evolve(model, dyn_spec_b, initial, threads);
  return {std::move(a), std::move(b)};
}

}  // namespace coulomb
