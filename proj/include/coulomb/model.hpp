#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "coulomb/errors.hpp"
#include "coulomb/geometry.hpp"
#include "coulomb/kernels.hpp"

namespace coulomb {

enum class DomainKind { FullSpace, Ball, UnitTorusScaled };

struct Domain {
  DomainKind kind = DomainKind::FullSpace;
  double radius = 0.0;  // Ball
  double side = 0.0;    // UnitTorusScaled: positions live in (-side/2, side/2]^d

  static Domain full_space() { return {DomainKind::FullSpace, 0, 0}; }
  static Domain ball(double r) { return {DomainKind::Ball, r, 0}; }
  static Domain torus(double s) { return {DomainKind::UnitTorusScaled, 0, s}; }
};

// A finite point set with domain metadata; the finite-N stand-in for a
// configuration s = sum_i delta_{s^i}.
struct Configuration {
  std::size_t dim = 2;
  PointList positions;
  Domain domain;

  std::size_t size() const { return positions.size(); }
  // Throws DomainError on duplicate points, non-finite coordinates, or
  // points outside a Ball domain.
  void validate() const;
};

// Sorting permutation: radii non-decreasing, ties broken lexicographically
// on coordinates.
struct LabelOrder {
  std::vector<std::size_t> permutation;
};

LabelOrder label_sort(const Configuration& config);

// (interior, exterior) split at radius R; |x| == R goes to the interior.
std::pair<Configuration, Configuration> split_interior_exterior(
    const Configuration& config, double R);

enum class ConfinementKind { Zero, Gaussian, SpherePullback };

// Phi with value, gradient and Laplacian in closed form.
// Gaussian: Phi = c |x|^2. SpherePullback: Phi = (1 + |x|^2)^d / 2^d,
// the reciprocal Jacobian of the inverse stereographic projection.
struct ConfinementField {
  ConfinementKind kind = ConfinementKind::Zero;
  double c = 1.0;  // Gaussian coefficient

  static ConfinementField zero() { return {ConfinementKind::Zero, 0}; }
  static ConfinementField gaussian(double c) {
    if (c <= 0) throw DomainError("gaussian confinement requires c > 0");
    return {ConfinementKind::Gaussian, c};
  }
  static ConfinementField sphere() { return {ConfinementKind::SpherePullback, 0}; }

  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  double laplacian(const Vec& x) const;
};

enum class CoefficientKind { Identity, DiagonalPerturbation };

// Diffusion coefficient a(x) with sigma sigma^T = a and the divergence
// vector (sum_k d a_{kl} / d x_k)_l. DiagonalPerturbation:
// a_kk = 1 + eps sin(x_k), off-diagonals zero, |eps| < 1/2.
struct CoefficientField {
  CoefficientKind kind = CoefficientKind::Identity;
  double eps = 0.0;

  static CoefficientField identity() { return {CoefficientKind::Identity, 0}; }
  static CoefficientField diagonal(double eps);

  // Diagonal entries only (both supported fields are diagonal).
  double a_kk(const Vec& x, std::size_t k) const;
  double sigma_kk(const Vec& x, std::size_t k) const;
  Vec divergence(const Vec& x) const;
  // Ellipticity constant c with c^-1 |xi|^2 <= xi a xi <= c |xi|^2.
  double ellipticity() const { return (1.0 + std::abs(eps)) / (1.0 - std::abs(eps)); }
};

// The N-particle Gibbs model: density proportional to
//   exp(-beta { sum_i Phi(x^i) + sum_{j<k} Psi(x^j, x^k) }).
struct GibbsModel {
  std::size_t dim = 2;
  double beta = 1.0;
  std::size_t n_particles = 1;
  ConfinementField confinement;
  PairKernel kernel;
  double kernel_amplitude = 1.0;
  double kernel_length = 1.0;
  Domain domain;

  // Scaled pair interaction alpha * Psi_base(x / lambda, y / lambda).
  double pair_value(const Vec& x, const Vec& y) const;
  Vec pair_gradient_x(const Vec& x, const Vec& y) const;

  void validate() const;
};

inline constexpr double kLogDensityNegInf = -std::numeric_limits<double>::infinity();

// Unnormalized log density of (:positions) under the model; -inf on
// coincident points. Summation runs over label-sorted index pairs, so the
// result is exactly permutation invariant.
double log_density(const GibbsModel& model, const PointList& positions);

// Row i: -beta ( grad Phi(x^i) + sum_{j != i} grad_x Psi(x^i, x^j) ).
// Per-row inner sums run in label order; rows may be computed in parallel.
std::vector<Vec> log_density_gradient(const GibbsModel& model,
                                      const PointList& positions,
                                      std::size_t threads = 1);

// Single row of log_density_gradient; the drift module reuses this code path.
Vec log_density_gradient_row(const GibbsModel& model, const PointList& positions,
                             std::size_t i);

}  // namespace coulomb
