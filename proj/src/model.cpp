#include "coulomb/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "coulomb/parallel.hpp"

namespace coulomb {

namespace {

bool lex_less(const Vec& a, const Vec& b) {
  for (std::size_t k = 0; k < a.dim; ++k) {
    if (a[k] != b[k]) return a[k] < b[k];
  }
  return false;
}

bool radial_less(const Vec& a, const Vec& b) {
  double ra = a.norm2();
  double rb = b.norm2();
  if (ra != rb) return ra < rb;
  return lex_less(a, b);
}

std::vector<std::size_t> sorted_order(const PointList& positions) {
  std::vector<std::size_t> perm(positions.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t i, std::size_t j) {
    return radial_less(positions[i], positions[j]);
  });
  return perm;
}

}  // namespace

void Configuration::validate() const {
  for (const Vec& p : positions) {
    if (p.dim != dim) throw DomainError("position dimension mismatch");
    if (!p.all_finite()) throw DomainError("non-finite coordinate");
    if (domain.kind == DomainKind::Ball && p.norm() > domain.radius * (1 + 1e-12))
      throw DomainError("point outside ball domain");
  }
  for (std::size_t i = 0; i < positions.size(); ++i)
    for (std::size_t j = i + 1; j < positions.size(); ++j)
      if (positions[i] == positions[j])
        throw DomainError("coincident points in configuration");
}

LabelOrder label_sort(const Configuration& config) {
  return {sorted_order(config.positions)};
}

std::pair<Configuration, Configuration> split_interior_exterior(
    const Configuration& config, double R) {
  if (R <= 0) throw DomainError("split radius must be positive");
  Configuration interior{config.dim, {}, config.domain};
  Configuration exterior{config.dim, {}, config.domain};
  for (const Vec& p : config.positions) {
    (p.norm() <= R ? interior : exterior).positions.push_back(p);
  }
  return {std::move(interior), std::move(exterior)};
}

double ConfinementField::value(const Vec& x) const {
  switch (kind) {
    case ConfinementKind::Zero:
      return 0.0;
    case ConfinementKind::Gaussian:
      return c * x.norm2();
    case ConfinementKind::SpherePullback: {
      double q = 1.0 + x.norm2();
      return std::pow(q, static_cast<double>(x.dim)) /
             std::pow(2.0, static_cast<double>(x.dim));
    }
  }
  return 0.0;
}

Vec ConfinementField::gradient(const Vec& x) const {
  switch (kind) {
    case ConfinementKind::Zero:
      return Vec::zero(x.dim);
    case ConfinementKind::Gaussian:
      return (2.0 * c) * x;
    case ConfinementKind::SpherePullback: {
      double d = static_cast<double>(x.dim);
      double q = 1.0 + x.norm2();
      double s = 2.0 * d * std::pow(q, d - 1.0) / std::pow(2.0, d);
      return s * x;
    }
  }
  return Vec::zero(x.dim);
}

double ConfinementField::laplacian(const Vec& x) const {
  switch (kind) {
    case ConfinementKind::Zero:
      return 0.0;
    case ConfinementKind::Gaussian:
      return 2.0 * c * static_cast<double>(x.dim);
    case ConfinementKind::SpherePullback: {
      double d = static_cast<double>(x.dim);
      double q = 1.0 + x.norm2();
      double r2 = x.norm2();
      return (2.0 * d / std::pow(2.0, d)) *
             (d * std::pow(q, d - 1.0) + 2.0 * (d - 1.0) * std::pow(q, d - 2.0) * r2);
    }
  }
  return 0.0;
}

CoefficientField CoefficientField::diagonal(double eps) {
  if (std::abs(eps) >= 0.5)
    throw DomainError("diagonal perturbation requires |eps| < 1/2");
  return {CoefficientKind::DiagonalPerturbation, eps};
}

double CoefficientField::a_kk(const Vec& x, std::size_t k) const {
  if (kind == CoefficientKind::Identity) return 1.0;
  return 1.0 + eps * std::sin(x[k]);
}

double CoefficientField::sigma_kk(const Vec& x, std::size_t k) const {
  return std::sqrt(a_kk(x, k));
}

Vec CoefficientField::divergence(const Vec& x) const {
  Vec out = Vec::zero(x.dim);
  if (kind == CoefficientKind::DiagonalPerturbation) {
    for (std::size_t k = 0; k < x.dim; ++k) out[k] = eps * std::cos(x[k]);
  }
  return out;
}

double GibbsModel::pair_value(const Vec& x, const Vec& y) const {
  if (kernel_length == 1.0) return kernel_amplitude * kernel.value(x, y);
  double inv = 1.0 / kernel_length;
  return kernel_amplitude * kernel.value(inv * x, inv * y);
}

Vec GibbsModel::pair_gradient_x(const Vec& x, const Vec& y) const {
  if (kernel_length == 1.0) return kernel_amplitude * kernel.gradient_x(x, y);
  double inv = 1.0 / kernel_length;
  return (kernel_amplitude * inv) * kernel.gradient_x(inv * x, inv * y);
}

void GibbsModel::validate() const {
  if (dim < 2) throw DomainError("model dimension must be >= 2");
  if (beta <= 0) throw DomainError("beta must be positive");
  if (n_particles < 1) throw DomainError("n_particles must be >= 1");
  if (kernel_length <= 0) throw DomainError("kernel length must be positive");
}

double log_density(const GibbsModel& model, const PointList& positions) {
  auto perm = sorted_order(positions);
  double phi_sum = 0.0;
  for (std::size_t i : perm) phi_sum += model.confinement.value(positions[i]);
  double psi_sum = 0.0;
  for (std::size_t a = 0; a < perm.size(); ++a) {
    for (std::size_t b = a + 1; b < perm.size(); ++b) {
      const Vec& x = positions[perm[a]];
      const Vec& y = positions[perm[b]];
      if (x == y) return kLogDensityNegInf;
      psi_sum += model.pair_value(x, y);
    }
  }
  return -model.beta * (phi_sum + psi_sum);
}

namespace {

Vec gradient_row_ordered(const GibbsModel& model, const PointList& positions,
                         const std::vector<std::size_t>& perm, std::size_t i) {
  const Vec& xi = positions[i];
  Vec acc = model.confinement.gradient(xi);
  for (std::size_t j : perm) {
    if (j == i) continue;
    if (positions[j] == xi)
      throw DomainError("coincident points in gradient evaluation");
    acc += model.pair_gradient_x(xi, positions[j]);
  }
  return -model.beta * acc;
}

}  // namespace

Vec log_density_gradient_row(const GibbsModel& model, const PointList& positions,
                             std::size_t i) {
  auto perm = sorted_order(positions);
  return gradient_row_ordered(model, positions, perm, i);
}

std::vector<Vec> log_density_gradient(const GibbsModel& model,
                                      const PointList& positions,
                                      std::size_t threads) {
  auto perm = sorted_order(positions);
  std::vector<Vec> rows(positions.size());
  parallel_for(positions.size(), threads, [&](std::size_t i) {
    rows[i] = gradient_row_ordered(model, positions, perm, i);
  });
  return rows;
}

}  // namespace coulomb
