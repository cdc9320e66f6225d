#include "coulomb/drift.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace coulomb {

namespace {

// (x - y) / |x - y|^d, the free Coulomb force -grad Psi(x - y). Reuses the
// kernel gradient so the arithmetic matches log_density_gradient bit for bit.
Vec coulomb_force(std::size_t d, const Vec& x, const Vec& y) {
  Vec diff = x - y;
  if (diff.norm2() == 0.0)
    throw DomainError("coincident points in drift evaluation");
  return -1.0 * free_coulomb_gradient(d, diff);
}

// Label-order (radius, then lexicographic) traversal of a point list.
std::vector<std::size_t> label_order_of(const PointList& pts) {
  std::vector<std::size_t> perm(pts.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    double ra = pts[a].norm2(), rb = pts[b].norm2();
    if (ra != rb) return ra < rb;
    for (std::size_t k = 0; k < pts[a].dim; ++k)
      if (pts[a][k] != pts[b][k]) return pts[a][k] < pts[b][k];
    return false;
  });
  return perm;
}

void check_exterior(const Configuration& exterior, double R) {
  for (const Vec& y : exterior.positions)
    if (y.norm() <= R)
      throw DomainError("exterior point inside the cutoff radius");
}

}  // namespace

void DriftSpec::validate() const {
  if (cutoff_R <= 0) throw DomainError("cutoff radius must be positive");
  if (taylor_order_l0 < 0) throw DomainError("taylor order must be >= 0");
  if (taylor_order_l0 + 1 > kDerivativeOrderCap)
    throw CapExceeded("taylor order above derivative engine cap");
}

const Vec& CorrectionTable::at(const MultiIndex& i) const {
  auto it = coefficients.find(i);
  if (it == coefficients.end())
    throw DomainError("multi-index missing from correction table");
  return it->second;
}

Vec CorrectionTable::polynomial(const Vec& x) const {
  Vec acc = Vec::zero(dim);
  for (const auto& [idx, coef] : coefficients) acc += idx.monomial(x) * coef;
  return acc;
}

Vec finite_drift(const GibbsModel& model, std::size_t i, const PointList& positions) {
  return log_density_gradient_row(model, positions, i);
}

CorrectionTable taylor_correction_constants(const Configuration& exterior,
                                            double R, int l0) {
  check_exterior(exterior, R);
  std::size_t d = exterior.dim;
  CorrectionTable table;
  table.dim = d;
  table.l0 = l0;
  auto indices = multi_indices_up_to(d, l0);
  for (const MultiIndex& i : indices) table.coefficients[i] = Vec::zero(d);

  // Resolve the symbolic derivatives once, outside the point loop.
  std::vector<std::vector<const RadialExpr*>> exprs(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k)
    for (std::size_t c = 0; c < d; ++c)
      exprs[k].push_back(&force_partial_expr(d, c, indices[k]));

  auto order = label_order_of(exterior.positions);
  for (std::size_t j : order) {
    Vec minus_y = -exterior.positions[j];
    for (std::size_t k = 0; k < indices.size(); ++k) {
      double inv_fact = 1.0 / indices[k].factorial();
      Vec& acc = table.coefficients[indices[k]];
      for (std::size_t c = 0; c < d; ++c)
        acc[c] += inv_fact * exprs[k][c]->evaluate(minus_y);
    }
  }
  return table;
}

Vec taylor_residual(const Configuration& exterior, double R, int l0, const Vec& x) {
  if (x.norm() > R) throw DomainError("residual probe point outside the cutoff ball");
  check_exterior(exterior, R);
  std::size_t d = exterior.dim;
  auto indices = multi_indices_up_to(d, l0);
  std::vector<double> weight(indices.size());
  std::vector<std::vector<const RadialExpr*>> exprs(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    weight[k] = indices[k].monomial(x) / indices[k].factorial();
    for (std::size_t c = 0; c < d; ++c)
      exprs[k].push_back(&force_partial_expr(d, c, indices[k]));
  }

  Vec acc = Vec::zero(d);
  auto order = label_order_of(exterior.positions);
  for (std::size_t j : order) {
    const Vec& y = exterior.positions[j];
    Vec term = coulomb_force(d, x, y);
    Vec minus_y = -y;
    for (std::size_t k = 0; k < indices.size(); ++k) {
      for (std::size_t c = 0; c < d; ++c)
        term[c] -= weight[k] * exprs[k][c]->evaluate(minus_y);
    }
    acc += term;
  }
  return acc;
}

namespace {

Vec naive_truncation(const GibbsModel& model, const DriftSpec& spec, std::size_t i,
                     const PointList& positions) {
  const Vec& xi = positions[i];
  Vec acc = -1.0 * model.confinement.gradient(xi);
  auto order = label_order_of(positions);
  for (std::size_t j : order) {
    if (j == i) continue;
    if (positions[j].norm() > spec.cutoff_R) continue;
    acc += coulomb_force(model.dim, xi, positions[j]);
  }
  return model.beta * acc;
}

Vec translation_invariant(const GibbsModel& model, const DriftSpec& spec,
                          std::size_t i, const PointList& positions) {
  const Vec& xi = positions[i];
  Vec acc = Vec::zero(model.dim);
  auto order = label_order_of(positions);
  for (std::size_t j : order) {
    if (j == i) continue;
    if (dist(xi, positions[j]) > spec.cutoff_R) continue;
    acc += coulomb_force(model.dim, xi, positions[j]);
  }
  return model.beta * acc;
}

Vec corrected(const GibbsModel& model, const DriftSpec& spec, std::size_t i,
              const PointList& positions, const Configuration& exterior,
              const CorrectionTable& table) {
  const Vec& xi = positions[i];
  if (xi.norm() > spec.cutoff_R)
    throw DomainError("corrected drift requires the particle inside the cutoff ball");
  Vec naive = naive_truncation(model, spec, i, positions);
  Vec correction = table.polynomial(xi) +
                   taylor_residual(exterior, spec.cutoff_R, spec.taylor_order_l0, xi);
  return naive + model.beta * correction;
}

}  // namespace

Vec truncated_drift(const GibbsModel& model, const DriftSpec& spec, std::size_t i,
                    const PointList& positions) {
  spec.validate();
  switch (spec.mode) {
    case DriftMode::NaiveTruncation:
      return naive_truncation(model, spec, i, positions);
    case DriftMode::TranslationInvariant:
      return translation_invariant(model, spec, i, positions);
    case DriftMode::Corrected: {
      Configuration config{model.dim, positions, Domain::full_space()};
      auto [interior, exterior] = split_interior_exterior(config, spec.cutoff_R);
      (void)interior;
      auto table =
          taylor_correction_constants(exterior, spec.cutoff_R, spec.taylor_order_l0);
      return corrected(model, spec, i, positions, exterior, table);
    }
  }
  throw DomainError("unknown drift mode");
}

Vec truncated_drift(const GibbsModel& model, const DriftSpec& spec, std::size_t i,
                    const Configuration& config) {
  return truncated_drift(model, spec, i, config.positions);
}

Vec truncated_drift_cached(const GibbsModel& model, const DriftSpec& spec,
                           std::size_t i, const PointList& positions,
                           const Configuration& exterior,
                           const CorrectionTable& table) {
  spec.validate();
  if (spec.mode != DriftMode::Corrected)
    return truncated_drift(model, spec, i, positions);
  return corrected(model, spec, i, positions, exterior, table);
}

Vec elliptic_drift(const CoefficientField& coeff, const Vec& log_derivative,
                   const Vec& x) {
  Vec out = coeff.divergence(x);
  for (std::size_t k = 0; k < x.dim; ++k)
    out[k] = 0.5 * (out[k] + coeff.a_kk(x, k) * log_derivative[k]);
  return out;
}

}  // namespace coulomb
