#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "coulomb/errors.hpp"
#include "coulomb/geometry.hpp"

namespace coulomb {

// Highest multi-index order the symbolic derivative engine accepts.
inline constexpr int kDerivativeOrderCap = 8;

// A multi-index i = (i1,...,id) of non-negative integers.
struct MultiIndex {
  std::size_t dim = 0;
  std::array<int, kMaxDim> e{};

  MultiIndex() = default;
  explicit MultiIndex(std::size_t d) : dim(d) {}
  MultiIndex(std::initializer_list<int> xs) : dim(xs.size()) {
    std::size_t k = 0;
    for (int v : xs) e[k++] = v;
  }

  int order() const {
    int s = 0;
    for (std::size_t k = 0; k < dim; ++k) s += e[k];
    return s;
  }
  // i! = i1! * ... * id!
  double factorial() const;
  // x^i = x1^{i1} * ... * xd^{id}
  double monomial(const Vec& x) const;

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
    if (a.dim != b.dim) return false;
    for (std::size_t k = 0; k < a.dim; ++k)
      if (a.e[k] != b.e[k]) return false;
    return true;
  }
  friend bool operator<(const MultiIndex& a, const MultiIndex& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    for (std::size_t k = 0; k < a.dim; ++k)
      if (a.e[k] != b.e[k]) return a.e[k] < b.e[k];
    return false;
  }
};

// All multi-indices of dimension d with |i| == k, in lexicographic order.
std::vector<MultiIndex> multi_indices_of_order(std::size_t d, int k);
// All multi-indices with |i| <= l0, ordered by (order, lexicographic).
std::vector<MultiIndex> multi_indices_up_to(std::size_t d, int l0);

// One term c * x^alpha * |x|^{-k}. The family is closed under partial
// differentiation, which is what makes exact force derivatives cheap.
struct RadialTerm {
  double coeff = 0;
  std::array<int, kMaxDim> mono{};
  int radial_power = 0;
};

// A finite sum of RadialTerms in a fixed dimension.
class RadialExpr {
 public:
  RadialExpr(std::size_t dim, std::vector<RadialTerm> terms)
      : dim_(dim), terms_(std::move(terms)) {}

  // Component `comp` (0-based) of the force -grad Psi = x / |x|^d.
  static RadialExpr force_component(std::size_t d, std::size_t comp);

  // d/dx_j, with like terms combined.
  RadialExpr differentiate(std::size_t j) const;

  double evaluate(const Vec& x) const;

  std::size_t dim() const { return dim_; }
  const std::vector<RadialTerm>& terms() const { return terms_; }

 private:
  std::size_t dim_;
  std::vector<RadialTerm> terms_;
};

// The |i|-th multi-index partial of component `comp` of -grad Psi,
// derived symbolically and cached per (d, comp, i). Thread-safe.
const RadialExpr& force_partial_expr(std::size_t d, std::size_t comp,
                                     const MultiIndex& i);

// Psi(x) = |x|^{-(d-2)} / (d-2) for d >= 3, -log|x| for d = 2.
double free_coulomb_potential(std::size_t d, const Vec& x);

// grad Psi(x) = -x / |x|^d.
Vec free_coulomb_gradient(std::size_t d, const Vec& x);

// Exact value of the partial derivative d^i [ x_{comp} / |x|^d ].
// `comp` is 1-based, matching the usual component numbering.
double kernel_partial(std::size_t d, std::size_t comp, const MultiIndex& i,
                      const Vec& x);

// Green's function of -(1/2pi) Laplace on the unit torus (-1/2, 1/2]^2,
// zero mean, evaluated by Ewald splitting to ~1e-12 absolute error.
// Psi_T(x) + log|x| stays bounded as x -> 0.
struct TorusGreenResult {
  double value;
  Vec gradient;
};
TorusGreenResult torus_green(const Vec& x);

// Inverse stereographic projection R^2 -> S^2 subset R^3 (south pole at 0).
Vec sphere_lift(const Vec& u);

// -log || lift(u) - lift(v) || (chordal distance on the sphere).
double sphere_pullback_kernel(const Vec& u, const Vec& v);

// Gradient of the above with respect to u:
//   -(u - v)/|u - v|^2 + u/(1 + |u|^2).
Vec sphere_pullback_gradient(const Vec& u, const Vec& v);

enum class KernelKind { FreeCoulomb, TorusGreen, SpherePullback };

// A symmetric pair interaction Psi(x, y), singular only on the diagonal.
struct PairKernel {
  KernelKind kind = KernelKind::FreeCoulomb;
  std::size_t dim = 2;
  // Neutralizing background constant (0 in free space, 1 on the unit torus).
  double background_density = 0.0;

  static PairKernel free_coulomb(std::size_t d) {
    return {KernelKind::FreeCoulomb, d, 0.0};
  }
  static PairKernel torus() { return {KernelKind::TorusGreen, 2, 1.0}; }
  static PairKernel sphere() { return {KernelKind::SpherePullback, 2, 0.0}; }

  double value(const Vec& x, const Vec& y) const;
  Vec gradient_x(const Vec& x, const Vec& y) const;
};

}  // namespace coulomb
