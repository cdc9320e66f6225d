#include "coulomb/kernels.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

namespace coulomb {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_dim(std::size_t d) {
  if (d < 2) throw DomainError("dimension must be >= 2");
  if (d > kMaxDim) throw DomainError("dimension exceeds compiled maximum");
}

void check_nonzero(const Vec& x) {
  if (x.norm2() == 0.0) throw DomainError("kernel evaluated at the origin");
}

}  // namespace

double MultiIndex::factorial() const {
  double f = 1.0;
  for (std::size_t k = 0; k < dim; ++k)
    for (int j = 2; j <= e[k]; ++j) f *= j;
  return f;
}

double MultiIndex::monomial(const Vec& x) const {
  double p = 1.0;
  for (std::size_t k = 0; k < dim; ++k)
    for (int j = 0; j < e[k]; ++j) p *= x[k];
  return p;
}

std::vector<MultiIndex> multi_indices_of_order(std::size_t d, int k) {
  std::vector<MultiIndex> out;
  MultiIndex cur(d);
  // Depth-first distribution of k among d slots, lexicographic.
  auto rec = [&](auto&& self, std::size_t slot, int rem) -> void {
    if (slot + 1 == d) {
      cur.e[slot] = rem;
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= rem; ++v) {
      cur.e[slot] = v;
      self(self, slot + 1, rem - v);
    }
  };
  rec(rec, 0, k);
  return out;
}

std::vector<MultiIndex> multi_indices_up_to(std::size_t d, int l0) {
  std::vector<MultiIndex> out;
  for (int k = 0; k <= l0; ++k) {
    auto level = multi_indices_of_order(d, k);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

RadialExpr RadialExpr::force_component(std::size_t d, std::size_t comp) {
  RadialTerm t;
  t.coeff = 1.0;
  t.mono[comp] = 1;
  t.radial_power = static_cast<int>(d);
  return RadialExpr(d, {t});
}

RadialExpr RadialExpr::differentiate(std::size_t j) const {
  // d/dx_j (c x^a |x|^{-k}) = c a_j x^{a - e_j} |x|^{-k}
  //                           - c k x^{a + e_j} |x|^{-k-2}
  std::map<std::pair<std::array<int, kMaxDim>, int>, double> acc;
  for (const RadialTerm& t : terms_) {
    if (t.mono[j] > 0) {
      auto m = t.mono;
      m[j] -= 1;
      acc[{m, t.radial_power}] += t.coeff * t.mono[j];
    }
    if (t.radial_power != 0) {
      auto m = t.mono;
      m[j] += 1;
      acc[{m, t.radial_power + 2}] -= t.coeff * t.radial_power;
    }
  }
  std::vector<RadialTerm> out;
  out.reserve(acc.size());
  for (const auto& [key, c] : acc) {
    if (c == 0.0) continue;
    out.push_back({c, key.first, key.second});
  }
  return RadialExpr(dim_, std::move(out));
}

double RadialExpr::evaluate(const Vec& x) const {
  check_nonzero(x);
  double inv_r = 1.0 / x.norm();
  // Radial powers stay small (<= d + 2 |i|); a running power table avoids
  // pow() in the hot loop.
  int max_power = 0;
  for (const RadialTerm& t : terms_)
    if (t.radial_power > max_power) max_power = t.radial_power;
  std::array<double, 2 * kDerivativeOrderCap + kMaxDim + 1> pw;
  pw[0] = 1.0;
  for (int k = 1; k <= max_power; ++k) pw[k] = pw[k - 1] * inv_r;
  double s = 0.0;
  for (const RadialTerm& t : terms_) {
    double v = t.coeff;
    for (std::size_t k = 0; k < dim_; ++k)
      for (int j = 0; j < t.mono[k]; ++j) v *= x[k];
    s += v * pw[t.radial_power];
  }
  return s;
}

const RadialExpr& force_partial_expr(std::size_t d, std::size_t comp,
                                     const MultiIndex& i) {
  if (i.order() > kDerivativeOrderCap)
    throw CapExceeded("multi-index order above derivative engine cap");
  static std::mutex mtx;
  static std::map<std::tuple<std::size_t, std::size_t, MultiIndex>, RadialExpr> cache;
  std::scoped_lock lock(mtx);
  auto key = std::make_tuple(d, comp, i);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  RadialExpr expr = RadialExpr::force_component(d, comp);
  for (std::size_t k = 0; k < d; ++k)
    for (int j = 0; j < i.e[k]; ++j) expr = expr.differentiate(k);
  return cache.emplace(key, std::move(expr)).first->second;
}

double free_coulomb_potential(std::size_t d, const Vec& x) {
  check_dim(d);
  check_nonzero(x);
  double r2 = x.norm2();
  if (d == 2) return -0.5 * std::log(r2);
  double p = static_cast<double>(d) - 2.0;
  if (d == 3) return 1.0 / std::sqrt(r2);
  if (d == 4) return 0.5 / r2;
  return std::pow(r2, -0.5 * p) / p;
}

Vec free_coulomb_gradient(std::size_t d, const Vec& x) {
  check_dim(d);
  check_nonzero(x);
  double r2 = x.norm2();
  double scale;
  switch (d) {
    case 2: scale = -1.0 / r2; break;
    case 3: scale = -1.0 / (r2 * std::sqrt(r2)); break;
    case 4: scale = -1.0 / (r2 * r2); break;
    default: scale = -std::pow(r2, -0.5 * static_cast<double>(d));
  }
  return scale * x;
}

double kernel_partial(std::size_t d, std::size_t comp, const MultiIndex& i,
                      const Vec& x) {
  check_dim(d);
  if (comp < 1 || comp > d) throw DomainError("component out of range");
  if (i.dim != d) throw DomainError("multi-index dimension mismatch");
  return force_partial_expr(d, comp - 1, i).evaluate(x);
}

// --- Torus Green's function -------------------------------------------------
//
// Psi_T(x) = sum_{n != 0} e^{2 pi i n.x} / (2 pi |n|^2), i.e. the solution of
// -(1/2pi) Laplace Psi_T = delta_0 - 1 with zero torus mean. Ewald split at
// parameter t0:
//   Psi_T(x) = (1/2) sum_m E1(|x+m|^2 / (4 t0)) - 2 pi t0
//              + sum_{n != 0} cos(2 pi n.x) e^{-4 pi^2 |n|^2 t0} / (2 pi |n|^2).
// The split is biased toward Fourier space (t0 = 1/(16 pi)), which keeps the
// costly E1 evaluations down to a handful of real-space cells while the
// Fourier modes run on cheap recurrences. Cutoffs give < 1e-12 truncation.

namespace {

constexpr int kEwaldRealCut = 2;     // |m|_inf cutoff, real-space sum
constexpr int kEwaldFourierCut = 5;  // |n|_inf cutoff, Fourier sum
constexpr double kEwaldT0 = 1.0 / (16.0 * std::numbers::pi);

Vec wrap_to_torus(const Vec& x) {
  Vec w(x.dim);
  for (std::size_t k = 0; k < x.dim; ++k)
    w[k] = x[k] - std::round(x[k]);
  return w;
}

}  // namespace

TorusGreenResult torus_green(const Vec& x) {
  if (x.dim != 2) throw DomainError("torus Green's function requires d = 2");
  Vec w = wrap_to_torus(x);
  if (w.norm() < 1e-14) throw DomainError("torus Green's function on a lattice point");

  // Evaluate at a canonical sign representative so evenness holds exactly.
  double sign = 1.0;
  if (w[0] < 0.0 || (w[0] == 0.0 && w[1] < 0.0)) {
    sign = -1.0;
    w = wrap_to_torus(-w);
  }

  double value = -kTwoPi * kEwaldT0;  // the subtracted-background term
  Vec grad = Vec::zero(2);

  for (int m1 = -kEwaldRealCut; m1 <= kEwaldRealCut; ++m1) {
    for (int m2 = -kEwaldRealCut; m2 <= kEwaldRealCut; ++m2) {
      Vec y{w[0] + m1, w[1] + m2};
      double r2 = y.norm2();
      double u = r2 / (4.0 * kEwaldT0);  // = 4 pi r^2
      if (u > 27.0) continue;  // E1(27) < 1e-13
      value += 0.5 * (-std::expint(-u));  // E1(u)
      double f = -std::exp(-u) / r2;
      grad += f * y;
    }
  }

  // Damping factors e^{-4 pi^2 k^2 t0} / (2 pi k^2) for the retained modes;
  // modes with k^2 > 34 fall below the 1e-12 truncation target.
  static const std::vector<std::array<double, 3>> fourier_modes = [] {
    std::vector<std::array<double, 3>> modes;
    for (int n1 = -kEwaldFourierCut; n1 <= kEwaldFourierCut; ++n1)
      for (int n2 = -kEwaldFourierCut; n2 <= kEwaldFourierCut; ++n2) {
        double k2 = static_cast<double>(n1) * n1 + static_cast<double>(n2) * n2;
        if (k2 == 0.0 || k2 > 34.0) continue;
        double damp =
            std::exp(-4.0 * std::numbers::pi * std::numbers::pi * k2 * kEwaldT0);
        double amp = damp / (kTwoPi * k2);
        modes.push_back({static_cast<double>(n1), static_cast<double>(n2), amp});
      }
    return modes;
  }();

  // Per-axis cos/sin of 2 pi n w_k via the Chebyshev recurrence, then angle
  // addition per mode; avoids a trig call per lattice mode.
  double ca[2][kEwaldFourierCut + 1], sa[2][kEwaldFourierCut + 1];
  for (std::size_t k = 0; k < 2; ++k) {
    double th = kTwoPi * w[k];
    double c1 = std::cos(th), s1 = std::sin(th);
    ca[k][0] = 1.0;
    sa[k][0] = 0.0;
    ca[k][1] = c1;
    sa[k][1] = s1;
    for (int n = 2; n <= kEwaldFourierCut; ++n) {
      ca[k][n] = 2.0 * c1 * ca[k][n - 1] - ca[k][n - 2];
      sa[k][n] = 2.0 * c1 * sa[k][n - 1] - sa[k][n - 2];
    }
  }
  for (const auto& [fn1, fn2, amp] : fourier_modes) {
    int n1 = static_cast<int>(fn1), n2 = static_cast<int>(fn2);
    int a1 = n1 < 0 ? -n1 : n1, a2 = n2 < 0 ? -n2 : n2;
    double c1 = ca[0][a1], s1 = n1 < 0 ? -sa[0][a1] : sa[0][a1];
    double c2 = ca[1][a2], s2 = n2 < 0 ? -sa[1][a2] : sa[1][a2];
    double cph = c1 * c2 - s1 * s2;
    double sph = s1 * c2 + c1 * s2;
    value += cph * amp;
    double g = -sph * amp * kTwoPi;
    grad[0] += g * n1;
    grad[1] += g * n2;
  }
  return {value, sign * grad};
}

// --- Sphere pullback --------------------------------------------------------

Vec sphere_lift(const Vec& u) {
  if (u.dim != 2) throw DomainError("sphere lift requires d = 2");
  double q = 1.0 + u.norm2();
  Vec out(3);
  out[0] = 2.0 * u[0] / q;
  out[1] = 2.0 * u[1] / q;
  out[2] = (u.norm2() - 1.0) / q;
  return out;
}

double sphere_pullback_kernel(const Vec& u, const Vec& v) {
  if (u.dim != 2 || v.dim != 2) throw DomainError("sphere kernel requires d = 2");
  if (u == v) throw DomainError("sphere kernel on the diagonal");
  // chordal^2 = 4 |u - v|^2 / ((1 + |u|^2)(1 + |v|^2))
  double d2 = (u - v).norm2();
  double c2 = 4.0 * d2 / ((1.0 + u.norm2()) * (1.0 + v.norm2()));
  return -0.5 * std::log(c2);
}

Vec sphere_pullback_gradient(const Vec& u, const Vec& v) {
  if (u == v) throw DomainError("sphere kernel on the diagonal");
  Vec diff = u - v;
  return -1.0 / diff.norm2() * diff + 1.0 / (1.0 + u.norm2()) * u;
}

// --- PairKernel -------------------------------------------------------------

double PairKernel::value(const Vec& x, const Vec& y) const {
  switch (kind) {
    case KernelKind::FreeCoulomb:
      return free_coulomb_potential(dim, x - y);
    case KernelKind::TorusGreen:
      return torus_green(x - y).value;
    case KernelKind::SpherePullback:
      return sphere_pullback_kernel(x, y);
  }
  throw DomainError("unknown kernel kind");
}

Vec PairKernel::gradient_x(const Vec& x, const Vec& y) const {
  switch (kind) {
    case KernelKind::FreeCoulomb:
      return free_coulomb_gradient(dim, x - y);
    case KernelKind::TorusGreen:
      return torus_green(x - y).gradient;
    case KernelKind::SpherePullback:
      return sphere_pullback_gradient(x, y);
  }
  throw DomainError("unknown kernel kind");
}

}  // namespace coulomb
