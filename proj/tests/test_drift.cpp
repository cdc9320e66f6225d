#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "coulomb/drift.hpp"
#include "coulomb/rng.hpp"

using namespace coulomb;

namespace {

GibbsModel gaussian_model(std::size_t d, double beta, std::size_t n, double c) {
  GibbsModel m;
  m.dim = d;
  m.beta = beta;
  m.n_particles = n;
  m.confinement = ConfinementField::gaussian(c);
  m.kernel = PairKernel::free_coulomb(d);
  return m;
}

Configuration cloud(CounterRng& rng, std::size_t d, std::size_t n, double scale) {
  Configuration c;
  c.dim = d;
  for (std::size_t i = 0; i < n; ++i) {
    Vec x(d);
    for (std::size_t k = 0; k < d; ++k) x[k] = scale * (2.0 * rng.uniform() - 1.0);
    c.positions.push_back(x);
  }
  return c;
}

}  // namespace

TEST_CASE("drift spec validation") {
  DriftSpec s;
  s.validate();
  s.cutoff_R = 0.0;
  CHECK_THROWS_AS(s.validate(), DomainError);
  s.cutoff_R = 4.0;
  s.taylor_order_l0 = kDerivativeOrderCap + 1;
  CHECK_THROWS_AS(s.validate(), CapExceeded);
}

TEST_CASE("finite drift closed-form spot values") {
  GibbsModel m;
  m.dim = 2;
  m.beta = 2.0;
  m.n_particles = 2;
  m.confinement = ConfinementField::zero();
  m.kernel = PairKernel::free_coulomb(2);
  Vec b = finite_drift(m, 0, {Vec{1, 0}, Vec{0, 0}});
  CHECK(b[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(b[1] == doctest::Approx(0.0));

  GibbsModel g = gaussian_model(2, 2.0, 1, 1.0);
  Vec single = finite_drift(g, 0, {Vec{0.5, -0.25}});
  CHECK(single[0] == doctest::Approx(-2.0 * 2.0 * 0.5).epsilon(1e-14));
  CHECK(single[1] == doctest::Approx(-2.0 * 2.0 * -0.25).epsilon(1e-14));
}

TEST_CASE("finite drift equals the gradient row bit for bit") {
  CounterRng rng(41, 0);
  GibbsModel m = gaussian_model(2, 1.4, 8, 1.0);
  Configuration c = cloud(rng, 2, 8, 2.0);
  auto rows = log_density_gradient(m, c.positions);
  for (std::size_t i = 0; i < 8; ++i) {
    Vec b = finite_drift(m, i, c.positions);
    CHECK(b[0] == rows[i][0]);
    CHECK(b[1] == rows[i][1]);
  }
}

TEST_CASE("correction constants closed forms") {
  Configuration empty;
  empty.dim = 2;
  CorrectionTable t0 = taylor_correction_constants(empty, 2.0, 2);
  for (const auto& [idx, v] : t0.coefficients) {
    CHECK(v[0] == 0.0);
    CHECK(v[1] == 0.0);
  }
  CHECK(t0.coefficients.size() == 6);

  // Antipodal pair: order-0 entry cancels by oddness of the force.
  Configuration pair;
  pair.dim = 2;
  pair.positions = {Vec{3, 1}, Vec{-3, -1}};
  CorrectionTable tp = taylor_correction_constants(pair, 2.0, 1);
  const Vec& c0 = tp.at(MultiIndex{0, 0});
  CHECK(c0[0] == doctest::Approx(0.0));
  CHECK(c0[1] == doctest::Approx(0.0));

  Configuration one;
  one.dim = 2;
  one.positions = {Vec{3, 0}};
  CorrectionTable t1 = taylor_correction_constants(one, 2.0, 0);
  const Vec& c = t1.at(MultiIndex{0, 0});
  CHECK(c[0] == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
  CHECK(c[1] == doctest::Approx(0.0));

  Configuration inside;
  inside.dim = 2;
  inside.positions = {Vec{1, 0}};
  CHECK_THROWS_AS(taylor_correction_constants(inside, 2.0, 0), DomainError);
}

TEST_CASE("taylor residual basics") {
  Configuration ext;
  ext.dim = 2;
  ext.positions = {Vec{4, 0}, Vec{0, -5}};
  Vec at_zero = taylor_residual(ext, 2.0, 2, Vec{0, 0});
  CHECK(at_zero[0] == doctest::Approx(0.0));
  CHECK(at_zero[1] == doctest::Approx(0.0));

  Configuration empty;
  empty.dim = 2;
  Vec none = taylor_residual(empty, 2.0, 2, Vec{1, 0});
  CHECK(none[0] == 0.0);

  CHECK_THROWS_AS(taylor_residual(ext, 2.0, 2, Vec{3, 0}), DomainError);
}

TEST_CASE("taylor residual shrinks with increasing order") {
  Configuration ext;
  ext.dim = 2;
  ext.positions = {Vec{4, 0}};
  double R = 2.0;
  double prev_sup = 0.0;
  for (int l0 : {1, 2, 3}) {
    double sup = 0.0;
    for (int a = -10; a <= 10; ++a)
      for (int b = -10; b <= 10; ++b) {
        Vec x{a / 10.0, b / 10.0};
        if (x.norm() > 1.0) continue;
        sup = std::max(sup, taylor_residual(ext, R, l0, x).norm());
      }
    if (l0 > 1) CHECK(sup * 2.0 <= prev_sup);
    prev_sup = sup;
  }
}

TEST_CASE("residual matches direct tail-minus-polynomial evaluation") {
  CounterRng rng(42, 0);
  Configuration ext;
  ext.dim = 2;
  ext.positions = {Vec{3, 1}, Vec{-4, 2}, Vec{0, 6}};
  double R = 2.0;
  int l0 = 2;
  CorrectionTable table = taylor_correction_constants(ext, R, l0);
  for (int trial = 0; trial < 10; ++trial) {
    Vec x{1.8 * (rng.uniform() - 0.5), 1.8 * (rng.uniform() - 0.5)};
    // tail = sum of forces (x - y)/|x - y|^d
    Vec tail = Vec::zero(2);
    for (const Vec& y : ext.positions) {
      Vec z = x - y;
      tail += z * (1.0 / z.norm2());
    }
    Vec expect = tail - table.polynomial(x);
    Vec got = taylor_residual(ext, R, l0, x);
    CHECK(got[0] == doctest::Approx(expect[0]).epsilon(1e-10));
    CHECK(got[1] == doctest::Approx(expect[1]).epsilon(1e-10));
  }
}

TEST_CASE("whole configuration inside the cutoff collapses all corrections") {
  CounterRng rng(43, 0);
  GibbsModel m = gaussian_model(2, 2.0, 6, 1.0);
  Configuration c = cloud(rng, 2, 6, 1.5);
  DriftSpec naive{8.0, 2, DriftMode::NaiveTruncation};
  DriftSpec corr{8.0, 2, DriftMode::Corrected};
  for (std::size_t i = 0; i < 6; ++i) {
    Vec bn = truncated_drift(m, naive, i, c);
    Vec bc = truncated_drift(m, corr, i, c);
    Vec bf = finite_drift(m, i, c.positions);
    CHECK(bn[0] == bf[0]);
    CHECK(bn[1] == bf[1]);
    CHECK(bc[0] == bn[0]);
    CHECK(bc[1] == bn[1]);
  }
}

TEST_CASE("corrected drift decomposition holds bit-exactly") {
  CounterRng rng(44, 0);
  GibbsModel m = gaussian_model(2, 1.8, 24, 0.2);
  Configuration c = cloud(rng, 2, 24, 6.0);
  double R = 3.0;
  DriftSpec naive{R, 2, DriftMode::NaiveTruncation};
  DriftSpec corr{R, 2, DriftMode::Corrected};
  auto [interior, exterior] = split_interior_exterior(c, R);
  CorrectionTable table = taylor_correction_constants(exterior, R, 2);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c.positions[i].norm() > R) continue;
    Vec bn = truncated_drift(m, naive, i, c);
    Vec bc = truncated_drift(m, corr, i, c);
    Vec correction = table.polynomial(c.positions[i]) +
                     taylor_residual(exterior, R, 2, c.positions[i]);
    Vec expect = bn + m.beta * correction;
    CHECK(bc[0] == expect[0]);
    CHECK(bc[1] == expect[1]);
  }
}

TEST_CASE("corrected drift rejects exterior particles") {
  GibbsModel m = gaussian_model(2, 1.0, 2, 1.0);
  Configuration c;
  c.dim = 2;
  c.positions = {Vec{5, 0}, Vec{0, 1}};
  DriftSpec corr{2.0, 2, DriftMode::Corrected};
  CHECK_THROWS_AS(truncated_drift(m, corr, 0, c), DomainError);
}

TEST_CASE("translation invariant mode centers the ball at the particle") {
  GibbsModel m = gaussian_model(2, 2.0, 3, 1.0);
  Configuration c;
  c.dim = 2;
  c.positions = {Vec{10, 0}, Vec{10.5, 0}, Vec{0, 0}};
  DriftSpec ti{1.0, 2, DriftMode::TranslationInvariant};
  // Only the neighbor within distance 1 contributes; no confinement term.
  Vec b = truncated_drift(m, ti, 0, c);
  Vec z = Vec{10, 0} - Vec{10.5, 0};
  Vec expect = m.beta * (z * (1.0 / z.norm2()));
  CHECK(b[0] == doctest::Approx(expect[0]).epsilon(1e-14));
  CHECK(b[1] == doctest::Approx(expect[1]).epsilon(1e-14));

  // Exactly on-sphere neighbors are included (closed ball).
  Configuration edge;
  edge.dim = 2;
  edge.positions = {Vec{0, 0}, Vec{1, 0}, Vec{7, 7}};
  Vec be = truncated_drift(m, ti, 0, edge);
  CHECK(be[0] == doctest::Approx(-2.0).epsilon(1e-14));
}

TEST_CASE("pair force antisymmetry within truncated sums") {
  GibbsModel m = gaussian_model(2, 1.0, 2, 1.0);
  m.confinement = ConfinementField::zero();
  Configuration c;
  c.dim = 2;
  c.positions = {Vec{0.3, 0.4}, Vec{-0.2, 0.1}};
  DriftSpec naive{5.0, 2, DriftMode::NaiveTruncation};
  Vec b0 = truncated_drift(m, naive, 0, c);
  Vec b1 = truncated_drift(m, naive, 1, c);
  CHECK(b0[0] == -b1[0]);
  CHECK(b0[1] == -b1[1]);
}

TEST_CASE("cached drift agrees with the direct corrected drift") {
  CounterRng rng(45, 0);
  GibbsModel m = gaussian_model(2, 1.8, 20, 0.2);
  Configuration c = cloud(rng, 2, 20, 6.0);
  double R = 3.0;
  DriftSpec corr{R, 2, DriftMode::Corrected};
  auto [interior, exterior] = split_interior_exterior(c, R);
  CorrectionTable table = taylor_correction_constants(exterior, R, 2);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c.positions[i].norm() > R) continue;
    Vec direct = truncated_drift(m, corr, i, c);
    Vec cached = truncated_drift_cached(m, corr, i, c.positions, exterior, table);
    CHECK(direct[0] == cached[0]);
    CHECK(direct[1] == cached[1]);
  }
}

TEST_CASE("elliptic drift closed forms and FD oracle") {
  Vec d_log{1.0, -2.0};
  Vec x{0.3, 0.9};
  Vec id = elliptic_drift(CoefficientField::identity(), d_log, x);
  CHECK(id[0] == doctest::Approx(0.5));
  CHECK(id[1] == doctest::Approx(-1.0));

  CoefficientField diag = CoefficientField::diagonal(0.4);
  Vec zero_log = Vec::zero(2);
  Vec b = elliptic_drift(diag, zero_log, x);
  CHECK(b[0] == doctest::Approx(0.5 * 0.4 * std::cos(x[0])).epsilon(1e-14));
  CHECK(b[1] == doctest::Approx(0.5 * 0.4 * std::cos(x[1])).epsilon(1e-14));

  CounterRng rng(46, 0);
  for (int trial = 0; trial < 20; ++trial) {
    Vec y{6.0 * (rng.uniform() - 0.5), 6.0 * (rng.uniform() - 0.5)};
    double h = 1e-6;
    for (std::size_t l = 0; l < 2; ++l) {
      Vec yp = y, ym = y;
      yp[l] += h;
      ym[l] -= h;
      double fd = (diag.a_kk(yp, l) - diag.a_kk(ym, l)) / (2.0 * h);
      CHECK(std::abs(diag.divergence(y)[l] - fd) <=
            1e-6 * std::max(1.0, std::abs(fd)));
    }
  }
}
