#pragma once

#include <map>
#include <vector>

#include "coulomb/model.hpp"

namespace coulomb {

enum class DriftMode { NaiveTruncation, Corrected, TranslationInvariant };

struct DriftSpec {
  double cutoff_R = 4.0;
  int taylor_order_l0 = 2;
  DriftMode mode = DriftMode::Corrected;

  void validate() const;
};

// Taylor coefficients C_R^i of the aggregate exterior force, one d-vector
// per multi-index with |i| <= l0.
struct CorrectionTable {
  std::size_t dim = 0;
  int l0 = 0;
  std::map<MultiIndex, Vec> coefficients;

  const Vec& at(const MultiIndex& i) const;
  // sum_{|i| <= l0} C_R^i x^i
  Vec polynomial(const Vec& x) const;
};

// Row i of the model's log-density gradient:
// -beta ( grad Phi(x^i) + sum_{j != i} grad_x Psi(x^i, x^j) ).
Vec finite_drift(const GibbsModel& model, std::size_t i, const PointList& positions);

// C_R^i = (1/i!) sum_{|y| > R} (-grad Psi)^(i)(-y), free Coulomb kernel,
// summed componentwise in label order.
CorrectionTable taylor_correction_constants(const Configuration& exterior,
                                            double R, int l0);

// Exact exterior tail field minus its degree-l0 Taylor polynomial at 0:
// sum_{|y| > R} [ (-grad Psi)(x - y) - sum_{|i| <= l0} (1/i!)(-grad Psi)^(i)(-y) x^i ].
Vec taylor_residual(const Configuration& exterior, double R, int l0, const Vec& x);

// The truncated / corrected / translation-invariant drift at particle i.
// Corrected mode is assembled literally as
//   naive + beta * ( table.polynomial(x) + taylor_residual(x) ),
// so the decomposition identity holds bit-exactly.
Vec truncated_drift(const GibbsModel& model, const DriftSpec& spec, std::size_t i,
                    const Configuration& config);
Vec truncated_drift(const GibbsModel& model, const DriftSpec& spec, std::size_t i,
                    const PointList& positions);

// As above with a precomputed table for the (static) exterior; exterior
// must equal the |y| > R part of the positions.
Vec truncated_drift_cached(const GibbsModel& model, const DriftSpec& spec,
                           std::size_t i, const PointList& positions,
                           const Configuration& exterior,
                           const CorrectionTable& table);

// b = (1/2) ( div a(x) + a(x) * log_derivative ).
Vec elliptic_drift(const CoefficientField& coeff, const Vec& log_derivative,
                   const Vec& x);

}  // namespace coulomb
