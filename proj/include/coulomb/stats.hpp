#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace coulomb {

struct MeanVar {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  std::size_t n = 0;
};

MeanVar mean_variance(const std::vector<double>& xs);

// Jackknife standard error of the unbiased sample variance.
double jackknife_variance_stderr(const std::vector<double>& xs);

struct OlsFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

OlsFit ols_fit(const std::vector<double>& x, const std::vector<double>& y);

// One-sample Kolmogorov-Smirnov test against a continuous CDF given as
// pre-evaluated values at the sample points; returns the asymptotic
// p-value of the two-sided statistic.
double ks_test_pvalue(std::vector<double> cdf_values);

// Standard normal CDF.
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace coulomb
