#include "coulomb/stats.hpp"

#include <algorithm>

#include "coulomb/errors.hpp"

namespace coulomb {

MeanVar mean_variance(const std::vector<double>& xs) {
  MeanVar out;
  out.n = xs.size();
  if (out.n == 0) return out;
  double s = 0.0;
  for (double v : xs) s += v;
  out.mean = s / static_cast<double>(out.n);
  if (out.n < 2) return out;
  double q = 0.0;
  for (double v : xs) q += (v - out.mean) * (v - out.mean);
  out.variance = q / static_cast<double>(out.n - 1);
  return out;
}

double jackknife_variance_stderr(const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  if (n < 3) return 0.0;
  double sum = 0.0, sumsq = 0.0;
  for (double v : xs) {
    sum += v;
    sumsq += v * v;
  }
  // Leave-one-out variance estimates in O(n).
  std::vector<double> loo(n);
  double m = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    double s = sum - xs[i];
    double q = sumsq - xs[i] * xs[i];
    double mean = s / m;
    loo[i] = (q - m * mean * mean) / (m - 1.0);
  }
  MeanVar mv = mean_variance(loo);
  return std::sqrt((m / static_cast<double>(n)) *
                   (mv.variance * static_cast<double>(n - 1)));
}

OlsFit ols_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 3) throw DegenerateFit("need >= 3 points for OLS");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) throw DegenerateFit("degenerate abscissa in OLS");
  OlsFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = y[i] - fit.intercept - fit.slope * x[i];
    rss += r * r;
  }
  if (n > 2) fit.slope_stderr = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  return fit;
}

namespace {

// Asymptotic Kolmogorov distribution complement Q(lambda).
double kolmogorov_q(double lambda) {
  if (lambda <= 0) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    double term = 2.0 * ((k % 2 == 1) ? 1.0 : -1.0) *
                  std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-12) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

}  // namespace

double ks_test_pvalue(std::vector<double> cdf_values) {
  const std::size_t n = cdf_values.size();
  if (n == 0) throw InsufficientSamples("KS test requires samples");
  std::sort(cdf_values.begin(), cdf_values.end());
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double lo = static_cast<double>(i) / n;
    double hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::max(cdf_values[i] - lo, hi - cdf_values[i]));
  }
  double sn = std::sqrt(static_cast<double>(n));
  // Stephens' small-sample correction.
  double lambda = (sn + 0.12 + 0.11 / sn) * d;
  return kolmogorov_q(lambda);
}

}  // namespace coulomb
