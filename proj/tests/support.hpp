// Shared numerical oracles for the test suites: Gauss-Legendre quadrature,
// Kolmogorov-Smirnov distances, and a quadrature-backed cdf. These are kept
// independent of the library internals so they can serve as cross-checks.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace testsupport {

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// recurrence. Exact for polynomials up to degree 2n-1.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(
    int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1");
  std::vector<double> nodes(n), weights(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p_prev = 1.0;
      double p = t;
      for (int k = 2; k <= n; ++k) {
        const double p_next = ((2 * k - 1) * t * p - (k - 1) * p_prev) / k;
        p_prev = p;
        p = p_next;
      }
      dp = n * (t * p - p_prev) / (t * t - 1.0);
      const double step = p / dp;
      t -= step;
      if (std::abs(step) < 1e-15) break;
    }
    nodes[i] = -t;
    nodes[n - 1 - i] = t;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
  return {nodes, weights};
}

/// One-sample Kolmogorov-Smirnov distance against a cdf.
inline double ks_distance(std::vector<double> sample,
                          const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const auto n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, std::max(f - static_cast<double>(i) / n,
                             static_cast<double>(i + 1) / n - f));
  }
  return d;
}

/// Two-sample Kolmogorov-Smirnov distance.
inline double ks_distance_two_sample(std::vector<double> a,
                                     std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const auto na = static_cast<double>(a.size());
  const auto nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) {
      ++i;
    } else {
      ++j;
    }
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  return d;
}

/// Cdf of an (unnormalized) density on [lo, hi], built by trapezoid
/// accumulation on a uniform grid; evaluation clamps and interpolates.
class GridCdf {
 public:
  GridCdf(const std::function<double(double)>& density, double lo, double hi,
          int points)
      : lo_(lo), hi_(hi), cumulative_(points) {
    if (points < 2 || !(lo < hi)) throw std::invalid_argument("GridCdf");
    const double h = (hi - lo) / (points - 1);
    double prev = density(lo);
    cumulative_[0] = 0.0;
    for (int i = 1; i < points; ++i) {
      const double cur = density(lo + i * h);
      cumulative_[i] = cumulative_[i - 1] + 0.5 * (prev + cur) * h;
      prev = cur;
    }
    const double total = cumulative_.back();
    if (!(total > 0.0)) throw std::invalid_argument("GridCdf: zero mass");
    for (double& v : cumulative_) v /= total;
  }

  double operator()(double x) const {
    if (x <= lo_) return 0.0;
    if (x >= hi_) return 1.0;
    const double pos = (x - lo_) / (hi_ - lo_) *
                       static_cast<double>(cumulative_.size() - 1);
    const auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= cumulative_.size()) return cumulative_.back();
    const double frac = pos - static_cast<double>(i);
    return cumulative_[i] + frac * (cumulative_[i + 1] - cumulative_[i]);
  }

 private:
  double lo_;
  double hi_;
  std::vector<double> cumulative_;
};

/// Standard normal cdf.
inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

}  // namespace testsupport
