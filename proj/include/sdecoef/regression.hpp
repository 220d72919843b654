#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "sdecoef/basis.hpp"

namespace sdecoef {

/// Equally spaced discrete observations of one scalar process.
struct SamplePath {
  double delta = 0.0;          // sampling interval
  std::vector<double> values;  // observations, oldest first

  /// Number of increments (one less than the number of observations).
  std::size_t steps() const { return values.size() - 1; }
};

/// Validates delta > 0, at least two finite values.
SamplePath make_sample_path(double delta, std::vector<double> values);

enum class ResponseKind { kDrift, kVolatility };

/// Predictor/response pairs extracted from a path for one regression target.
struct RegressionData {
  std::vector<double> predictors;
  std::vector<double> responses;
  ResponseKind kind = ResponseKind::kDrift;

  std::size_t size() const { return predictors.size(); }
};

/// Validates matching lengths, finiteness, and nonnegative responses for the
/// volatility kind.
RegressionData make_regression_data(std::vector<double> predictors,
                                    std::vector<double> responses,
                                    ResponseKind kind);

/// Drift regression: predictor x_k, response (x_{k+1} - x_k) / delta.
RegressionData make_drift_responses(const SamplePath& path);

/// Squared-increment regression: predictor x_k, response
/// (x_{k+1} - x_k)^2 / delta.
RegressionData make_vol_responses(const SamplePath& path);

struct FitOutcome {
  PiecewisePolyFn estimate;
  double contrast = 0.0;  // mean squared residual over all points
  int dof_used = 0;       // identifiable coefficients across all bins
};

/// Least-squares projection of the responses onto the model's span over the
/// window. Within each bin the minimum-norm solution is taken, discarding
/// singular values below 1e-10 times the largest; empty bins get zero
/// coefficients. Points outside the window contribute their squared response
/// to the contrast but do not influence the coefficients.
FitOutcome fit_least_squares(const RegressionData& data,
                             const DyadicModel& model, const Window& window);

/// Mean squared residual of `fn` against the data (the quantity
/// fit_least_squares minimizes over the model's span).
double contrast(const RegressionData& data, const PiecewisePolyFn& fn);

/// Empirical squared distance between two functions: the mean of
/// (f(x) - g(x))^2 over the given points, with points outside the window
/// contributing zero (both factors vanish there by convention).
double empirical_norm_sq(const std::function<double(double)>& f,
                         const std::function<double(double)>& g,
                         std::span<const double> points,
                         const Window& window);

}  // namespace sdecoef
