#pragma once

#include <cstddef>
#include <vector>

#include "sdecoef/regression.hpp"

namespace sdecoef {

/// Calibration of the model-selection penalty and of the model collection.
struct PenaltySpec {
  double kappa = 4.0;         // penalty constant
  int r_max = 9;              // largest per-bin polynomial degree
  int d_max = 8;              // largest admissible model dimension
  int medium_dim_target = 2;  // pilot-model dimension for the variance plug-in

  /// Calibrates the collection to a sample of n increments at spacing delta:
  /// d_max = max(8, floor(n*delta / ln(max(n*delta, e)))) and
  /// medium_dim_target = floor(sqrt(d_max)).
  static PenaltySpec for_sample(std::size_t n, double delta,
                                double kappa = 4.0, int r_max = 9);

  /// Penalty kappa * (s_hat_sq / n) * 2^p * (r + 1 + ln(r+1)^2.5).
  double penalty(const DyadicModel& model, double s_hat_sq,
                 std::size_t n) const;
};

/// All models (p, r) with 0 <= r <= r_max and 2^p * (r+1) <= d_max, ordered
/// by increasing dimension, then increasing level, then increasing degree.
std::vector<DyadicModel> enumerate_models(const PenaltySpec& spec);

/// The medium-dimension model used for the variance plug-in: degree fixed at
/// min(1, r_max), dimension closest to medium_dim_target, ties to the
/// smaller level. Falls back to the whole collection if no such model fits
/// within d_max.
DyadicModel pilot_model(const PenaltySpec& spec);

/// Fitted contrast of the pilot model: the plug-in estimate of the response
/// noise scale that the penalty multiplies.
double pilot_variance(const RegressionData& data, const PenaltySpec& spec,
                      const Window& window);

struct ModelScore {
  DyadicModel model;
  double contrast = 0.0;
  double penalty = 0.0;
  double criterion = 0.0;  // contrast + penalty
};

struct SelectionResult {
  DyadicModel chosen;
  PiecewisePolyFn estimate;
  std::vector<ModelScore> trace;  // one entry per model, enumeration order
  double s_hat_sq = 0.0;
};

/// Fits every model in the collection and returns the one minimizing
/// contrast + penalty, with the variance plug-in taken from pilot_variance.
/// Criterion ties go to the smaller dimension, then the smaller level.
SelectionResult select_model(const RegressionData& data,
                             const PenaltySpec& spec, const Window& window);

}  // namespace sdecoef
