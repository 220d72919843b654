#pragma once

#include <cstdint>
#include <vector>

#include "sdecoef/selection.hpp"
#include "sdecoef/simulate.hpp"

namespace sdecoef {

/// Which process the estimators run on: the latent unit-noise process (drift
/// truth alpha, squared diffusion truth 1) or the observed process (truth b
/// and sigma^2).
enum class EstimationTarget { kXiProcess, kXProcess };

struct ExperimentConfig {
  DiffusionFamily family;
  std::size_t n = 5000;
  double delta = 0.05;
  std::size_t replications = 1;
  std::uint64_t seed = 0;
  double kappa = 4.0;
  int r_max = 9;
  EstimationTarget target = EstimationTarget::kXiProcess;
};

/// Validates n >= 10, delta > 0, replications >= 1, admissible penalty knobs.
ExperimentConfig make_experiment_config(const ExperimentConfig& config);

/// Outcome of one replication. Replication r is driven by rng stream r, so
/// records are reproducible individually and in any execution order.
struct ReplicationRecord {
  std::size_t replication = 0;
  DyadicModel drift_model;
  DyadicModel vol_model;
  double drift_err = 0.0;
  double vol_err = 0.0;
  Window window{0.0, 1.0};
  bool failed = false;  // sampler failure; errors/models not meaningful
};

/// One row of the plotting grid: truth and estimates at x.
struct CurvePoint {
  double x = 0.0;
  double truth_drift = 0.0;
  double est_drift = 0.0;
  double truth_vol = 0.0;
  double est_vol = 0.0;
};

/// One predictor with its two regression responses.
struct ScatterPoint {
  double x = 0.0;
  double y_drift = 0.0;
  double u_vol = 0.0;
};

struct ExperimentReport {
  std::vector<ReplicationRecord> records;
  DyadicModel modal_drift_model;
  DyadicModel modal_vol_model;
  double median_drift_err = 0.0;
  double iqr_drift_err = 0.0;
  double median_vol_err = 0.0;
  double iqr_vol_err = 0.0;
  std::size_t failures = 0;
  /// Truth/estimate curves on 512 equispaced points of the pooled window,
  /// from the representative replication (median drift error); empty if
  /// every replication failed.
  std::vector<CurvePoint> curves;
  /// Predictor/response pairs of the representative replication.
  std::vector<ScatterPoint> scatter;
};

struct EstimateBothResult {
  SelectionResult drift;
  SelectionResult vol;
  Window window{0.0, 1.0};
};

/// Central-95% estimation window: the empirical 2.5% and 97.5% quantiles of
/// the predictors (linear interpolation between order statistics).
Window data_window(std::span<const double> predictors);

/// Runs the full estimation pipeline on one path: builds both response sets,
/// computes the shared window, then selects drift and squared-diffusion
/// models independently.
EstimateBothResult estimate_both(const SamplePath& path,
                                 const PenaltySpec& spec);

/// Ground-truth drift and squared diffusion coefficient for a target.
double truth_drift(const DiffusionFamily& family, EstimationTarget target,
                   double x);
double truth_vol(const DiffusionFamily& family, EstimationTarget target,
                 double x);

/// Simulates, estimates, and scores config.replications independent runs
/// (stream r drives replication r), then aggregates. Sampler failures are
/// recorded per replication, never fatal.
ExperimentReport run_experiment(const ExperimentConfig& config);

struct RiskCurveRow {
  std::size_t n = 0;
  double median_drift_err = 0.0;
  double median_vol_err = 0.0;
};

/// Median errors as the sample size grows, replications paired by stream
/// across the different n.
std::vector<RiskCurveRow> risk_curve(const ExperimentConfig& config,
                                     std::span<const std::size_t> n_values);

}  // namespace sdecoef
