#include "sdecoef/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <utility>

namespace sdecoef {

namespace {

constexpr int kCurveGridPoints = 512;

template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const unsigned hardware = std::thread::hardware_concurrency();
  const std::size_t workers =
      std::min<std::size_t>(count, hardware ? hardware : 1);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

// Linear-interpolation quantile of an ascending sample.
double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto i = static_cast<std::size_t>(h);
  if (i + 1 >= sorted.size()) return sorted.back();
  return sorted[i] + (h - static_cast<double>(i)) * (sorted[i + 1] - sorted[i]);
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  return quantile_sorted(values, 0.5);
}

double interquartile_range(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  return quantile_sorted(values, 0.75) - quantile_sorted(values, 0.25);
}

DyadicModel modal_model(const std::vector<DyadicModel>& models) {
  // Most frequent (level, degree); ties to the smaller dimension, then the
  // smaller level, mirroring the selection tie-breaking.
  std::map<std::pair<int, int>, std::size_t> counts;
  for (const auto& m : models) ++counts[{m.level, m.degree}];
  DyadicModel best;
  std::size_t best_count = 0;
  for (const auto& [key, count] : counts) {
    const DyadicModel m{key.first, key.second};
    const bool better =
        count > best_count ||
        (count == best_count &&
         (m.dimension() < best.dimension() ||
          (m.dimension() == best.dimension() && m.level < best.level)));
    if (better) {
      best = m;
      best_count = count;
    }
  }
  return best;
}

struct ReplicationDetail {
  EstimateBothResult fit;
  RegressionData drift_data;
  RegressionData vol_data;
};

// Runs one replication end to end; throws SamplerFailure upward.
ReplicationDetail run_replication(const ExperimentConfig& config,
                                  std::size_t replication) {
  RngStream rng(config.seed, replication);
  auto [xi_path, x_path] =
      simulate_path(config.family, config.n, config.delta, rng);
  const SamplePath& path =
      config.target == EstimationTarget::kXiProcess ? xi_path : x_path;
  const PenaltySpec spec = PenaltySpec::for_sample(
      config.n, config.delta, config.kappa, config.r_max);
  ReplicationDetail detail{estimate_both(path, spec),
                           make_drift_responses(path),
                           make_vol_responses(path)};
  return detail;
}

ReplicationRecord score_replication(const ExperimentConfig& config,
                                    std::size_t replication,
                                    const ReplicationDetail& detail) {
  ReplicationRecord record;
  record.replication = replication;
  record.window = detail.fit.window;
  record.drift_model = detail.fit.drift.chosen;
  record.vol_model = detail.fit.vol.chosen;
  const auto& family = config.family;
  const auto target = config.target;
  record.drift_err = empirical_norm_sq(
      [&](double x) { return detail.fit.drift.estimate(x); },
      [&](double x) { return truth_drift(family, target, x); },
      detail.drift_data.predictors, detail.fit.window);
  record.vol_err = empirical_norm_sq(
      [&](double x) { return detail.fit.vol.estimate(x); },
      [&](double x) { return truth_vol(family, target, x); },
      detail.vol_data.predictors, detail.fit.window);
  return record;
}

}  // namespace

ExperimentConfig make_experiment_config(const ExperimentConfig& config) {
  if (config.n < 10) {
    throw std::invalid_argument("ExperimentConfig: need n >= 10");
  }
  if (!(config.delta > 0.0) || !std::isfinite(config.delta)) {
    throw std::invalid_argument("ExperimentConfig: need delta > 0");
  }
  if (config.replications < 1) {
    throw std::invalid_argument("ExperimentConfig: need replications >= 1");
  }
  // Validates family parameters and penalty knobs by construction.
  make_family(config.family.tag, config.family.theta, config.family.c);
  PenaltySpec::for_sample(config.n, config.delta, config.kappa, config.r_max);
  return config;
}

Window data_window(std::span<const double> predictors) {
  if (predictors.empty()) {
    throw std::invalid_argument("data_window: empty predictors");
  }
  std::vector<double> sorted(predictors.begin(), predictors.end());
  std::sort(sorted.begin(), sorted.end());
  double lo = quantile_sorted(sorted, 0.025);
  double hi = quantile_sorted(sorted, 0.975);
  if (!(lo < hi)) {
    // Degenerate spread (e.g. a constant path): widen symmetrically so the
    // pipeline still runs; every estimate is then constant on the window.
    lo -= 0.5;
    hi += 0.5;
  }
  return make_window(lo, hi);
}

EstimateBothResult estimate_both(const SamplePath& path,
                                 const PenaltySpec& spec) {
  const RegressionData drift_data = make_drift_responses(path);
  const RegressionData vol_data = make_vol_responses(path);
  const Window window = data_window(drift_data.predictors);
  EstimateBothResult result;
  result.window = window;
  result.drift = select_model(drift_data, spec, window);
  result.vol = select_model(vol_data, spec, window);
  return result;
}

double truth_drift(const DiffusionFamily& family, EstimationTarget target,
                   double x) {
  if (target == EstimationTarget::kXiProcess) return alpha(family, x);
  return model_coeffs(family, x).first;
}

double truth_vol(const DiffusionFamily& family, EstimationTarget target,
                 double x) {
  if (target == EstimationTarget::kXiProcess) return 1.0;
  const double sigma = model_coeffs(family, x).second;
  return sigma * sigma;
}

ExperimentReport run_experiment(const ExperimentConfig& raw_config) {
  const ExperimentConfig config = make_experiment_config(raw_config);
  ExperimentReport report;
  report.records.resize(config.replications);

  parallel_for(config.replications, [&](std::size_t r) {
    try {
      const ReplicationDetail detail = run_replication(config, r);
      report.records[r] = score_replication(config, r, detail);
    } catch (const SamplerFailure&) {
      ReplicationRecord record;
      record.replication = r;
      record.failed = true;
      report.records[r] = record;
    }
  });

  std::vector<DyadicModel> drift_models;
  std::vector<DyadicModel> vol_models;
  std::vector<double> drift_errs;
  std::vector<double> vol_errs;
  double pooled_lo = 0.0;
  double pooled_hi = 0.0;
  for (const auto& record : report.records) {
    if (record.failed) {
      ++report.failures;
      continue;
    }
    if (drift_models.empty()) {
      pooled_lo = record.window.lo;
      pooled_hi = record.window.hi;
    } else {
      pooled_lo = std::min(pooled_lo, record.window.lo);
      pooled_hi = std::max(pooled_hi, record.window.hi);
    }
    drift_models.push_back(record.drift_model);
    vol_models.push_back(record.vol_model);
    drift_errs.push_back(record.drift_err);
    vol_errs.push_back(record.vol_err);
  }
  if (drift_models.empty()) return report;  // nothing succeeded

  report.modal_drift_model = modal_model(drift_models);
  report.modal_vol_model = modal_model(vol_models);
  report.median_drift_err = median(drift_errs);
  report.iqr_drift_err = interquartile_range(drift_errs);
  report.median_vol_err = median(vol_errs);
  report.iqr_vol_err = interquartile_range(vol_errs);

  // Representative replication: lower-median drift error among successes
  // (ties to the smallest replication index). Re-run it for the plot data;
  // indexed streams make the re-run bit-identical to the scored one.
  std::vector<std::pair<double, std::size_t>> ranked;
  for (const auto& record : report.records) {
    if (!record.failed) ranked.emplace_back(record.drift_err, record.replication);
  }
  std::sort(ranked.begin(), ranked.end());
  const std::size_t representative = ranked[(ranked.size() - 1) / 2].second;
  const ReplicationDetail detail = run_replication(config, representative);

  report.curves.resize(kCurveGridPoints);
  for (int i = 0; i < kCurveGridPoints; ++i) {
    const double x = pooled_lo + (pooled_hi - pooled_lo) * i /
                                     (kCurveGridPoints - 1.0);
    report.curves[i] = CurvePoint{
        x, truth_drift(config.family, config.target, x),
        detail.fit.drift.estimate(x),
        truth_vol(config.family, config.target, x),
        detail.fit.vol.estimate(x)};
  }
  report.scatter.resize(detail.drift_data.size());
  for (std::size_t k = 0; k < detail.drift_data.size(); ++k) {
    report.scatter[k] = ScatterPoint{detail.drift_data.predictors[k],
                                     detail.drift_data.responses[k],
                                     detail.vol_data.responses[k]};
  }
  return report;
}

std::vector<RiskCurveRow> risk_curve(const ExperimentConfig& config,
                                     std::span<const std::size_t> n_values) {
  if (n_values.empty()) {
    throw std::invalid_argument("risk_curve: empty n list");
  }
  for (std::size_t i = 1; i < n_values.size(); ++i) {
    if (n_values[i] <= n_values[i - 1]) {
      throw std::invalid_argument("risk_curve: n list must be increasing");
    }
  }
  std::vector<RiskCurveRow> rows;
  rows.reserve(n_values.size());
  for (std::size_t n : n_values) {
    ExperimentConfig scaled = config;
    scaled.n = n;
    const ExperimentReport report = run_experiment(scaled);
    rows.push_back(
        RiskCurveRow{n, report.median_drift_err, report.median_vol_err});
  }
  return rows;
}

}  // namespace sdecoef
