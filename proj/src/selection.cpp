#include "sdecoef/selection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace sdecoef {

namespace {

void check_spec(const PenaltySpec& spec) {
  if (!(spec.kappa > 0.0) || spec.d_max < 1 || spec.r_max < 0 ||
      spec.r_max > kMaxDegree || spec.medium_dim_target < 1 ||
      spec.medium_dim_target > spec.d_max) {
    throw std::invalid_argument("PenaltySpec: invariant violated");
  }
}

}  // namespace

PenaltySpec PenaltySpec::for_sample(std::size_t n, double delta, double kappa,
                                    int r_max) {
  if (n < 1 || !(delta > 0.0) || !std::isfinite(delta)) {
    throw std::invalid_argument(
        "PenaltySpec::for_sample: need n >= 1 and delta > 0");
  }
  const double horizon = static_cast<double>(n) * delta;
  const double divisor = std::log(std::max(horizon, std::exp(1.0)));
  const int scaled = static_cast<int>(std::floor(horizon / divisor));
  PenaltySpec spec;
  spec.kappa = kappa;
  spec.r_max = r_max;
  spec.d_max = std::max(8, scaled);
  spec.medium_dim_target =
      static_cast<int>(std::floor(std::sqrt(static_cast<double>(spec.d_max))));
  check_spec(spec);
  return spec;
}

double PenaltySpec::penalty(const DyadicModel& model, double s_hat_sq,
                            std::size_t n) const {
  check_spec(*this);
  if (!(s_hat_sq >= 0.0) || n < 1) {
    throw std::invalid_argument(
        "penalty: need s_hat_sq >= 0 and n >= 1");
  }
  const double shape =
      model.degree + 1 + std::pow(std::log(model.degree + 1.0), 2.5);
  return kappa * (s_hat_sq / static_cast<double>(n)) *
         static_cast<double>(model.bins()) * shape;
}

std::vector<DyadicModel> enumerate_models(const PenaltySpec& spec) {
  check_spec(spec);
  std::vector<DyadicModel> models;
  for (int level = 0; (1 << level) <= spec.d_max && level <= 30; ++level) {
    for (int degree = 0; degree <= spec.r_max; ++degree) {
      const DyadicModel m{level, degree};
      if (m.dimension() <= spec.d_max) models.push_back(m);
    }
  }
  std::sort(models.begin(), models.end(),
            [](const DyadicModel& a, const DyadicModel& b) {
              if (a.dimension() != b.dimension()) {
                return a.dimension() < b.dimension();
              }
              if (a.level != b.level) return a.level < b.level;
              return a.degree < b.degree;
            });
  return models;
}

DyadicModel pilot_model(const PenaltySpec& spec) {
  const auto all = enumerate_models(spec);
  const int pilot_degree = std::min(1, spec.r_max);
  std::vector<DyadicModel> candidates;
  for (const auto& m : all) {
    if (m.degree == pilot_degree) candidates.push_back(m);
  }
  if (candidates.empty()) candidates = all;
  DyadicModel best = candidates.front();
  int best_dist = std::abs(best.dimension() - spec.medium_dim_target);
  for (const auto& m : candidates) {
    const int dist = std::abs(m.dimension() - spec.medium_dim_target);
    if (dist < best_dist || (dist == best_dist && m.level < best.level)) {
      best = m;
      best_dist = dist;
    }
  }
  return best;
}

double pilot_variance(const RegressionData& data, const PenaltySpec& spec,
                      const Window& window) {
  if (data.size() == 0) {
    throw std::invalid_argument("pilot_variance: empty data");
  }
  return fit_least_squares(data, pilot_model(spec), window).contrast;
}

SelectionResult select_model(const RegressionData& data,
                             const PenaltySpec& spec, const Window& window) {
  const auto models = enumerate_models(spec);
  if (models.empty()) {
    throw std::invalid_argument("select_model: empty model collection");
  }
  const double s_hat_sq = pilot_variance(data, spec, window);
  const std::size_t n = data.size();

  SelectionResult result;
  result.s_hat_sq = s_hat_sq;
  result.trace.reserve(models.size());

  std::size_t best = 0;
  FitOutcome best_fit;
  for (std::size_t i = 0; i < models.size(); ++i) {
    auto fit = fit_least_squares(data, models[i], window);
    const double pen = spec.penalty(models[i], s_hat_sq, n);
    result.trace.push_back(
        {models[i], fit.contrast, pen, fit.contrast + pen});
    // Enumeration order is (dimension, level, degree) ascending, so keeping
    // the first strict minimum realizes the documented tie-breaking.
    if (i == 0 || result.trace[i].criterion < result.trace[best].criterion) {
      best = i;
      best_fit = std::move(fit);
    }
  }
  result.chosen = models[best];
  result.estimate = std::move(best_fit.estimate);
  return result;
}

}  // namespace sdecoef
