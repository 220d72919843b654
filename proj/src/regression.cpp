#include "sdecoef/regression.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace sdecoef {

namespace {

// Relative singular-value cutoff for the per-bin minimum-norm solves.
constexpr double kSingularValueCutoff = 1e-10;

void check_finite(const std::vector<double>& values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument(std::string(what) +
                                  ": values must be finite");
    }
  }
}

}  // namespace

SamplePath make_sample_path(double delta, std::vector<double> values) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw std::invalid_argument("make_sample_path: delta must be positive");
  }
  if (values.size() < 2) {
    throw std::invalid_argument(
        "make_sample_path: need at least two observations");
  }
  check_finite(values, "make_sample_path");
  return SamplePath{delta, std::move(values)};
}

RegressionData make_regression_data(std::vector<double> predictors,
                                    std::vector<double> responses,
                                    ResponseKind kind) {
  if (predictors.size() != responses.size()) {
    throw std::invalid_argument(
        "make_regression_data: predictor/response length mismatch");
  }
  if (predictors.empty()) {
    throw std::invalid_argument("make_regression_data: empty data");
  }
  check_finite(predictors, "make_regression_data");
  check_finite(responses, "make_regression_data");
  if (kind == ResponseKind::kVolatility) {
    for (double r : responses) {
      if (r < 0.0) {
        throw std::invalid_argument(
            "make_regression_data: squared-increment responses must be "
            "nonnegative");
      }
    }
  }
  return RegressionData{std::move(predictors), std::move(responses), kind};
}

RegressionData make_drift_responses(const SamplePath& path) {
  if (!(path.delta > 0.0) || path.values.size() < 2) {
    throw std::invalid_argument("make_drift_responses: invalid path");
  }
  const std::size_t n = path.steps();
  std::vector<double> x(n), y(n);
  for (std::size_t k = 0; k < n; ++k) {
    x[k] = path.values[k];
    y[k] = (path.values[k + 1] - path.values[k]) / path.delta;
  }
  return make_regression_data(std::move(x), std::move(y),
                              ResponseKind::kDrift);
}

RegressionData make_vol_responses(const SamplePath& path) {
  if (!(path.delta > 0.0) || path.values.size() < 2) {
    throw std::invalid_argument("make_vol_responses: invalid path");
  }
  const std::size_t n = path.steps();
  std::vector<double> x(n), u(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double incr = path.values[k + 1] - path.values[k];
    x[k] = path.values[k];
    u[k] = incr * incr / path.delta;
  }
  return make_regression_data(std::move(x), std::move(u),
                              ResponseKind::kVolatility);
}

FitOutcome fit_least_squares(const RegressionData& data,
                             const DyadicModel& model, const Window& window) {
  if (data.predictors.size() != data.responses.size() || data.size() == 0) {
    throw std::invalid_argument("fit_least_squares: invalid data");
  }
  if (!std::isfinite(window.lo) || !std::isfinite(window.hi) ||
      !(window.lo < window.hi)) {
    throw std::invalid_argument("fit_least_squares: degenerate window");
  }
  if (model.level < 0 || model.degree < 0 || model.degree > kMaxDegree) {
    throw std::invalid_argument("fit_least_squares: invalid model");
  }

  const std::size_t n = data.size();
  const int cols = model.degree + 1;
  const int bins = model.bins();

  // Basis functions have disjoint supports across bins, so the global
  // least-squares problem splits into independent per-bin solves.
  std::vector<std::vector<int>> members(static_cast<std::size_t>(bins));
  std::vector<double> unit(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = data.predictors[k];
    if (!window.contains(x)) {
      unit[k] = -1.0;
      continue;
    }
    const double u = window.to_unit(x);
    unit[k] = u;
    const double scaled = std::ldexp(u, model.level);
    int bin = static_cast<int>(scaled);
    if (bin >= bins) bin = bins - 1;
    members[static_cast<std::size_t>(bin)].push_back(static_cast<int>(k));
  }

  std::vector<double> coeffs(static_cast<std::size_t>(model.dimension()),
                             0.0);
  int dof = 0;
  double row[kMaxDegree + 1];
  for (int bin = 0; bin < bins; ++bin) {
    const auto& idx = members[static_cast<std::size_t>(bin)];
    if (idx.empty()) continue;
    Eigen::MatrixXd design(static_cast<Eigen::Index>(idx.size()), cols);
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) {
      const int k = idx[i];
      detail::basis_row(model, unit[static_cast<std::size_t>(k)], row);
      for (int deg = 0; deg < cols; ++deg) {
        design(static_cast<Eigen::Index>(i), deg) = row[deg];
      }
      rhs(static_cast<Eigen::Index>(i)) =
          data.responses[static_cast<std::size_t>(k)];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(
        design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(kSingularValueCutoff);
    const Eigen::VectorXd solution = svd.solve(rhs);
    dof += static_cast<int>(svd.rank());
    for (int deg = 0; deg < cols; ++deg) {
      coeffs[static_cast<std::size_t>(bin) * cols + deg] = solution(deg);
    }
  }

  PiecewisePolyFn estimate(model, std::move(coeffs), window);
  FitOutcome outcome{std::move(estimate), 0.0, dof};
  outcome.contrast = contrast(data, outcome.estimate);
  return outcome;
}

double contrast(const RegressionData& data, const PiecewisePolyFn& fn) {
  if (data.size() == 0) {
    throw std::invalid_argument("contrast: empty data");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < data.size(); ++k) {
    const double r = data.responses[k] - fn.evaluate(data.predictors[k]);
    sum += r * r;
  }
  return sum / static_cast<double>(data.size());
}

double empirical_norm_sq(const std::function<double(double)>& f,
                         const std::function<double(double)>& g,
                         std::span<const double> points,
                         const Window& window) {
  if (points.empty()) return 0.0;
  double sum = 0.0;
  for (double x : points) {
    if (!window.contains(x)) continue;
    const double d = f(x) - g(x);
    sum += d * d;
  }
  return sum / static_cast<double>(points.size());
}

}  // namespace sdecoef
