// Acceptance gate: one self-contained check per release criterion, each
// printing a single [PASS]/[FAIL] line. Run with no arguments for all
// criteria, or pass criterion names (c1 .. c9) to run a subset.
//
// Every expected value here is computed independently of the library
// (quadrature, dense SVD oracles, fine-discretization oracles, frozen
// constants), so these are end-to-end checks, not change detectors.

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sdecoef/basis.hpp"
#include "sdecoef/harness.hpp"
#include "sdecoef/io.hpp"
#include "sdecoef/regression.hpp"
#include "sdecoef/rng.hpp"
#include "sdecoef/selection.hpp"
#include "sdecoef/simulate.hpp"
#include "support.hpp"

using namespace sdecoef;

namespace {

struct CriterionResult {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, ...) {
  char buffer[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buffer, sizeof buffer, format, args);
  va_end(args);
  return buffer;
}

// ---------------------------------------------------------------------------
// c1: the basis is orthonormal against quadrature and obeys the sup bound
//     sup Sigma phi^2 = dimension * (degree + 1).
// ---------------------------------------------------------------------------

CriterionResult criterion1() {
  const auto [nodes, weights] = testsupport::gauss_legendre(10);
  double worst_gram = 0.0;
  double worst_overshoot = 0.0;  // relative excess over the exact bound
  for (int level = 0; level <= 4; ++level) {
    for (int degree = 0; degree <= 9; ++degree) {
      const DyadicModel model{level, degree};
      const int dim = model.dimension();
      // Gram matrix by composite Gauss-Legendre: 10 nodes per bin are exact
      // for products of degree <= 19 > 2 * 9.
      Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(dim, dim);
      const double width = 1.0 / model.bins();
      for (int bin = 1; bin <= model.bins(); ++bin) {
        const double lo = (bin - 1) * width;
        for (std::size_t q = 0; q < nodes.size(); ++q) {
          const double u = lo + width * 0.5 * (nodes[q] + 1.0);
          const double w = weights[q] * width * 0.5;
          for (int i = 0; i < dim; ++i) {
            const double phi_i =
                phi_eval(model, i / (degree + 1) + 1, i % (degree + 1), u);
            if (phi_i == 0.0) continue;
            for (int j = 0; j < dim; ++j) {
              const double phi_j =
                  phi_eval(model, j / (degree + 1) + 1, j % (degree + 1), u);
              gram(i, j) += w * phi_i * phi_j;
            }
          }
        }
      }
      gram -= Eigen::MatrixXd::Identity(dim, dim);
      worst_gram = std::max(worst_gram, gram.cwiseAbs().maxCoeff());

      // Sup of Sigma phi^2 over a dyadic grid that contains every knot (4096
      // is divisible by 2^level for level <= 4), where the sup is attained.
      const double bound = norm_connection_bound(model);
      double grid_max = 0.0;
      for (int g = 0; g <= 4096; ++g) {
        const double u = g / 4096.0;
        double sum = 0.0;
        for (int bin = 1; bin <= model.bins(); ++bin) {
          if (phi_eval(model, bin, 0, u) == 0.0) continue;  // not alive
          for (int d = 0; d <= degree; ++d) {
            const double phi = phi_eval(model, bin, d, u);
            sum += phi * phi;
          }
          break;
        }
        grid_max = std::max(grid_max, sum);
      }
      worst_overshoot = std::max(worst_overshoot, grid_max / bound - 1.0);
    }
  }
  // The bound is exact in real arithmetic; the basis evaluation does a
  // handful of roundings, so allow one part in 1e12 of floating-point
  // overshoot (observed: about one ulp).
  const bool pass = worst_gram <= 1e-8 && worst_overshoot <= 1e-12;
  return {pass, fmt("max |Gram - I| = %.2e (tol 1e-8), worst relative sup "
                    "overshoot = %.2e (tol 1e-12) over 50 models",
                    worst_gram, worst_overshoot)};
}

// ---------------------------------------------------------------------------
// c2: responses lying in a model's span are recovered exactly.
// ---------------------------------------------------------------------------

CriterionResult criterion2() {
  RngStream rng(201, 0);
  int failures = 0;
  double worst_contrast_ratio = 0.0;
  double worst_pointwise = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    DyadicModel model{};
    do {
      model.level = static_cast<int>(rng.next_u64() % 6);
      model.degree = static_cast<int>(rng.next_u64() % 10);
    } while (model.dimension() > 32);
    const double lo = -2.0 + 2.0 * rng.uniform01();
    const Window window = make_window(lo, lo + 0.5 + 2.5 * rng.uniform01());
    const double scale = (trial % 3 == 0) ? 100.0 : 1.0;
    std::vector<double> coeffs(model.dimension());
    for (auto& c : coeffs) c = scale * rng.normal();
    const PiecewisePolyFn truth(model, coeffs, window);

    const std::size_t n = 2000;
    std::vector<double> x(n), y(n);
    double max_sq = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      x[k] = window.from_unit(rng.uniform01());
      y[k] = truth(x[k]);
      max_sq = std::max(max_sq, y[k] * y[k]);
    }
    const auto data =
        make_regression_data(x, y, ResponseKind::kDrift);
    const FitOutcome fit = fit_least_squares(data, model, window);

    worst_contrast_ratio =
        std::max(worst_contrast_ratio, fit.contrast / max_sq);
    double pointwise = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      pointwise = std::max(pointwise, std::abs(fit.estimate(x[k]) - y[k]));
    }
    worst_pointwise = std::max(worst_pointwise, pointwise);
    if (fit.contrast > 1e-16 * max_sq || pointwise > 1e-8) ++failures;
  }
  return {failures == 0,
          fmt("100 in-span trials: worst contrast / max y^2 = %.2e "
              "(tol 1e-16), worst pointwise gap = %.2e (tol 1e-8)",
              worst_contrast_ratio, worst_pointwise)};
}

// ---------------------------------------------------------------------------
// c3: the per-bin solver equals a dense global minimum-norm SVD oracle.
// ---------------------------------------------------------------------------

CriterionResult criterion3() {
  RngStream rng(301, 0);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    DyadicModel model{};
    do {
      model.level = static_cast<int>(rng.next_u64() % 4);
      model.degree = static_cast<int>(rng.next_u64() % 8);
    } while (model.dimension() > 8);
    const Window window = make_window(-1.0, 2.0);
    const std::size_t n = 5 + rng.next_u64() % 46;  // n <= 50, often starved
    std::vector<double> x(n), y(n);
    for (std::size_t k = 0; k < n; ++k) {
      // ~10% of the points fall outside the window on purpose.
      x[k] = -1.3 + 3.6 * rng.uniform01();
      y[k] = rng.normal();
    }
    const auto data = make_regression_data(x, y, ResponseKind::kDrift);
    const FitOutcome fit = fit_least_squares(data, model, window);

    const int dim = model.dimension();
    Eigen::MatrixXd design = Eigen::MatrixXd::Zero(n, dim);
    Eigen::VectorXd response(n);
    for (std::size_t k = 0; k < n; ++k) {
      response(k) = y[k];
      if (!window.contains(x[k])) continue;
      const double u = window.to_unit(x[k]);
      for (int col = 0; col < dim; ++col) {
        design(k, col) = phi_eval(model, col / (model.degree + 1) + 1,
                                  col % (model.degree + 1), u);
      }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(
        design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-10);
    const Eigen::VectorXd oracle_coeffs = svd.solve(response);
    const Eigen::VectorXd oracle_fit = design * oracle_coeffs;
    for (std::size_t k = 0; k < n; ++k) {
      const double mine =
          window.contains(x[k]) ? fit.estimate(x[k]) : 0.0;
      worst = std::max(worst, std::abs(mine - oracle_fit(k)));
    }
  }
  return {worst <= 1e-8,
          fmt("50 instances: worst fitted-value gap vs dense SVD oracle = "
              "%.2e (tol 1e-8)",
              worst)};
}

// ---------------------------------------------------------------------------
// c4: the penalty formula, including exact equality for the constant model.
// ---------------------------------------------------------------------------

CriterionResult criterion4() {
  const PenaltySpec spec;  // kappa = 4
  const auto independent = [](int p, int r, double s2, std::size_t n) {
    return 4.0 * (s2 / static_cast<double>(n)) * std::pow(2.0, p) *
           (r + 1.0 + std::pow(std::log(r + 1.0), 2.5));
  };

  bool pass = true;
  // ln(1) = 0 makes the constant model's penalty exactly 4 s^2 / n.
  for (const auto& [s2, n] : std::vector<std::pair<double, std::size_t>>{
           {1.0, 100}, {0.37, 1000}, {2.5e-3, 17}}) {
    if (spec.penalty(DyadicModel{0, 0}, s2, n) != 4.0 * s2 / static_cast<double>(n)) {
      pass = false;
    }
  }
  double worst_rel = 0.0;
  for (const auto& [p, r] : std::vector<std::pair<int, int>>{
           {1, 0}, {0, 1}, {0, 6}}) {
    const double mine = spec.penalty(DyadicModel{p, r}, 1.0, 100);
    const double expected = independent(p, r, 1.0, 100);
    worst_rel = std::max(worst_rel, std::abs(mine - expected) / expected);
  }
  // Frozen values, computed once with an independent tool.
  const double frozen[3] = {0.08, 0.09600013488728848, 0.4912841649129986};
  const int levels[3] = {1, 0, 0};
  const int degrees[3] = {0, 1, 6};
  for (int i = 0; i < 3; ++i) {
    const double mine =
        spec.penalty(DyadicModel{levels[i], degrees[i]}, 1.0, 100);
    worst_rel = std::max(worst_rel, std::abs(mine - frozen[i]) / frozen[i]);
  }
  pass = pass && worst_rel <= 1e-12;
  return {pass, fmt("constant-model penalty exact; worst relative error vs "
                    "independent formula and frozen values = %.2e (tol 1e-12)",
                    worst_rel)};
}

// ---------------------------------------------------------------------------
// c5: exactness of the transition sampler.
// ---------------------------------------------------------------------------

CriterionResult criterion5() {
  // Zero drift: chained increments are exactly Normal(0, delta).
  const auto zero = make_family(FamilyTag::kUnitTestZeroDrift);
  RngStream zero_rng(501, 0);
  const double delta = 0.05;
  const auto [xi_path, x_path] = simulate_path(zero, 10000, delta, zero_rng);
  std::vector<double> increments(xi_path.steps());
  for (std::size_t k = 0; k < increments.size(); ++k) {
    increments[k] = xi_path.values[k + 1] - xi_path.values[k];
  }
  const double root_delta = std::sqrt(delta);
  const double ks_zero = testsupport::ks_distance(
      std::move(increments),
      [&](double d) { return testsupport::normal_cdf(d / root_delta); });

  // One-step law from x = 0 against a fine Euler-Maruyama oracle.
  const auto f1 = make_family(FamilyTag::kFamily1, 6.0, 2.0);
  const Ea1Bounds bounds = compute_ea1_bounds(f1);
  const int draws = 100000;
  RngStream exact_rng(502, 0);
  std::vector<double> exact(draws);
  for (auto& s : exact) s = ea1_transition(0.0, delta, f1, bounds, exact_rng);

  RngStream euler_rng(503, 0);
  std::vector<double> euler(draws);
  const int substeps = 1024;
  const double h = delta / substeps;
  const double root_h = std::sqrt(h);
  for (auto& s : euler) {
    double xi = 0.0;
    for (int k = 0; k < substeps; ++k) {
      xi += alpha(f1, xi) * h + root_h * euler_rng.normal();
    }
    s = xi;
  }
  const double ks_euler = testsupport::ks_distance_two_sample(
      std::move(exact), std::move(euler));

  const bool pass = ks_zero < 0.02 && ks_euler < 0.02;
  return {pass, fmt("zero-drift increments KS = %.4f, one-step law vs "
                    "delta/1024 Euler KS = %.4f (tol 0.02 each)",
                    ks_zero, ks_euler)};
}

// ---------------------------------------------------------------------------
// c6: stationary samplers match their densities (cdf by quadrature).
// ---------------------------------------------------------------------------

CriterionResult criterion6() {
  const auto f1 = make_family(FamilyTag::kFamily1, 6.0, 2.0);
  RngStream rng1(601, 0);
  std::vector<double> observed(10000);
  for (auto& s : observed) s = xi_to_x(f1, sample_stationary(f1, rng1));
  // Stationary law of the observed process: density (1 + x^2)^-(1+theta/c^2),
  // the scaled Student law with nu = 1 + 2 theta / c^2 = 4.
  const testsupport::GridCdf cdf1(
      [](double x) { return std::pow(1.0 + x * x, -2.5); }, -40.0, 40.0,
      400001);
  const double ks1 = testsupport::ks_distance(std::move(observed), cdf1);

  const auto f2 = make_family(FamilyTag::kFamily2, 3.0, 2.0);
  RngStream rng2(602, 0);
  std::vector<double> latent(10000);
  for (auto& s : latent) s = sample_stationary(f2, rng2);
  const testsupport::GridCdf cdf2(
      [&](double xi) {
        return std::exp(-2.0 * f2.theta / (f2.c * f2.c) *
                        std::sqrt(1.0 + f2.c * f2.c * xi * xi));
      },
      -15.0, 15.0, 300001);
  const double ks2 = testsupport::ks_distance(std::move(latent), cdf2);

  const bool pass = ks1 < 0.02 && ks2 < 0.02;
  return {pass,
          fmt("scaled-t law KS = %.4f, bounded-drift family KS = %.4f "
              "(tol 0.02 each)",
              ks1, ks2)};
}

// ---------------------------------------------------------------------------
// c7: reference-configuration reproduction: modal selected models over 20
//     replications at n = 5000, delta = 1/20, plus the squared-diffusion
//     band check on the latent target.
// ---------------------------------------------------------------------------

CriterionResult criterion7() {
  ExperimentConfig f1_config;
  f1_config.family = make_family(FamilyTag::kFamily1, 6.0, 2.0);
  f1_config.n = 5000;
  f1_config.delta = 0.05;
  f1_config.replications = 20;
  f1_config.seed = 701;
  f1_config.target = EstimationTarget::kXiProcess;
  const ExperimentReport f1_report = run_experiment(f1_config);
  const bool f1_modal = f1_report.failures == 0 &&
                        f1_report.modal_drift_model == DyadicModel{0, 1} &&
                        f1_report.modal_vol_model == DyadicModel{0, 2};

  // Squared-diffusion band: the estimate should stay within [0.9, 1.1]
  // across the whole window (truth is identically 1) in at least half the
  // replications. Replication r is re-run through the public pipeline;
  // stream indexing makes it the same fit run_experiment scored.
  int in_band = 0;
  std::vector<double> band_mins, band_maxs;
  const PenaltySpec spec = PenaltySpec::for_sample(f1_config.n, f1_config.delta);
  for (std::size_t r = 0; r < f1_config.replications; ++r) {
    RngStream rng(f1_config.seed, r);
    const auto [xi_path, x_path] =
        simulate_path(f1_config.family, f1_config.n, f1_config.delta, rng);
    const EstimateBothResult fit = estimate_both(xi_path, spec);
    double vol_min = 0.0;
    double vol_max = 0.0;
    for (int g = 0; g <= 2048; ++g) {
      const double x = fit.window.from_unit(g / 2048.0);
      const double est = fit.vol.estimate(x);
      if (g == 0 || est < vol_min) vol_min = est;
      if (g == 0 || est > vol_max) vol_max = est;
    }
    band_mins.push_back(vol_min);
    band_maxs.push_back(vol_max);
    if (vol_min >= 0.9 && vol_max <= 1.1) ++in_band;
  }
  std::sort(band_mins.begin(), band_mins.end());
  std::sort(band_maxs.begin(), band_maxs.end());
  const bool band = in_band >= 10;

  ExperimentConfig f2_config;
  f2_config.family = make_family(FamilyTag::kFamily2, 3.0, 2.0);
  f2_config.n = 5000;
  f2_config.delta = 0.05;
  f2_config.replications = 20;
  f2_config.seed = 702;
  f2_config.target = EstimationTarget::kXProcess;
  const ExperimentReport f2_report = run_experiment(f2_config);
  // The reference models for this configuration are (0,2) and (0,3); the
  // check is on the unordered pair. Which target picks which is seed-stable
  // (the drift here is odd, so the cubic carries signal; the squared
  // diffusion is an even bell, so the cubic adds nothing over the
  // quadratic), and the per-target labels are printed below.
  const bool f2_modal =
      f2_report.failures == 0 &&
      ((f2_report.modal_drift_model == DyadicModel{0, 2} &&
        f2_report.modal_vol_model == DyadicModel{0, 3}) ||
       (f2_report.modal_drift_model == DyadicModel{0, 3} &&
        f2_report.modal_vol_model == DyadicModel{0, 2}));

  return {f1_modal && band && f2_modal,
          fmt("family1 latent target modal (p,r): drift (%d,%d) vol (%d,%d) "
              "[want (0,1),(0,2)]; vol estimate within [0.9,1.1] on the whole "
              "window in %d/20 replications [want >= 10; median min %.2f, "
              "median max %.2f]; family2 observed target modal: drift (%d,%d) "
              "vol (%d,%d) [want the pair {(0,2),(0,3)}]",
              f1_report.modal_drift_model.level,
              f1_report.modal_drift_model.degree,
              f1_report.modal_vol_model.level,
              f1_report.modal_vol_model.degree, in_band, band_mins[10],
              band_maxs[10],
              f2_report.modal_drift_model.level,
              f2_report.modal_drift_model.degree,
              f2_report.modal_vol_model.level,
              f2_report.modal_vol_model.degree)};
}

// ---------------------------------------------------------------------------
// c8: drift error decays with the sample size, paired by rng stream.
// ---------------------------------------------------------------------------

CriterionResult criterion8() {
  // theta = 1, c = 1 keeps the discretization bias of the drift responses
  // (order delta * (alpha alpha' + alpha''/2), a fixed floor independent of
  // n) well below the estimation variance at both sample sizes, so the
  // comparison actually measures the decay in n. At theta = 6, c = 2 the
  // floor is ~0.09 and dominates both errors.
  ExperimentConfig config;
  config.family = make_family(FamilyTag::kFamily1, 1.0, 1.0);
  config.delta = 0.05;
  config.replications = 50;
  config.seed = 6;
  config.target = EstimationTarget::kXiProcess;

  ExperimentConfig small = config;
  small.n = 500;
  ExperimentConfig large = config;
  large.n = 8000;
  const ExperimentReport small_report = run_experiment(small);
  const ExperimentReport large_report = run_experiment(large);

  int improved = 0;
  for (std::size_t r = 0; r < config.replications; ++r) {
    const auto& a = small_report.records[r];
    const auto& b = large_report.records[r];
    if (!a.failed && !b.failed && b.drift_err < a.drift_err) ++improved;
  }
  return {improved >= 45,
          fmt("drift error smaller at n=8000 than n=500 in %d/50 stream-"
              "paired replications [want >= 45]; medians %.4f -> %.4f",
              improved, small_report.median_drift_err,
              large_report.median_drift_err)};
}

// ---------------------------------------------------------------------------
// c9: near-oracle selection on synthetic piecewise-polynomial regressions.
// ---------------------------------------------------------------------------

CriterionResult criterion9() {
  RngStream rng(901, 0);
  const Window window = make_window(0.0, 1.0);
  const DyadicModel truth_model{1, 2};
  const PenaltySpec spec{4.0, 5, 24, 4};
  const auto models = enumerate_models(spec);
  const std::size_t n = 1000;

  int within = 0;
  const int reps = 100;
  for (int rep = 0; rep < reps; ++rep) {
    std::vector<double> coeffs(truth_model.dimension());
    for (auto& c : coeffs) c = rng.normal();
    const PiecewisePolyFn truth(truth_model, coeffs, window);

    std::vector<double> x(n), y(n);
    for (std::size_t k = 0; k < n; ++k) {
      x[k] = rng.uniform01();
      y[k] = truth(x[k]) + 0.5 * rng.normal();
    }
    const auto data = make_regression_data(x, y, ResponseKind::kDrift);

    double best_err = 0.0;
    std::map<std::pair<int, int>, double> errors;
    for (std::size_t i = 0; i < models.size(); ++i) {
      const FitOutcome fit = fit_least_squares(data, models[i], window);
      const double err = empirical_norm_sq(
          [&](double v) { return fit.estimate(v); },
          [&](double v) { return truth(v); }, x, window);
      errors[{models[i].level, models[i].degree}] = err;
      best_err = i == 0 ? err : std::min(best_err, err);
    }
    const SelectionResult selected = select_model(data, spec, window);
    const double chosen_err =
        errors.at({selected.chosen.level, selected.chosen.degree});
    if (chosen_err <= 2.0 * best_err + 1e-12) ++within;
  }
  return {within >= 85,
          fmt("selected model within twice the collection-best error in "
              "%d/100 replications [want >= 85]",
              within)};
}

struct Criterion {
  const char* name;
  const char* label;
  CriterionResult (*run)();
};

constexpr Criterion kCriteria[] = {
    {"c1", "basis orthonormality and sup-norm bound", criterion1},
    {"c2", "exact recovery of in-span responses", criterion2},
    {"c3", "per-bin solver vs dense minimum-norm oracle", criterion3},
    {"c4", "penalty formula", criterion4},
    {"c5", "transition sampler exactness", criterion5},
    {"c6", "stationary sampler laws", criterion6},
    {"c7", "reference-configuration reproduction", criterion7},
    {"c8", "error decay with sample size", criterion8},
    {"c9", "near-oracle model selection", criterion9},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> requested(argv + 1, argv + argc);
  bool all_pass = true;
  bool any_run = false;
  for (const auto& criterion : kCriteria) {
    if (!requested.empty() &&
        std::find(requested.begin(), requested.end(), criterion.name) ==
            requested.end()) {
      continue;
    }
    any_run = true;
    const CriterionResult result = criterion.run();
    std::printf("[%s] %s %s: %s\n", result.pass ? "PASS" : "FAIL",
                criterion.name, criterion.label, result.detail.c_str());
    std::fflush(stdout);
    all_pass = all_pass && result.pass;
  }
  if (!any_run) {
    std::fprintf(stderr, "unknown criterion name; expected c1 .. c9\n");
    return 2;
  }
  return all_pass ? 0 : 1;
}
