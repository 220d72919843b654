// Command-line front end: simulate paths, estimate coefficients from a path
// file, or run a replicated experiment from a config file.
//
// Exit codes: 0 success, 1 runtime or sampler failure, 2 usage/config error.

#include <cmath>
#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sdecoef/harness.hpp"
#include "sdecoef/io.hpp"

namespace {

using namespace sdecoef;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct SimulateArgs {
  std::string family = "unittest-zerodrift";
  double theta = 1.0;
  double c = 1.0;
  std::uint64_t n = 5000;
  double delta = 0.05;
  std::uint64_t seed = 0;
  std::string out;
};

struct EstimateArgs {
  std::string in;
  std::string target = "xi";
  double kappa = 4.0;
  int rmax = 9;
  std::string out;
  std::string family;  // optional; enables truth columns and errors
  double theta = 1.0;
  double c = 1.0;
};

struct ExperimentArgs {
  std::string config;
  std::string out;
};

void write_report_files(const std::string& prefix,
                        std::span<const ReplicationRecord> records,
                        std::span<const CurvePoint> curves,
                        std::span<const ScatterPoint> scatter) {
  write_replications_csv(prefix + "_replications.csv", records);
  write_curves_csv(prefix + "_curves.csv", curves);
  write_scatter_csv(prefix + "_scatter.csv", scatter);
}

int run_simulate(const SimulateArgs& args) {
  const DiffusionFamily family =
      make_family(parse_family_tag(args.family), args.theta, args.c);
  RngStream rng(args.seed, 0);
  const auto [xi_path, x_path] =
      simulate_path(family, args.n, args.delta, rng);
  write_path_file(args.out + "_xi.path", xi_path);
  write_path_file(args.out + "_x.path", x_path);
  std::cout << "wrote " << args.out << "_xi.path and " << args.out
            << "_x.path (" << xi_path.values.size() << " values each)\n";
  return kExitOk;
}

int run_estimate(const EstimateArgs& args) {
  const SamplePath path = read_path_file(args.in);
  const EstimationTarget target = parse_target(args.target);
  const PenaltySpec spec =
      PenaltySpec::for_sample(path.steps(), path.delta, args.kappa, args.rmax);
  const EstimateBothResult fit = estimate_both(path, spec);
  const RegressionData drift_data = make_drift_responses(path);
  const RegressionData vol_data = make_vol_responses(path);

  std::optional<DiffusionFamily> family;
  if (!args.family.empty()) {
    family = make_family(parse_family_tag(args.family), args.theta, args.c);
  }
  const double nan = std::nan("");

  ReplicationRecord record;
  record.replication = 0;
  record.drift_model = fit.drift.chosen;
  record.vol_model = fit.vol.chosen;
  record.window = fit.window;
  record.drift_err =
      family ? empirical_norm_sq(
                   [&](double x) { return fit.drift.estimate(x); },
                   [&](double x) { return truth_drift(*family, target, x); },
                   drift_data.predictors, fit.window)
             : nan;
  record.vol_err =
      family ? empirical_norm_sq(
                   [&](double x) { return fit.vol.estimate(x); },
                   [&](double x) { return truth_vol(*family, target, x); },
                   vol_data.predictors, fit.window)
             : nan;

  std::vector<CurvePoint> curves(512);
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const double x = fit.window.lo + (fit.window.hi - fit.window.lo) *
                                         static_cast<double>(i) / 511.0;
    curves[i] = CurvePoint{
        x, family ? truth_drift(*family, target, x) : nan,
        fit.drift.estimate(x), family ? truth_vol(*family, target, x) : nan,
        fit.vol.estimate(x)};
  }
  std::vector<ScatterPoint> scatter(drift_data.size());
  for (std::size_t k = 0; k < scatter.size(); ++k) {
    scatter[k] = ScatterPoint{drift_data.predictors[k],
                              drift_data.responses[k], vol_data.responses[k]};
  }

  write_report_files(args.out, {&record, 1}, curves, scatter);
  std::cout << "selected drift model (p=" << fit.drift.chosen.level
            << ", r=" << fit.drift.chosen.degree << "), vol model (p="
            << fit.vol.chosen.level << ", r=" << fit.vol.chosen.degree
            << ") on window [" << format_double(fit.window.lo) << ", "
            << format_double(fit.window.hi) << "]\n";
  return kExitOk;
}

int run_experiment(const ExperimentArgs& args) {
  const ExperimentConfig config = read_experiment_config(args.config);
  const ExperimentReport report = ::sdecoef::run_experiment(config);
  write_report_files(args.out, report.records, report.curves, report.scatter);
  std::cout << "replications: " << report.records.size()
            << ", failures: " << report.failures << "\n";
  if (report.failures < report.records.size()) {
    std::cout << "modal drift model (p=" << report.modal_drift_model.level
              << ", r=" << report.modal_drift_model.degree
              << "), modal vol model (p=" << report.modal_vol_model.level
              << ", r=" << report.modal_vol_model.degree << ")\n"
              << "median drift err " << format_double(report.median_drift_err)
              << ", median vol err " << format_double(report.median_vol_err)
              << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Penalized nonparametric drift/diffusion estimation with "
               "exact path simulation"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand(
      "simulate", "Simulate a stationary discrete sample path");
  simulate->add_option("--family", sim.family,
                       "family1 | family2 | family2-twobumps | "
                       "unittest-zerodrift")
      ->required();
  simulate->add_option("--theta", sim.theta, "drift strength parameter");
  simulate->add_option("--c", sim.c, "scale parameter");
  simulate->add_option("--n", sim.n, "number of increments")->required();
  simulate->add_option("--delta", sim.delta, "sampling interval")->required();
  simulate->add_option("--seed", sim.seed, "rng seed (stream 0)");
  simulate->add_option("--out", sim.out, "output prefix for the path files")
      ->required();

  EstimateArgs est;
  auto* estimate = app.add_subcommand(
      "estimate", "Estimate drift and squared diffusion from a path file");
  estimate->add_option("--in", est.in, "input path file")->required();
  estimate->add_option("--target", est.target,
                       "xi | x (which process the file holds)");
  estimate->add_option("--kappa", est.kappa, "penalty constant");
  estimate->add_option("--rmax", est.rmax, "largest per-bin degree");
  estimate->add_option("--out", est.out, "output prefix for the CSV tables")
      ->required();
  estimate->add_option("--family", est.family,
                       "optional generating family; fills truth columns");
  estimate->add_option("--theta", est.theta, "family parameter (with --family)");
  estimate->add_option("--c", est.c, "family parameter (with --family)");

  ExperimentArgs exp;
  auto* experiment = app.add_subcommand(
      "experiment", "Run a replicated simulate+estimate experiment");
  experiment->add_option("--config", exp.config, "key=value config file")
      ->required();
  experiment->add_option("--out", exp.out, "output prefix for the CSV tables")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (simulate->parsed()) return run_simulate(sim);
    if (estimate->parsed()) return run_estimate(est);
    return run_experiment(exp);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SamplerFailure& e) {
    std::cerr << "sampler failure: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
