// Command-line front-end: optimization runs, stagnation-frequency
// calibration, scaling sweeps, phase-structure verification, summaries, and
// plot-data emission.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fpso/calibration.hpp"
#include "fpso/experiments.hpp"
#include "fpso/io.hpp"
#include "fpso/phase_stats.hpp"

namespace {

using namespace fpso;
using nlohmann::json;

// Accepts either a literal integer or the path of a calibration.json file.
std::int64_t parse_sigma_stag(const std::string& text) {
  try {
    std::size_t used = 0;
    const long long value = std::stoll(text, &used);
    if (used == text.size()) return value;
  } catch (const std::exception&) {
  }
  return load_sigma_stag(text);
}

const char* cause_name(TerminationCause cause) {
  switch (cause) {
    case TerminationCause::Budget: return "budget";
    case TerminationCause::FullStop: return "full_stop";
    case TerminationCause::PartialStop: return "partial_stop";
  }
  return "?";
}

struct RunOptions {
  std::string objective = "sphere";
  int particles = 5;
  int dimensions = 15;
  double delta = 1e-7;
  std::string mode = "forced";
  std::int64_t mu = 50000;
  std::int64_t gamma = 1350;
  double kappa = 0.0;
  std::string sigma_stag;
  std::int64_t budget = 0;
  int replicates = 100;
  std::uint64_t seed = 1;
  std::int64_t log_every = 0;
  std::string window_mode = "sliding";
  std::string out;
};

int cmd_run(const RunOptions& opt, bool kappa_given) {
  ExperimentConfig config;
  config.objective = parse_objective(opt.objective);
  config.swarm.num_particles = opt.particles;
  config.swarm.num_dimensions = opt.dimensions;
  config.swarm.delta = opt.delta;
  config.swarm.mode = opt.mode == "classical" ? Mode::Classical : Mode::Forced;
  config.replicates = opt.replicates;
  config.master_seed = opt.seed;
  config.log_every = opt.log_every;
  config.window_mode = opt.window_mode == "cumulative" ? WindowMode::Cumulative
                                                       : WindowMode::Sliding;
  if (kappa_given) {
    if (opt.sigma_stag.empty())
      throw CLI::ValidationError("run", "--kappa needs --sigma-stag");
    config.rule = PartialStopRule{parse_sigma_stag(opt.sigma_stag), opt.gamma,
                                  opt.mu, opt.kappa};
  } else if (!opt.sigma_stag.empty()) {
    config.rule =
        FullStopRule{parse_sigma_stag(opt.sigma_stag), opt.gamma, opt.mu};
  } else if (opt.budget > 0) {
    config.rule = BudgetRule{opt.budget};
  } else {
    throw CLI::ValidationError(
        "run", "pick a stopping rule: --sigma-stag [--kappa] or --budget");
  }
  if (opt.budget > 0 && !std::holds_alternative<BudgetRule>(config.rule))
    config.budget = opt.budget;
  config.validate();

  const ExperimentResult result = run_experiment(config);
  if (!opt.out.empty()) save_experiment(opt.out, result);

  std::map<std::string, int> causes;
  for (const RunRecord& record : result.records)
    ++causes[cause_name(record.termination.cause)];
  for (const auto& [name, count] : causes)
    std::printf("terminated by %s: %d of %d\n", name.c_str(), count,
                config.replicates);
  std::fputs(to_json_string(summarize(result.records)).c_str(), stdout);
  return 0;
}

struct CalibrateOptions {
  std::string objective = "sphere";
  int particles = 5;
  int dimensions = 15;
  std::int64_t mu = 50000;
  double delta = 1e-7;
  int trials = 100;
  int intervals = 10;
  int warmup = 1;
  std::uint64_t seed = 20240901;
  std::string out;
};

CalibrationConfig to_calibration_config(const CalibrateOptions& opt) {
  CalibrationConfig config;
  config.objective = parse_objective(opt.objective);
  config.num_particles = opt.particles;
  config.num_dimensions = opt.dimensions;
  config.mu = opt.mu;
  config.delta = opt.delta;
  config.trials = opt.trials;
  config.intervals_per_trial = opt.intervals;
  config.warmup_intervals = opt.warmup;
  config.master_seed = opt.seed;
  return config;
}

int cmd_calibrate(const CalibrateOptions& opt) {
  const CalibrationResult result = calibrate(to_calibration_config(opt));
  std::printf("sigma_stag(N=%d, D=%d, mu=%lld):\n", opt.particles,
              opt.dimensions, static_cast<long long>(opt.mu));
  std::printf("  mean over trials  %.3f\n", result.sigma_stag_mean);
  std::printf("  std over trials   %.3f\n", result.sigma_stag_std);
  std::printf("  rounded           %lld\n",
              static_cast<long long>(result.sigma_stag));
  std::printf("  suggested gamma   %lld  (3 x std)\n",
              static_cast<long long>(3.0 * result.sigma_stag_std + 0.5));
  if (result.attractor_updates != 0)
    std::printf("  warning: %lld attractor updates during calibration\n",
                static_cast<long long>(result.attractor_updates));
  if (!opt.out.empty()) save_calibration(opt.out, result);
  return 0;
}

struct SweepOptions {
  CalibrateOptions base;
  std::string axis = "dimensions";
  std::vector<double> values;
  std::string out = "sweep.dat";
};

int cmd_sweep(const SweepOptions& opt) {
  static const std::map<std::string, SweepAxis> axes = {
      {"dimensions", SweepAxis::Dimensions},
      {"particles", SweepAxis::Particles},
      {"interval", SweepAxis::IntervalLength},
      {"delta", SweepAxis::Delta},
  };
  const SweepAxis axis = axes.at(opt.axis);
  const std::vector<SweepPoint> points =
      scaling_sweep(axis, opt.values, to_calibration_config(opt.base));
  for (const SweepPoint& point : points)
    std::printf("%-12s %-14g mean %.3f  std %.3f\n", opt.axis.c_str(),
                point.value, point.result.sigma_stag_mean,
                point.result.sigma_stag_std);
  emit_plot_data(points, axis, opt.out);
  std::printf("plot data written to %s\n", opt.out.c_str());
  return 0;
}

struct VerifyOptions {
  std::string lemma = "all";
  int particles = 5;
  int dimensions = 15;
  double delta = 1e-7;
  double chi = 0.72984;
  // Recovery events get scarce at high chi (slow contraction), so only the
  // running chi is checked by default; other values need --samples and
  // --max-iterations sized to match.
  std::vector<double> recovery_chis = {0.72984};
  std::int64_t samples = 1000000;
  std::int64_t max_iterations = 5000000;
  std::uint64_t seed = 7130;
  std::string out;
};

const char* lemma_name(Lemma lemma) {
  switch (lemma) {
    case Lemma::Lockout: return "lockout";
    case Lemma::HalfProbability: return "half_probability";
    case Lemma::GeometricRuns: return "geometric_runs";
    case Lemma::RecoveryBound: return "recovery_bound";
    case Lemma::Theorem: return "theorem";
  }
  return "?";
}

json lemma_to_json(const LemmaReport& report) {
  json j{{"lemma", lemma_name(report.lemma)},
         {"samples", report.samples},
         {"statistic", report.statistic},
         {"expected", report.expected},
         {"standard_error", report.standard_error},
         {"pass", report.pass},
         {"vacuous", report.vacuous},
         {"details", report.details}};
  if (report.lemma == Lemma::GeometricRuns) j["p_value"] = report.p_value;
  if (!report.per_dimension_statistic.empty())
    j["per_dimension_statistic"] = report.per_dimension_statistic;
  if (!report.case_counts.empty()) {
    j["case_counts"] = report.case_counts;
    j["case_statistic"] = report.case_statistic;
  }
  if (!report.histogram_observed.empty()) {
    j["histogram_observed"] = report.histogram_observed;
    j["histogram_expected"] = report.histogram_expected;
  }
  return j;
}

json theorem_to_json(const TheoremReport& report) {
  return json{{"lemma", "theorem"},
              {"pass", report.pass},
              {"completed_runs", report.completed_runs},
              {"completed_gaps", report.completed_gaps},
              {"short_gaps", report.short_gaps},
              {"lockout_violations", report.lockout_violations},
              {"recovery_zero_count", report.recovery_zero_count},
              {"mean_run_length", report.mean_run_length},
              {"mean_recovery_length", report.mean_recovery_length},
              {"run_chi_square", report.run_chi_square},
              {"run_p_value", report.run_p_value},
              {"attractor_updates", report.attractor_updates},
              {"streams_start_forced", report.streams_start_forced},
              {"details", report.details}};
}

int cmd_verify(const VerifyOptions& opt) {
  VerifierConfig config;
  config.num_particles = opt.particles;
  config.num_dimensions = opt.dimensions;
  config.delta = opt.delta;
  config.chi = opt.chi;
  config.seed = opt.seed;
  config.min_samples = opt.samples;
  config.max_iterations = opt.max_iterations;

  const bool all = opt.lemma == "all";
  json reports = json::array();
  int failures = 0;
  auto add = [&](const json& j) {
    const bool pass = j.at("pass").get<bool>();
    failures += pass ? 0 : 1;
    std::printf("%-18s %s  %s\n", j.at("lemma").get<std::string>().c_str(),
                pass ? "pass" : "FAIL",
                j.value("details", std::string()).c_str());
    reports.push_back(j);
  };
  try {
    if (all || opt.lemma == "lockout") add(lemma_to_json(verify_lockout(config)));
    if (all || opt.lemma == "halfprob")
      add(lemma_to_json(verify_half_probability(config)));
    if (all || opt.lemma == "runs")
      add(lemma_to_json(verify_geometric(config)));
    if (all || opt.lemma == "recovery")
      for (const LemmaReport& report :
           verify_recovery_bound(config, opt.recovery_chis))
        add(lemma_to_json(report));
    if (all || opt.lemma == "theorem")
      add(theorem_to_json(verify_theorem(config)));
  } catch (const InsufficientSamplesError& error) {
    ++failures;
    reports.push_back(json{{"lemma", opt.lemma},
                           {"pass", false},
                           {"details", error.what()},
                           {"collected", error.collected},
                           {"required", error.required}});
    std::printf("verification starved: %s (%lld of %lld samples)\n",
                error.what(), static_cast<long long>(error.collected),
                static_cast<long long>(error.required));
  }
  if (!opt.out.empty())
    io::write_text_file(opt.out,
                        json{{"reports", reports}}.dump(2) + "\n");
  return failures == 0 ? 0 : 1;
}

int cmd_summarize(const std::string& in, const std::string& out) {
  const ExperimentResult result = load_experiment(in);
  const std::string text = to_json_string(summarize(result.records));
  std::fputs(text.c_str(), stdout);
  if (!out.empty()) io::write_text_file(out, text);
  return 0;
}

struct PlotOptions {
  std::string kind = "forcing";
  std::string in;
  std::string out = "plots";
  // Histogram sampling parameters; the histogram runs its own
  // calibration-regime session.
  int particles = 5;
  int dimensions = 15;
  double delta = 1e-7;
  std::int64_t iterations = 1000000;
  int bins = 201;
  double half_range = 10.0;
  std::uint64_t seed = 20240901;
};

int cmd_plotdata(const PlotOptions& opt) {
  if (opt.kind == "forcing") {
    if (opt.in.empty())
      throw CLI::ValidationError("plotdata", "--kind forcing needs --in");
    emit_plot_data(load_experiment(opt.in), opt.out);
    std::printf("forcing series written to %s/\n", opt.out.c_str());
    return 0;
  }
  CalibrationConfig config;
  config.num_particles = opt.particles;
  config.num_dimensions = opt.dimensions;
  config.delta = opt.delta;
  config.master_seed = opt.seed;
  HistogramConfig histogram;
  histogram.bins = opt.bins;
  histogram.half_range_in_delta = opt.half_range;
  histogram.iterations = opt.iterations;
  const DistanceHistogram result = distance_histogram(config, histogram);
  emit_plot_data(result, opt.out);
  std::printf("histogram written to %s (mean %.3g, %lld samples)\n",
              opt.out.c_str(), result.sample_mean,
              static_cast<long long>(result.samples));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"forced-step particle swarm optimizer"};
  app.require_subcommand(1);

  RunOptions run;
  CLI::App* run_cmd =
      app.add_subcommand("run", "optimize an objective under a stopping rule");
  run_cmd->add_option("--objective", run.objective,
                      "sphere|hcelliptic|schwefel12|rastrigin|rosenbrock");
  run_cmd->add_option("--particles", run.particles, "swarm size");
  run_cmd->add_option("--dimensions", run.dimensions, "search space dimension");
  run_cmd->add_option("--delta", run.delta, "forcing threshold");
  run_cmd->add_option("--mode", run.mode, "classical|forced")
      ->check(CLI::IsMember({"classical", "forced"}));
  run_cmd->add_option("--mu", run.mu, "stopping window length");
  run_cmd->add_option("--gamma", run.gamma, "stopping tolerance");
  CLI::Option* kappa_opt = run_cmd->add_option(
      "--kappa", run.kappa, "partial-stop dimension count in [1, D]");
  run_cmd->add_option("--sigma-stag", run.sigma_stag,
                      "stagnation frequency: integer or calibration.json path");
  run_cmd->add_option("--budget", run.budget, "iteration cap");
  run_cmd->add_option("--replicates", run.replicates, "independent runs");
  run_cmd->add_option("--seed", run.seed, "master seed");
  run_cmd->add_option("--log-every", run.log_every,
                      "telemetry window for budget runs (0 = default)");
  run_cmd->add_option("--window-mode", run.window_mode, "sliding|cumulative")
      ->check(CLI::IsMember({"sliding", "cumulative"}));
  run_cmd->add_option("--out", run.out, "output directory");

  CalibrateOptions cal;
  CLI::App* cal_cmd = app.add_subcommand(
      "calibrate", "measure the stagnation forcing frequency");
  cal_cmd->add_option("--objective", cal.objective, "objective name");
  cal_cmd->add_option("--particles", cal.particles, "swarm size");
  cal_cmd->add_option("--dimensions", cal.dimensions, "dimension");
  cal_cmd->add_option("--mu", cal.mu, "window length");
  cal_cmd->add_option("--delta", cal.delta, "forcing threshold");
  cal_cmd->add_option("--trials", cal.trials, "independent trials");
  cal_cmd->add_option("--intervals", cal.intervals, "measured windows per trial");
  cal_cmd->add_option("--warmup", cal.warmup, "discarded leading windows");
  cal_cmd->add_option("--seed", cal.seed, "master seed");
  cal_cmd->add_option("--out", cal.out, "output directory");

  SweepOptions sweep;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "repeat the calibration along one axis");
  sweep_cmd->add_option("--axis", sweep.axis,
                        "dimensions|particles|interval|delta")
      ->check(CLI::IsMember({"dimensions", "particles", "interval", "delta"}));
  sweep_cmd->add_option("--values", sweep.values, "axis values")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--objective", sweep.base.objective, "objective name");
  sweep_cmd->add_option("--particles", sweep.base.particles, "swarm size");
  sweep_cmd->add_option("--dimensions", sweep.base.dimensions, "dimension");
  sweep_cmd->add_option("--mu", sweep.base.mu, "window length");
  sweep_cmd->add_option("--delta", sweep.base.delta, "forcing threshold");
  sweep_cmd->add_option("--trials", sweep.base.trials, "trials per point");
  sweep_cmd->add_option("--intervals", sweep.base.intervals,
                        "measured windows per trial");
  sweep_cmd->add_option("--warmup", sweep.base.warmup,
                        "discarded leading windows");
  sweep_cmd->add_option("--seed", sweep.base.seed, "base master seed");
  sweep_cmd->add_option("--out", sweep.out, "plot data file");

  VerifyOptions verify;
  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "check the pulsation phase structure statistically");
  verify_cmd->add_option("--lemma", verify.lemma,
                         "lockout|halfprob|runs|recovery|theorem|all")
      ->check(CLI::IsMember(
          {"lockout", "halfprob", "runs", "recovery", "theorem", "all"}));
  verify_cmd->add_option("--particles", verify.particles, "swarm size");
  verify_cmd->add_option("--dimensions", verify.dimensions, "dimension");
  verify_cmd->add_option("--delta", verify.delta, "forcing threshold");
  verify_cmd->add_option("--chi", verify.chi, "inertia weight");
  verify_cmd->add_option("--recovery-chis", verify.recovery_chis,
                         "chi values for the recovery bound")
      ->delimiter(',');
  verify_cmd->add_option("--samples", verify.samples,
                         "conditioning events per verifier");
  verify_cmd->add_option("--max-iterations", verify.max_iterations,
                         "bail-out cap per session");
  verify_cmd->add_option("--seed", verify.seed, "session seed");
  verify_cmd->add_option("--out", verify.out, "JSON report path");

  std::string summarize_in, summarize_out;
  CLI::App* summarize_cmd =
      app.add_subcommand("summarize", "summary statistics of a saved run");
  summarize_cmd->add_option("--in", summarize_in, "experiment directory")
      ->required();
  summarize_cmd->add_option("--out", summarize_out, "JSON output path");

  PlotOptions plot;
  CLI::App* plot_cmd =
      app.add_subcommand("plotdata", "emit plot-ready data files");
  plot_cmd->add_option("--kind", plot.kind, "forcing|histogram")
      ->check(CLI::IsMember({"forcing", "histogram"}));
  plot_cmd->add_option("--in", plot.in, "experiment directory (forcing)");
  plot_cmd->add_option("--out", plot.out, "output directory or file");
  plot_cmd->add_option("--particles", plot.particles, "swarm size (histogram)");
  plot_cmd->add_option("--dimensions", plot.dimensions,
                       "dimension (histogram)");
  plot_cmd->add_option("--delta", plot.delta, "forcing threshold (histogram)");
  plot_cmd->add_option("--iterations", plot.iterations,
                       "sampling iterations (histogram)");
  plot_cmd->add_option("--bins", plot.bins, "bin count (histogram)");
  plot_cmd->add_option("--half-range", plot.half_range,
                       "bin grid half width in units of delta (histogram)");
  plot_cmd->add_option("--seed", plot.seed, "session seed (histogram)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(run, kappa_opt->count() > 0);
    if (cal_cmd->parsed()) return cmd_calibrate(cal);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep);
    if (verify_cmd->parsed()) return cmd_verify(verify);
    if (summarize_cmd->parsed())
      return cmd_summarize(summarize_in, summarize_out);
    if (plot_cmd->parsed()) return cmd_plotdata(plot);
  } catch (const std::exception& error) {
    std::fprintf(stderr, "error: %s\n", error.what());
    return 1;
  }
  return 0;
}
