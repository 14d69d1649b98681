#pragma once

// Experiment orchestration: replicated runs with stopping rules, telemetry
// logging, persistence (JSON metadata + CSV series), summaries, and plot
// data emission.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fpso/benchmarks.hpp"
#include "fpso/calibration.hpp"
#include "fpso/stopping.hpp"
#include "fpso/swarm.hpp"
#include "fpso/telemetry.hpp"

namespace fpso {

struct ExperimentConfig {
  ObjectiveName objective = ObjectiveName::Sphere;
  SwarmConfig swarm;
  StoppingRule rule = BudgetRule{1000};
  // Extra iteration cap combined first-to-fire with the rule; on a shared
  // boundary the frequency rule wins.
  std::optional<std::int64_t> budget;
  int replicates = 1;
  std::uint64_t master_seed = 1;
  // Telemetry window for budget-only runs (0 picks 10000).  Frequency rules
  // log at their own window boundaries, so log_every must then be 0 or mu.
  std::int64_t log_every = 0;
  WindowMode window_mode = WindowMode::Sliding;

  void validate() const;
  std::int64_t telemetry_window() const;
};

struct WindowRow {
  std::int64_t window_index = 0;
  std::int64_t iteration = 0;  // window end
  double best_value = 0.0;
  double gradient_norm = 0.0;
  std::int64_t sigma_total = 0;
  VectorXi64 sigma_per_dimension;
};

struct RunRecord {
  int replicate = 0;
  TerminationReport termination;
  std::vector<WindowRow> series;
  double best_value = 0.0;
  double gradient_norm = 0.0;
  Eigen::VectorXd best_position;
  double wall_seconds = 0.0;  // not part of any CSV, so reruns stay byte-identical
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<RunRecord> records;
};

// Replicate k runs on RNG substream k of the master seed; replicates may
// execute in parallel (FPSO_THREADS) without changing any output.
ExperimentResult run_experiment(const ExperimentConfig& config);

struct SummaryStats {
  int count = 0;
  double iteration_median = 0.0;
  double iteration_std = 0.0;
  double iteration_geometric_mean = 0.0;
  int iteration_geomean_excluded = 0;
  double gradient_median = 0.0;
  double gradient_std = 0.0;
  double gradient_geometric_mean = 0.0;
  int gradient_geomean_excluded = 0;
};

SummaryStats summarize(const std::vector<RunRecord>& records);

// Persistence: config.json, run_###.json + run_###_series.csv per record,
// and telemetry.csv with one row per (run, window).
void save_experiment(const std::string& dir, const ExperimentResult& result);
ExperimentResult load_experiment(const std::string& dir);

std::string to_json_string(const ExperimentConfig& config);
ExperimentConfig experiment_config_from_json(const std::string& text);
std::string to_json_string(const SummaryStats& summary);

bool equals(const ExperimentConfig& a, const ExperimentConfig& b);
bool equals(const RunRecord& a, const RunRecord& b);
bool equals(const ExperimentResult& a, const ExperimentResult& b);

enum class PlotKind {
  ForcingVsIteration,
  FrequencyVsD,
  FrequencyVsN,
  FrequencyVsInterval,
  DistanceHistogram,
};

// Whitespace-separated columns with '#' header comments, one file per
// plot.  Forcing-vs-iteration writes one file per record with columns
// window index, per-dimension sigma, best value.
void emit_plot_data(const ExperimentResult& result, const std::string& out_dir);
// Sweep curves: axis value, normalized frequency mean, trial std.
void emit_plot_data(const std::vector<SweepPoint>& sweep, SweepAxis axis,
                    const std::string& path);
void emit_plot_data(const DistanceHistogram& histogram,
                    const std::string& path);

// Calibration persistence used by the CLI and the sigma-stag file source.
void save_calibration(const std::string& dir, const CalibrationResult& result);
std::int64_t load_sigma_stag(const std::string& json_path);

}  // namespace fpso
