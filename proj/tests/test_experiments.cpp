#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "fpso/experiments.hpp"
#include "fpso/io.hpp"

using namespace fpso;

namespace {

ExperimentConfig desk_budget_config() {
  ExperimentConfig config;
  config.objective = ObjectiveName::Sphere;
  config.swarm.num_particles = 3;
  config.swarm.num_dimensions = 3;
  config.rule = BudgetRule{250};
  config.replicates = 3;
  config.master_seed = 99;
  config.log_every = 50;
  return config;
}

RunRecord record_with(std::int64_t iteration, double gradient) {
  RunRecord record;
  record.termination.iteration = iteration;
  record.gradient_norm = gradient;
  record.best_position = Eigen::VectorXd::Zero(2);
  return record;
}

std::string slurp_dir(const std::string& dir, bool csv_only = false) {
  std::vector<std::filesystem::path> paths;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (!csv_only || entry.path().extension() == ".csv")
      paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());
  std::string blob;
  for (const auto& path : paths) {
    blob += path.filename().string();
    blob += '\n';
    blob += io::read_text_file(path.string());
  }
  return blob;
}

std::string temp_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("fpso_test_" + tag);
  std::filesystem::remove_all(dir);
  return dir.string();
}

}  // namespace

TEST_CASE("summary statistics on crafted records") {
  std::vector<RunRecord> records = {record_with(1, 1.0), record_with(2, 4.0),
                                    record_with(3, 0.0)};
  const SummaryStats stats = summarize(records);
  CHECK(stats.count == 3);
  CHECK(stats.iteration_median == 2.0);
  CHECK(stats.iteration_std == doctest::Approx(1.0));
  CHECK(stats.iteration_geometric_mean ==
        doctest::Approx(std::cbrt(6.0)).epsilon(1e-12));
  CHECK(stats.iteration_geomean_excluded == 0);
  // The zero gradient is excluded from the geometric mean, not from the rest.
  CHECK(stats.gradient_median == 1.0);
  CHECK(stats.gradient_geometric_mean == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(stats.gradient_geomean_excluded == 1);

  // Even counts take the lower middle, keeping medians at observed values.
  const SummaryStats even = summarize({record_with(1, 2.0), record_with(4, 2.0)});
  CHECK(even.iteration_median == 1.0);
  CHECK(even.gradient_std == 0.0);
  CHECK_THROWS_AS(summarize({}), std::invalid_argument);
}

TEST_CASE("experiment config validation") {
  ExperimentConfig config = desk_budget_config();
  config.replicates = 0;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);

  config = desk_budget_config();
  config.rule = FullStopRule{1000, 10, 100};
  config.window_mode = WindowMode::Cumulative;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);

  config = desk_budget_config();
  config.rule = FullStopRule{1000, 10, 100};
  config.log_every = 50;  // frequency rules log at mu, nothing else
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config.log_every = 100;
  CHECK_NOTHROW(config.validate());
  config.log_every = 0;
  CHECK_NOTHROW(config.validate());

  config = desk_budget_config();
  config.swarm.mode = Mode::Classical;
  config.rule = FullStopRule{1000, 10, 100};
  config.log_every = 0;
  config.budget.reset();  // classical runs may never stagnate
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config.budget = 5000;
  CHECK_NOTHROW(config.validate());

  config = desk_budget_config();
  config.log_every = -1;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}

TEST_CASE("telemetry window selection") {
  ExperimentConfig config = desk_budget_config();
  CHECK(config.telemetry_window() == 50);
  config.log_every = 0;
  CHECK(config.telemetry_window() == 10000);
  config.rule = PartialStopRule{1000, 10, 200, 2.0};
  CHECK(config.telemetry_window() == 200);
}

TEST_CASE("budget run telemetry and termination") {
  const ExperimentConfig config = desk_budget_config();
  const ExperimentResult result = run_experiment(config);
  REQUIRE(static_cast<int>(result.records.size()) == config.replicates);
  for (int k = 0; k < config.replicates; ++k) {
    const RunRecord& record = result.records[static_cast<std::size_t>(k)];
    CHECK(record.replicate == k);
    CHECK(record.termination.cause == TerminationCause::Budget);
    CHECK(record.termination.iteration == 250);
    CHECK(record.termination.threshold == 250.0);
    REQUIRE(record.series.size() == 5);
    for (std::size_t w = 0; w < record.series.size(); ++w) {
      const WindowRow& row = record.series[w];
      CHECK(row.window_index == static_cast<std::int64_t>(w));
      CHECK(row.iteration == 50 * static_cast<std::int64_t>(w + 1));
      CHECK(row.sigma_per_dimension.size() == 3);
      CHECK(row.sigma_per_dimension.sum() == row.sigma_total);
      CHECK(row.gradient_norm >= 0.0);
      if (w > 0) CHECK(row.best_value <= record.series[w - 1].best_value);
    }
    CHECK(record.best_value == record.series.back().best_value);
    CHECK(record.best_position.size() == 3);
    CHECK(record.gradient_norm >= 0.0);
    CHECK(record.wall_seconds >= 0.0);
  }
}

TEST_CASE("replicates depend on the master seed, not on each other") {
  ExperimentConfig config = desk_budget_config();
  const ExperimentResult a = run_experiment(config);
  const ExperimentResult b = run_experiment(config);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    CHECK(a.records[k].best_value == b.records[k].best_value);
    CHECK(a.records[k].best_position == b.records[k].best_position);
  }

  config.master_seed = 100;
  const ExperimentResult c = run_experiment(config);
  CHECK(c.records[0].best_value != a.records[0].best_value);

  // A single-replicate run reproduces replicate 0 of the batch.
  config.master_seed = 99;
  config.replicates = 1;
  const ExperimentResult solo = run_experiment(config);
  CHECK(solo.records[0].best_value == a.records[0].best_value);
}

TEST_CASE("save, load, and byte-stable rerun") {
  const ExperimentConfig config = desk_budget_config();
  const ExperimentResult result = run_experiment(config);

  const std::string dir_a = temp_dir("exp_a");
  const std::string dir_b = temp_dir("exp_b");
  save_experiment(dir_a, result);
  save_experiment(dir_b, result);
  CHECK(slurp_dir(dir_a) == slurp_dir(dir_b));

  const ExperimentResult loaded = load_experiment(dir_a);
  CHECK(equals(loaded.config, result.config));
  REQUIRE(loaded.records.size() == result.records.size());
  for (std::size_t k = 0; k < result.records.size(); ++k)
    CHECK(equals(loaded.records[k], result.records[k]));
  CHECK(equals(loaded, result));

  // A fresh run of the same config reproduces every CSV byte; the JSON
  // metadata differs only in wall time.
  const std::string dir_c = temp_dir("exp_c");
  save_experiment(dir_c, run_experiment(config));
  CHECK(slurp_dir(dir_a, true) == slurp_dir(dir_c, true));

  std::filesystem::remove_all(dir_a);
  std::filesystem::remove_all(dir_b);
  std::filesystem::remove_all(dir_c);
}

TEST_CASE("cumulative windows with a budget rule") {
  ExperimentConfig config = desk_budget_config();
  config.window_mode = WindowMode::Cumulative;
  config.replicates = 1;
  const ExperimentResult result = run_experiment(config);
  const std::vector<WindowRow>& series = result.records[0].series;
  REQUIRE(series.size() == 5);
  for (std::size_t w = 1; w < series.size(); ++w)
    CHECK(series[w].sigma_total >= series[w - 1].sigma_total);
}

TEST_CASE("full stop fires at a window boundary once stagnation sets in") {
  CalibrationConfig calibration;
  calibration.num_particles = 3;
  calibration.num_dimensions = 2;
  calibration.mu = 200;
  calibration.trials = 5;
  calibration.intervals_per_trial = 3;
  calibration.warmup_intervals = 1;
  calibration.master_seed = 808;
  const CalibrationResult stagnation = calibrate(calibration);

  // Allow trial noise plus window-to-window fluctuation below the mean.
  std::int64_t gamma = std::llround(3.0 * stagnation.sigma_stag_std +
                                    3.0 * std::sqrt(stagnation.sigma_stag_mean));
  gamma = std::max<std::int64_t>(1, std::min(gamma, stagnation.sigma_stag - 1));

  ExperimentConfig config;
  config.objective = ObjectiveName::Sphere;
  config.swarm.num_particles = 3;
  config.swarm.num_dimensions = 2;
  config.rule = FullStopRule{stagnation.sigma_stag, gamma, 200};
  config.budget = 40000;
  config.replicates = 2;
  config.master_seed = 177;
  const ExperimentResult result = run_experiment(config);
  for (const RunRecord& record : result.records) {
    CHECK(record.termination.cause == TerminationCause::FullStop);
    CHECK(record.termination.iteration % 200 == 0);
    CHECK(record.termination.threshold ==
          static_cast<double>(stagnation.sigma_stag - gamma));
    CHECK(static_cast<double>(record.termination.triggering_sigma) >=
          record.termination.threshold);
    CHECK(record.series.back().iteration == record.termination.iteration);
  }
}

TEST_CASE("frequency rule wins a shared boundary with the budget") {
  // delta = 201 with the +-100 start box forces every first-iteration move:
  // velocities start at 0 and no particle sits farther than 200 from the
  // incumbent, so the first window always carries sigma >= 1.
  ExperimentConfig config;
  config.objective = ObjectiveName::Sphere;
  config.swarm.num_particles = 2;
  config.swarm.num_dimensions = 1;
  config.swarm.delta = 201.0;
  config.rule = PartialStopRule{2, 1, 50, 1.0};
  config.budget = 50;
  config.replicates = 2;
  config.master_seed = 31;
  const ExperimentResult tie = run_experiment(config);
  for (const RunRecord& record : tie.records) {
    CHECK(record.termination.cause == TerminationCause::PartialStop);
    CHECK(record.termination.iteration == 50);
    CHECK(record.termination.threshold == doctest::Approx(1.0));
    CHECK(record.termination.triggering_sigma >= 1);
  }

  config.budget = 49;
  const ExperimentResult early = run_experiment(config);
  for (const RunRecord& record : early.records) {
    CHECK(record.termination.cause == TerminationCause::Budget);
    CHECK(record.termination.iteration == 49);
  }
}

TEST_CASE("config json round trip") {
  ExperimentConfig config = desk_budget_config();
  config.window_mode = WindowMode::Cumulative;
  CHECK(equals(experiment_config_from_json(to_json_string(config)), config));

  config = desk_budget_config();
  config.rule = FullStopRule{318350, 1350, 50000};
  config.log_every = 0;
  config.budget = 15000000;
  config.swarm.mode = Mode::Classical;
  CHECK(equals(experiment_config_from_json(to_json_string(config)), config));

  config = desk_budget_config();
  config.rule = PartialStopRule{318350, 1350, 50000, 8.0};
  config.log_every = 0;
  config.budget.reset();
  config.objective = ObjectiveName::Rosenbrock;
  config.swarm.num_dimensions = 30;
  CHECK(equals(experiment_config_from_json(to_json_string(config)), config));
}

TEST_CASE("plot data emission") {
  ExperimentConfig config = desk_budget_config();
  config.replicates = 2;
  const ExperimentResult result = run_experiment(config);
  const std::string dir = temp_dir("plot");
  std::filesystem::create_directories(dir);
  emit_plot_data(result, dir);
  for (int k = 0; k < 2; ++k) {
    char name[64];
    std::snprintf(name, sizeof(name), "forcing_vs_iteration_run_%03d.dat", k);
    const std::string text = io::read_text_file(dir + "/" + name);
    CHECK(text.find('#') == 0);
    int rows = 0;
    int comments = 0;
    std::size_t start = 0;
    while (start < text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string::npos) end = text.size();
      const std::string line = text.substr(start, end - start);
      if (!line.empty() && line[0] == '#') {
        ++comments;
      } else if (!line.empty()) {
        ++rows;
        // iteration, one sigma column per dimension, best value
        int fields = 0;
        bool in_field = false;
        for (char c : line) {
          const bool space = (c == ' ' || c == '\t');
          if (!space && !in_field) ++fields;
          in_field = !space;
        }
        CHECK(fields == 1 + 3 + 1);
      }
      start = end + 1;
    }
    CHECK(comments >= 1);
    CHECK(rows == 5);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("calibration persistence and the sigma-stag file source") {
  CalibrationConfig config;
  config.num_particles = 3;
  config.num_dimensions = 2;
  config.mu = 150;
  config.trials = 4;
  config.intervals_per_trial = 3;
  config.warmup_intervals = 1;
  config.master_seed = 555;
  const CalibrationResult result = calibrate(config);

  const std::string dir = temp_dir("calib");
  save_calibration(dir, result);
  CHECK(load_sigma_stag(dir + "/calibration.json") == result.sigma_stag);
  const std::string windows =
      io::read_text_file(dir + "/calibration_windows.csv");
  CHECK(windows.find("trial") != std::string::npos);
  std::filesystem::remove_all(dir);
}
