#include "fpso/experiments.hpp"

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>

#include <json.hpp>

#include "fpso/io.hpp"
#include "fpso/parallel.hpp"
#include "fpso/stats.hpp"

namespace fpso {

namespace fs = std::filesystem;
using nlohmann::json;

void ExperimentConfig::validate() const {
  swarm.validate();
  fpso::validate(rule, swarm.num_dimensions);
  if (replicates < 1) throw std::invalid_argument("experiment needs replicates");
  if (log_every < 0) throw std::invalid_argument("log_every must be >= 0");
  if (budget && *budget < 1) throw std::invalid_argument("budget must be positive");
  const std::int64_t mu = rule_window_length(rule);
  if (mu > 0) {
    if (window_mode != WindowMode::Sliding)
      throw std::invalid_argument(
          "frequency rules need sliding windows; cumulative mode is for "
          "budget runs");
    if (log_every != 0 && log_every != mu)
      throw std::invalid_argument(
          "frequency rules log at their mu boundaries; log_every must be 0 "
          "or mu");
    if (swarm.mode == Mode::Classical && !budget)
      throw std::invalid_argument(
          "a frequency rule cannot fire in classical mode; attach a budget");
  }
}

std::int64_t ExperimentConfig::telemetry_window() const {
  const std::int64_t mu = rule_window_length(rule);
  if (mu > 0) return mu;
  return log_every > 0 ? log_every : 10000;
}

namespace {

RunRecord run_one(const ExperimentConfig& config, const Objective& objective,
                  int replicate) {
  const auto start_time = std::chrono::steady_clock::now();
  SwarmState state = initialize(config.swarm, objective,
                                Rng::substream(config.master_seed, replicate));
  const std::int64_t window = config.telemetry_window();
  const bool frequency_rule = rule_window_length(config.rule) > 0;
  WindowTracker tracker(config.swarm.num_dimensions, window,
                        config.window_mode);
  RunRecord record;
  record.replicate = replicate;
  std::vector<MoveOutcome> outcomes;
  std::optional<TerminationReport> termination;
  while (!termination) {
    step_iteration(state, objective, outcomes);
    for (const MoveOutcome& outcome : outcomes)
      tracker.record(outcome, state.iteration - 1);
    if (auto finished = tracker.on_iteration_complete(state.iteration)) {
      WindowRow row;
      row.window_index = tracker.windows_emitted() - 1;
      row.iteration = state.iteration;
      row.best_value = state.global_value;
      row.gradient_norm = objective.gradient(state.global_attractor).norm();
      row.sigma_total = finished->total;
      row.sigma_per_dimension = finished->per_dimension;
      record.series.push_back(std::move(row));
      if (frequency_rule)
        termination = evaluate(config.rule, *finished, state.iteration,
                               config.swarm.num_dimensions);
    }
    if (!termination && !frequency_rule)
      termination = evaluate(config.rule, tracker.current(), state.iteration,
                             config.swarm.num_dimensions);
    if (!termination && config.budget && state.iteration >= *config.budget)
      termination =
          TerminationReport{TerminationCause::Budget, state.iteration,
                            tracker.current().total,
                            static_cast<double>(*config.budget)};
  }
  record.termination = *termination;
  record.best_value = state.global_value;
  record.best_position = state.global_attractor;
  record.gradient_norm = objective.gradient(state.global_attractor).norm();
  record.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                    start_time)
          .count();
  return record;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const Objective objective =
      make_objective(config.objective, config.swarm.num_dimensions);
  ExperimentResult result;
  result.config = config;
  result.records.resize(config.replicates);
  parallel_for_index(config.replicates, thread_cap(), [&](int r) {
    result.records[r] = run_one(config, objective, r);
  });
  return result;
}

SummaryStats summarize(const std::vector<RunRecord>& records) {
  if (records.empty()) throw std::invalid_argument("summary of no records");
  std::vector<double> iterations, gradients;
  iterations.reserve(records.size());
  gradients.reserve(records.size());
  for (const RunRecord& record : records) {
    iterations.push_back(static_cast<double>(record.termination.iteration));
    gradients.push_back(record.gradient_norm);
  }
  SummaryStats summary;
  summary.count = static_cast<int>(records.size());
  summary.iteration_median = stats::median(iterations);
  summary.iteration_std = stats::sample_std(iterations);
  const auto iter_gm = stats::geometric_mean(iterations);
  summary.iteration_geometric_mean = iter_gm.value;
  summary.iteration_geomean_excluded = iter_gm.excluded;
  summary.gradient_median = stats::median(gradients);
  summary.gradient_std = stats::sample_std(gradients);
  const auto grad_gm = stats::geometric_mean(gradients);
  summary.gradient_geometric_mean = grad_gm.value;
  summary.gradient_geomean_excluded = grad_gm.excluded;
  return summary;
}

namespace {

std::string mode_name(Mode mode) {
  return mode == Mode::Forced ? "forced" : "classical";
}

Mode parse_mode(const std::string& name) {
  if (name == "forced") return Mode::Forced;
  if (name == "classical") return Mode::Classical;
  throw std::invalid_argument("unknown mode: " + name);
}

std::string window_mode_name(WindowMode mode) {
  return mode == WindowMode::Sliding ? "sliding" : "cumulative";
}

WindowMode parse_window_mode(const std::string& name) {
  if (name == "sliding") return WindowMode::Sliding;
  if (name == "cumulative") return WindowMode::Cumulative;
  throw std::invalid_argument("unknown window mode: " + name);
}

json swarm_to_json(const SwarmConfig& swarm) {
  return json{{"num_particles", swarm.num_particles},
              {"num_dimensions", swarm.num_dimensions},
              {"chi", swarm.chi},
              {"c1", swarm.c1},
              {"c2", swarm.c2},
              {"delta", swarm.delta},
              {"mode", mode_name(swarm.mode)}};
}

SwarmConfig swarm_from_json(const json& j) {
  SwarmConfig swarm;
  swarm.num_particles = j.at("num_particles").get<int>();
  swarm.num_dimensions = j.at("num_dimensions").get<int>();
  swarm.chi = j.at("chi").get<double>();
  swarm.c1 = j.at("c1").get<double>();
  swarm.c2 = j.at("c2").get<double>();
  swarm.delta = j.at("delta").get<double>();
  swarm.mode = parse_mode(j.at("mode").get<std::string>());
  return swarm;
}

json rule_to_json(const StoppingRule& rule) {
  if (const auto* budget = std::get_if<BudgetRule>(&rule))
    return json{{"type", "budget"}, {"max_iterations", budget->max_iterations}};
  if (const auto* full = std::get_if<FullStopRule>(&rule))
    return json{{"type", "full_stop"},
                {"sigma_stag", full->sigma_stag},
                {"gamma", full->gamma},
                {"mu", full->mu}};
  const auto& partial = std::get<PartialStopRule>(rule);
  return json{{"type", "partial_stop"},
              {"sigma_stag", partial.sigma_stag},
              {"gamma", partial.gamma},
              {"mu", partial.mu},
              {"kappa", partial.kappa}};
}

StoppingRule rule_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "budget")
    return BudgetRule{j.at("max_iterations").get<std::int64_t>()};
  if (type == "full_stop")
    return FullStopRule{j.at("sigma_stag").get<std::int64_t>(),
                        j.at("gamma").get<std::int64_t>(),
                        j.at("mu").get<std::int64_t>()};
  if (type == "partial_stop")
    return PartialStopRule{j.at("sigma_stag").get<std::int64_t>(),
                           j.at("gamma").get<std::int64_t>(),
                           j.at("mu").get<std::int64_t>(),
                           j.at("kappa").get<double>()};
  throw std::invalid_argument("unknown stopping rule type: " + type);
}

json config_to_json(const ExperimentConfig& config) {
  json j{{"objective", to_string(config.objective)},
         {"swarm", swarm_to_json(config.swarm)},
         {"rule", rule_to_json(config.rule)},
         {"replicates", config.replicates},
         {"master_seed", config.master_seed},
         {"log_every", config.log_every},
         {"window_mode", window_mode_name(config.window_mode)}};
  if (config.budget)
    j["budget"] = *config.budget;
  else
    j["budget"] = nullptr;
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig config;
  config.objective = parse_objective(j.at("objective").get<std::string>());
  config.swarm = swarm_from_json(j.at("swarm"));
  config.rule = rule_from_json(j.at("rule"));
  if (!j.at("budget").is_null())
    config.budget = j.at("budget").get<std::int64_t>();
  config.replicates = j.at("replicates").get<int>();
  config.master_seed = j.at("master_seed").get<std::uint64_t>();
  config.log_every = j.at("log_every").get<std::int64_t>();
  config.window_mode =
      parse_window_mode(j.at("window_mode").get<std::string>());
  return config;
}

std::string cause_name(TerminationCause cause) {
  switch (cause) {
    case TerminationCause::Budget: return "budget";
    case TerminationCause::FullStop: return "full_stop";
    case TerminationCause::PartialStop: return "partial_stop";
  }
  throw std::invalid_argument("unknown termination cause");
}

TerminationCause parse_cause(const std::string& name) {
  if (name == "budget") return TerminationCause::Budget;
  if (name == "full_stop") return TerminationCause::FullStop;
  if (name == "partial_stop") return TerminationCause::PartialStop;
  throw std::invalid_argument("unknown termination cause: " + name);
}

json termination_to_json(const TerminationReport& report) {
  return json{{"cause", cause_name(report.cause)},
              {"iteration", report.iteration},
              {"triggering_sigma", report.triggering_sigma},
              {"threshold", report.threshold}};
}

TerminationReport termination_from_json(const json& j) {
  TerminationReport report;
  report.cause = parse_cause(j.at("cause").get<std::string>());
  report.iteration = j.at("iteration").get<std::int64_t>();
  report.triggering_sigma = j.at("triggering_sigma").get<std::int64_t>();
  report.threshold = j.at("threshold").get<double>();
  return report;
}

std::string run_basename(int replicate) {
  char name[32];
  std::snprintf(name, sizeof name, "run_%03d", replicate);
  return name;
}

io::CsvTable series_to_csv(const RunRecord& record, int num_dimensions) {
  io::CsvTable table;
  table.header = {"window_index", "iteration", "best_value", "gradient_norm",
                  "sigma_total"};
  for (int d = 0; d < num_dimensions; ++d)
    table.header.push_back("sigma_d_" + std::to_string(d + 1));
  for (const WindowRow& row : record.series) {
    std::vector<std::string> fields = {
        io::format_int(row.window_index), io::format_int(row.iteration),
        io::format_double(row.best_value), io::format_double(row.gradient_norm),
        io::format_int(row.sigma_total)};
    for (int d = 0; d < num_dimensions; ++d)
      fields.push_back(io::format_int(row.sigma_per_dimension[d]));
    table.rows.push_back(std::move(fields));
  }
  return table;
}

std::vector<WindowRow> series_from_csv(const io::CsvTable& table,
                                       int num_dimensions) {
  std::vector<WindowRow> series;
  for (const auto& fields : table.rows) {
    if (static_cast<int>(fields.size()) != 5 + num_dimensions)
      throw std::runtime_error("series row has the wrong column count");
    WindowRow row;
    row.window_index = std::stoll(fields[0]);
    row.iteration = std::stoll(fields[1]);
    row.best_value = std::stod(fields[2]);
    row.gradient_norm = std::stod(fields[3]);
    row.sigma_total = std::stoll(fields[4]);
    row.sigma_per_dimension.resize(num_dimensions);
    for (int d = 0; d < num_dimensions; ++d)
      row.sigma_per_dimension[d] = std::stoll(fields[5 + d]);
    series.push_back(std::move(row));
  }
  return series;
}

}  // namespace

std::string to_json_string(const ExperimentConfig& config) {
  return config_to_json(config).dump(2) + "\n";
}

ExperimentConfig experiment_config_from_json(const std::string& text) {
  return config_from_json(json::parse(text));
}

std::string to_json_string(const SummaryStats& summary) {
  json j{{"count", summary.count},
         {"iteration_median", summary.iteration_median},
         {"iteration_std", summary.iteration_std},
         {"iteration_geometric_mean", summary.iteration_geometric_mean},
         {"iteration_geomean_excluded", summary.iteration_geomean_excluded},
         {"gradient_median", summary.gradient_median},
         {"gradient_std", summary.gradient_std},
         {"gradient_geometric_mean", summary.gradient_geometric_mean},
         {"gradient_geomean_excluded", summary.gradient_geomean_excluded}};
  return j.dump(2) + "\n";
}

void save_experiment(const std::string& dir, const ExperimentResult& result) {
  fs::create_directories(dir);
  io::write_text_file(dir + "/config.json", to_json_string(result.config));

  io::CsvTable telemetry;
  telemetry.header = {"run_id", "window_index", "window_mode", "sigma_total"};
  for (int d = 0; d < result.config.swarm.num_dimensions; ++d)
    telemetry.header.push_back("sigma_d_" + std::to_string(d + 1));
  const std::string mode = window_mode_name(result.config.window_mode);

  for (const RunRecord& record : result.records) {
    const std::string base = dir + "/" + run_basename(record.replicate);
    json meta{{"replicate", record.replicate},
              {"termination", termination_to_json(record.termination)},
              {"best_value", record.best_value},
              {"gradient_norm", record.gradient_norm},
              {"wall_seconds", record.wall_seconds}};
    json position = json::array();
    for (Eigen::Index i = 0; i < record.best_position.size(); ++i)
      position.push_back(record.best_position[i]);
    meta["best_position"] = position;
    io::write_text_file(base + ".json", meta.dump(2) + "\n");
    io::write_csv(base + "_series.csv",
                  series_to_csv(record, result.config.swarm.num_dimensions));
    for (const WindowRow& row : record.series) {
      std::vector<std::string> fields = {std::to_string(record.replicate),
                                         io::format_int(row.window_index), mode,
                                         io::format_int(row.sigma_total)};
      for (int d = 0; d < result.config.swarm.num_dimensions; ++d)
        fields.push_back(io::format_int(row.sigma_per_dimension[d]));
      telemetry.rows.push_back(std::move(fields));
    }
  }
  io::write_csv(dir + "/telemetry.csv", telemetry);
}

ExperimentResult load_experiment(const std::string& dir) {
  ExperimentResult result;
  result.config =
      experiment_config_from_json(io::read_text_file(dir + "/config.json"));
  const int num_dimensions = result.config.swarm.num_dimensions;
  for (int r = 0;; ++r) {
    const std::string base = dir + "/" + run_basename(r);
    if (!fs::exists(base + ".json")) break;
    const json meta = json::parse(io::read_text_file(base + ".json"));
    RunRecord record;
    record.replicate = meta.at("replicate").get<int>();
    record.termination = termination_from_json(meta.at("termination"));
    record.best_value = meta.at("best_value").get<double>();
    record.gradient_norm = meta.at("gradient_norm").get<double>();
    record.wall_seconds = meta.at("wall_seconds").get<double>();
    const auto& position = meta.at("best_position");
    record.best_position.resize(position.size());
    for (std::size_t i = 0; i < position.size(); ++i)
      record.best_position[i] = position[i].get<double>();
    record.series =
        series_from_csv(io::read_csv(base + "_series.csv"), num_dimensions);
    result.records.push_back(std::move(record));
  }
  return result;
}

namespace {

bool equals(const TerminationReport& a, const TerminationReport& b) {
  return a.cause == b.cause && a.iteration == b.iteration &&
         a.triggering_sigma == b.triggering_sigma && a.threshold == b.threshold;
}

bool equals(const WindowRow& a, const WindowRow& b) {
  return a.window_index == b.window_index && a.iteration == b.iteration &&
         a.best_value == b.best_value && a.gradient_norm == b.gradient_norm &&
         a.sigma_total == b.sigma_total &&
         a.sigma_per_dimension.size() == b.sigma_per_dimension.size() &&
         (a.sigma_per_dimension.array() == b.sigma_per_dimension.array()).all();
}

bool equals(const SwarmConfig& a, const SwarmConfig& b) {
  return a.num_particles == b.num_particles &&
         a.num_dimensions == b.num_dimensions && a.chi == b.chi &&
         a.c1 == b.c1 && a.c2 == b.c2 && a.delta == b.delta &&
         a.mode == b.mode && a.fault == b.fault;
}

}  // namespace

bool equals(const ExperimentConfig& a, const ExperimentConfig& b) {
  return a.objective == b.objective && equals(a.swarm, b.swarm) &&
         a.rule == b.rule && a.budget == b.budget &&
         a.replicates == b.replicates && a.master_seed == b.master_seed &&
         a.log_every == b.log_every && a.window_mode == b.window_mode;
}

bool equals(const RunRecord& a, const RunRecord& b) {
  if (a.replicate != b.replicate || !equals(a.termination, b.termination) ||
      a.best_value != b.best_value || a.gradient_norm != b.gradient_norm ||
      a.wall_seconds != b.wall_seconds ||
      a.best_position.size() != b.best_position.size() ||
      (a.best_position.array() != b.best_position.array()).any() ||
      a.series.size() != b.series.size())
    return false;
  for (std::size_t i = 0; i < a.series.size(); ++i)
    if (!equals(a.series[i], b.series[i])) return false;
  return true;
}

bool equals(const ExperimentResult& a, const ExperimentResult& b) {
  if (!equals(a.config, b.config) || a.records.size() != b.records.size())
    return false;
  for (std::size_t i = 0; i < a.records.size(); ++i)
    if (!equals(a.records[i], b.records[i])) return false;
  return true;
}

namespace {

void write_plot_file(const std::string& path,
                     const std::vector<std::string>& comment_lines,
                     const std::vector<std::vector<std::string>>& rows) {
  std::string content;
  for (const std::string& line : comment_lines) content += "# " + line + "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) content += ' ';
      content += row[i];
    }
    content += '\n';
  }
  io::write_text_file(path, content);
}

}  // namespace

void emit_plot_data(const ExperimentResult& result, const std::string& out_dir) {
  if (result.records.empty())
    throw std::invalid_argument("plot data needs at least one record");
  fs::create_directories(out_dir);
  const int num_dimensions = result.config.swarm.num_dimensions;
  for (const RunRecord& record : result.records) {
    if (record.series.empty())
      throw std::invalid_argument("record is missing window telemetry");
    std::vector<std::string> comments = {
        "forcing frequency per dimension and best value per window",
        "columns: window_index sigma_d_1..sigma_d_" +
            std::to_string(num_dimensions) + " best_value"};
    std::vector<std::vector<std::string>> rows;
    for (const WindowRow& row : record.series) {
      std::vector<std::string> fields = {io::format_int(row.window_index)};
      for (int d = 0; d < num_dimensions; ++d)
        fields.push_back(io::format_int(row.sigma_per_dimension[d]));
      fields.push_back(io::format_double(row.best_value));
      rows.push_back(std::move(fields));
    }
    write_plot_file(out_dir + "/forcing_vs_iteration_" +
                        run_basename(record.replicate) + ".dat",
                    comments, rows);
  }
}

void emit_plot_data(const std::vector<SweepPoint>& sweep, SweepAxis axis,
                    const std::string& path) {
  if (sweep.empty()) throw std::invalid_argument("plot data needs sweep points");
  std::string label;
  std::vector<std::vector<std::string>> rows;
  for (const SweepPoint& point : sweep) {
    // Normalize like the reference curves: per dimension for the dimension
    // and particle sweeps, per iteration for the interval sweep.
    double scale = 1.0;
    switch (axis) {
      case SweepAxis::Dimensions:
      case SweepAxis::Particles:
        label = "sigma_per_dimension";
        scale = static_cast<double>(point.result.config.num_dimensions);
        break;
      case SweepAxis::IntervalLength:
        label = "sigma_per_iteration";
        scale = static_cast<double>(point.result.config.mu);
        break;
      case SweepAxis::Delta:
        label = "sigma";
        scale = 1.0;
        break;
    }
    rows.push_back({io::format_double(point.value),
                    io::format_double(point.result.sigma_stag_mean / scale),
                    io::format_double(point.result.sigma_stag_std / scale)});
  }
  write_plot_file(path,
                  {"stagnation forcing frequency sweep",
                   "columns: value " + label + "_mean " + label + "_std"},
                  rows);
}

void emit_plot_data(const DistanceHistogram& histogram,
                    const std::string& path) {
  if (histogram.samples == 0)
    throw std::invalid_argument("plot data needs histogram samples");
  std::vector<std::vector<std::string>> rows;
  for (Eigen::Index b = 0; b < histogram.bin_centers.size(); ++b)
    rows.push_back({io::format_double(histogram.bin_centers[b]),
                    io::format_int(histogram.counts[b])});
  write_plot_file(path,
                  {"distance to the global attractor, one particle and "
                   "dimension, sampled once per iteration",
                   "columns: bin_center count"},
                  rows);
}

void save_calibration(const std::string& dir, const CalibrationResult& result) {
  fs::create_directories(dir);
  json j{{"num_particles", result.config.num_particles},
         {"num_dimensions", result.config.num_dimensions},
         {"mu", result.config.mu},
         {"delta", result.config.delta},
         {"chi", result.config.chi},
         {"c1", result.config.c1},
         {"c2", result.config.c2},
         {"trials", result.config.trials},
         {"intervals_per_trial", result.config.intervals_per_trial},
         {"warmup_intervals", result.config.warmup_intervals},
         {"objective", to_string(result.config.objective)},
         {"master_seed", result.config.master_seed},
         {"sigma_stag_mean", result.sigma_stag_mean},
         {"sigma_stag_std", result.sigma_stag_std},
         {"sigma_stag", result.sigma_stag},
         {"attractor_updates", result.attractor_updates}};
  json per_dim = json::array();
  for (Eigen::Index d = 0; d < result.per_dimension_mean.size(); ++d)
    per_dim.push_back(result.per_dimension_mean[d]);
  j["per_dimension_mean"] = per_dim;
  io::write_text_file(dir + "/calibration.json", j.dump(2) + "\n");

  io::CsvTable table;
  table.header = {"trial", "window_index", "sigma_total"};
  for (int t = 0; t < result.config.trials; ++t)
    for (int w = 0; w < result.config.intervals_per_trial; ++w)
      table.rows.push_back({std::to_string(t), std::to_string(w),
                            io::format_int(std::llround(result.samples(t, w)))});
  io::write_csv(dir + "/calibration_windows.csv", table);
}

std::int64_t load_sigma_stag(const std::string& json_path) {
  const json j = json::parse(io::read_text_file(json_path));
  return j.at("sigma_stag").get<std::int64_t>();
}

}  // namespace fpso
