#include "fpso/calibration.hpp"

#include <cmath>
#include <stdexcept>

#include "fpso/parallel.hpp"
#include "fpso/stats.hpp"

namespace fpso {

void CalibrationConfig::validate() const {
  swarm_config().validate();
  if (mu < 1) throw std::invalid_argument("calibration window must be positive");
  if (trials < 1) throw std::invalid_argument("calibration needs trials");
  if (intervals_per_trial < 1)
    throw std::invalid_argument("calibration needs intervals");
  if (warmup_intervals < 0)
    throw std::invalid_argument("warmup intervals must be non-negative");
}

SwarmConfig CalibrationConfig::swarm_config() const {
  SwarmConfig sc;
  sc.num_particles = num_particles;
  sc.num_dimensions = num_dimensions;
  sc.chi = chi;
  sc.c1 = c1;
  sc.c2 = c2;
  sc.delta = delta;
  sc.mode = Mode::Forced;
  sc.fault = fault;
  return sc;
}

namespace {

struct TrialResult {
  std::vector<std::int64_t> window_totals;
  VectorXi64 per_dimension_sum;  // over the measured windows
  std::int64_t attractor_updates = 0;
};

TrialResult run_trial(const CalibrationConfig& config, int trial) {
  const Objective objective =
      make_objective(config.objective, config.num_dimensions);
  const Eigen::VectorXd plant = objective.optimum_position();
  SwarmState state =
      initialize_at(config.swarm_config(), objective, plant,
                    Rng::substream(config.master_seed, trial));
  TrialResult result;
  result.per_dimension_sum = VectorXi64::Zero(config.num_dimensions);
  std::vector<MoveOutcome> outcomes;
  WindowTracker tracker(config.num_dimensions, config.mu, WindowMode::Sliding);
  const std::int64_t total_windows =
      config.warmup_intervals + config.intervals_per_trial;
  while (tracker.windows_emitted() < total_windows) {
    step_iteration(state, objective, outcomes);
    for (int n = 0; n < config.num_particles; ++n) {
      const MoveOutcome& outcome = outcomes[n];
      // A particle can tie the optimum value while sitting exactly on the
      // planted point (a regular update with every attractor there keeps
      // the velocity at zero); such assignments change nothing.  Count only
      // updates that moved an attractor off the plant.
      if ((outcome.local_updated || outcome.global_updated) &&
          state.particles[n].position != plant)
        ++result.attractor_updates;
      tracker.record(outcome, state.iteration - 1);
    }
    if (auto window = tracker.on_iteration_complete(state.iteration)) {
      if (tracker.windows_emitted() > config.warmup_intervals) {
        result.window_totals.push_back(window->total);
        result.per_dimension_sum += window->per_dimension;
      }
    }
  }
  return result;
}

}  // namespace

CalibrationResult calibrate(const CalibrationConfig& config) {
  config.validate();
  CalibrationResult result;
  result.config = config;
  result.samples.resize(config.trials, config.intervals_per_trial);
  result.per_dimension_mean = Eigen::VectorXd::Zero(config.num_dimensions);

  std::vector<TrialResult> trials(config.trials);
  parallel_for_index(config.trials, thread_cap(),
                     [&](int t) { trials[t] = run_trial(config, t); });

  std::vector<double> trial_means(config.trials);
  VectorXi64 per_dim_total = VectorXi64::Zero(config.num_dimensions);
  for (int t = 0; t < config.trials; ++t) {
    const TrialResult& trial = trials[t];
    double sum = 0.0;
    for (int w = 0; w < config.intervals_per_trial; ++w) {
      result.samples(t, w) = static_cast<double>(trial.window_totals[w]);
      sum += result.samples(t, w);
    }
    trial_means[t] = sum / config.intervals_per_trial;
    per_dim_total += trial.per_dimension_sum;
    result.attractor_updates += trial.attractor_updates;
  }
  result.sigma_stag_mean = stats::mean(trial_means);
  result.sigma_stag_std = stats::sample_std(trial_means);
  result.sigma_stag =
      static_cast<std::int64_t>(std::llround(result.sigma_stag_mean));
  const double window_count =
      static_cast<double>(config.trials) * config.intervals_per_trial;
  result.per_dimension_mean = per_dim_total.cast<double>() / window_count;
  return result;
}

std::vector<SweepPoint> scaling_sweep(SweepAxis axis,
                                      const std::vector<double>& values,
                                      const CalibrationConfig& base) {
  if (values.empty()) throw std::invalid_argument("sweep needs values");
  std::vector<SweepPoint> points;
  points.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    CalibrationConfig config = base;
    config.master_seed = base.master_seed + i + 1;
    const double value = values[i];
    switch (axis) {
      case SweepAxis::Delta:
        config.delta = value;
        break;
      case SweepAxis::Dimensions:
        config.num_dimensions = static_cast<int>(value);
        break;
      case SweepAxis::Particles:
        config.num_particles = static_cast<int>(value);
        break;
      case SweepAxis::IntervalLength:
        config.mu = static_cast<std::int64_t>(value);
        break;
    }
    points.push_back({value, calibrate(config)});
  }
  return points;
}

DistanceHistogram distance_histogram(const CalibrationConfig& config,
                                     const HistogramConfig& histogram) {
  config.validate();
  if (histogram.bins < 1) throw std::invalid_argument("histogram needs bins");
  if (histogram.iterations < 1)
    throw std::invalid_argument("histogram needs iterations");
  if (histogram.particle < 0 || histogram.particle >= config.num_particles ||
      histogram.dim < 0 || histogram.dim >= config.num_dimensions)
    throw std::invalid_argument("histogram particle or dimension out of range");

  const Objective objective =
      make_objective(config.objective, config.num_dimensions);
  SwarmState state =
      initialize_at(config.swarm_config(), objective,
                    objective.optimum_position(),
                    Rng::substream(config.master_seed, 0));
  DistanceHistogram out;
  const double half_range = histogram.half_range_in_delta * config.delta;
  out.bin_width = 2.0 * half_range / histogram.bins;
  out.bin_centers.resize(histogram.bins);
  for (int b = 0; b < histogram.bins; ++b)
    out.bin_centers[b] = -half_range + (b + 0.5) * out.bin_width;
  out.counts = VectorXi64::Zero(histogram.bins);

  std::vector<MoveOutcome> outcomes;
  double distance_sum = 0.0;
  for (std::int64_t i = 0; i < histogram.iterations; ++i) {
    step_iteration(state, objective, outcomes);
    const double distance =
        state.global_attractor[histogram.dim] -
        state.particles[histogram.particle].position[histogram.dim];
    distance_sum += distance;
    ++out.samples;
    if (distance < -half_range) {
      ++out.underflow;
    } else if (distance >= half_range) {
      ++out.overflow;
    } else {
      const int bin = static_cast<int>((distance + half_range) / out.bin_width);
      ++out.counts[std::min(bin, histogram.bins - 1)];
    }
  }
  out.sample_mean = distance_sum / static_cast<double>(out.samples);
  return out;
}

}  // namespace fpso
