#pragma once

// Stagnation-frequency calibration.  Every particle is planted at the
// objective's optimum with zero velocity and all attractors there, so the
// swarm pulsates from the first move and sigma(I) measures the pure
// stagnation forcing rate.  sigma_stag is the rounded mean over trials of
// the per-trial window averages, after discarding warmup windows.

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "fpso/benchmarks.hpp"
#include "fpso/swarm.hpp"
#include "fpso/telemetry.hpp"

namespace fpso {

struct CalibrationConfig {
  int num_particles = 5;
  int num_dimensions = 15;
  std::int64_t mu = 50000;  // window length in iterations
  double delta = 1e-7;
  double chi = 0.72984;
  double c1 = 1.49617;
  double c2 = 1.49617;
  int trials = 100;
  int intervals_per_trial = 10;
  int warmup_intervals = 1;
  ObjectiveName objective = ObjectiveName::Sphere;
  std::uint64_t master_seed = 20240901;
  EngineFault fault = EngineFault::None;

  void validate() const;
  SwarmConfig swarm_config() const;
};

struct CalibrationResult {
  CalibrationConfig config;
  double sigma_stag_mean = 0.0;
  double sigma_stag_std = 0.0;  // sample std over trial means
  std::int64_t sigma_stag = 0;  // rounded mean, fed to the stopping rules
  Eigen::VectorXd per_dimension_mean;  // mean window count per dimension
  Eigen::MatrixXd samples;             // trials x intervals_per_trial
  // Updates that moved an attractor off the planted point; expected 0.
  std::int64_t attractor_updates = 0;
};

// Trial k runs on RNG substream k of the master seed; trials may execute in
// parallel (FPSO_THREADS) without changing the result.
CalibrationResult calibrate(const CalibrationConfig& config);

enum class SweepAxis { Delta, Dimensions, Particles, IntervalLength };

struct SweepPoint {
  double value = 0.0;
  CalibrationResult result;
};

// Repeats the calibration along one axis; each point gets its own master
// seed derived from the base seed and the point index.
std::vector<SweepPoint> scaling_sweep(SweepAxis axis,
                                      const std::vector<double>& values,
                                      const CalibrationConfig& base);

struct HistogramConfig {
  int bins = 201;
  double half_range_in_delta = 10.0;  // bin grid covers +-10 delta by default
  std::int64_t iterations = 5000000;
  int particle = 0;
  int dim = 0;
};

struct DistanceHistogram {
  Eigen::VectorXd bin_centers;
  VectorXi64 counts;
  std::int64_t underflow = 0;
  std::int64_t overflow = 0;
  double sample_mean = 0.0;
  std::int64_t samples = 0;
  double bin_width = 0.0;
};

// Samples the signed distance G_d - X_d of one particle in one dimension at
// the end of every iteration of a calibration-regime run.
DistanceHistogram distance_histogram(const CalibrationConfig& config,
                                     const HistogramConfig& histogram);

}  // namespace fpso
