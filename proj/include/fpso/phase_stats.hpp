#pragma once

// Statistical verification of the pulsation phase structure.  All verifiers
// run the calibration regime (particles planted at the optimum, attractors
// constant) and measure:
//
//   Lockout.          After any particle's contribution reaches phi >= delta
//                     in a dimension, the next N particle moves in that
//                     dimension are never forced.  Exact: one violation fails.
//   HalfProbability.  Conditioned on a forced move, the next particle move in
//                     the same dimension is forced with probability 1/2.
//   GeometricRuns.    Completed forced-run lengths follow the geometric
//                     distribution with p = 1/2 on {1, 2, ...}, so the chance
//                     that a run reaches length k is 2^-(k-1) and the mean
//                     length is 2.
//   RecoveryBound.    Conditioned on the first unforced move after a forced
//                     run of the same particle, its contribution satisfies
//                     phi >= delta with probability at least
//                     (1 - 1/(2 chi)) / 2 (vacuous for chi <= 1/2).
//   Theorem.          Per dimension the move stream parses into forced runs,
//                     lockouts of exactly N moves, and recoveries of length
//                     >= 0, repeating with no unclassifiable segments.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fpso/benchmarks.hpp"
#include "fpso/swarm.hpp"

namespace fpso {

enum class Lemma {
  Lockout,
  HalfProbability,
  GeometricRuns,
  RecoveryBound,
  Theorem,
};

struct LemmaReport {
  Lemma lemma = Lemma::Lockout;
  std::int64_t samples = 0;  // conditioning events (runs for GeometricRuns)
  double statistic = 0.0;
  double expected = 0.0;
  double standard_error = 0.0;
  bool pass = false;
  bool vacuous = false;  // recovery bound with chi <= 1/2
  double p_value = 0.0;  // GeometricRuns only
  std::string details;
  std::vector<double> per_dimension_statistic;   // HalfProbability
  std::vector<std::int64_t> case_counts;         // HalfProbability, 6 sign cases
  std::vector<double> case_statistic;            // conditional frequency per case
  std::vector<std::int64_t> histogram_observed;  // GeometricRuns, k = 1..10, tail
  std::vector<double> histogram_expected;
};

struct TheoremReport {
  bool pass = false;
  std::int64_t completed_runs = 0;
  std::int64_t completed_gaps = 0;
  std::int64_t short_gaps = 0;           // gaps shorter than the lockout
  std::int64_t lockout_violations = 0;
  std::int64_t recovery_zero_count = 0;  // gaps with no recovery moves
  double mean_run_length = 0.0;
  double mean_recovery_length = 0.0;
  double run_chi_square = 0.0;
  double run_p_value = 0.0;
  std::int64_t attractor_updates = 0;
  bool streams_start_forced = false;
  std::string details;
};

struct VerifierConfig {
  int num_particles = 5;
  int num_dimensions = 15;
  double delta = 1e-7;
  double chi = 0.72984;
  double c1 = 1.49617;
  double c2 = 1.49617;
  ObjectiveName objective = ObjectiveName::Sphere;
  std::uint64_t seed = 7130;
  std::int64_t min_samples = 1000000;
  std::int64_t max_iterations = 5000000;  // bail-out for starved sessions
  EngineFault fault = EngineFault::None;

  void validate() const;
};

class InsufficientSamplesError : public std::runtime_error {
 public:
  InsufficientSamplesError(const std::string& what, std::int64_t collected,
                           std::int64_t required)
      : std::runtime_error(what), collected(collected), required(required) {}
  std::int64_t collected;
  std::int64_t required;
};

// Lower bound of the recovery lemma at the given chi.
inline double recovery_bound(double chi) {
  return (1.0 - 1.0 / (2.0 * chi)) * 0.5;
}

LemmaReport verify_lockout(const VerifierConfig& config);
LemmaReport verify_half_probability(const VerifierConfig& config);
LemmaReport verify_geometric(const VerifierConfig& config);

// One report per chi value; every session reuses the base config with chi
// replaced.
std::vector<LemmaReport> verify_recovery_bound(const VerifierConfig& config,
                                               const std::vector<double>& chis);

TheoremReport verify_theorem(const VerifierConfig& config);

}  // namespace fpso
