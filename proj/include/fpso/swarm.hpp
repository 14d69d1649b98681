#pragma once

// Core swarm engine.
//
// One iteration moves the particles in ascending index order.  Each particle
// updates its D dimensions in ascending order: when every particle's
// potential contribution |V_d| + |G_d - X_d| in dimension d lies below delta,
// the velocity is replaced by a forced uniform draw from [-delta, delta]
// (one RNG draw), otherwise the regular recursion applies (two RNG draws,
// r before s).  The position component is updated immediately after its
// velocity.  After all D dimensions, the particle's objective value is
// compared against the attractors with <=, and the global attractor update
// is visible to the particles that move later in the same iteration.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "fpso/benchmarks.hpp"
#include "fpso/rng.hpp"

namespace fpso {

enum class Mode { Classical, Forced };

// Deliberate engine defects used by the statistical verifiers' mutation
// tests.  Always None in real use.
enum class EngineFault {
  None,
  SkipAllParticlesCheck,  // forced condition looks at the moving particle only
  ForcedVelocityZero,     // forced update writes 0 instead of a uniform draw
  ForcedRangeHalf,        // forced update draws from [-delta/2, delta/2]
};

struct SwarmConfig {
  int num_particles = 5;
  int num_dimensions = 15;
  double chi = 0.72984;
  double c1 = 1.49617;
  double c2 = 1.49617;
  double delta = 1e-7;
  Mode mode = Mode::Forced;
  EngineFault fault = EngineFault::None;

  void validate() const;
};

struct ParticleState {
  Eigen::VectorXd position;
  Eigen::VectorXd velocity;
  Eigen::VectorXd local_attractor;
  double local_value = 0.0;
};

struct SwarmState {
  SwarmConfig config;
  std::vector<ParticleState> particles;
  Eigen::VectorXd global_attractor;
  double global_value = 0.0;
  std::int64_t iteration = 0;  // completed iterations
  Rng rng;
};

struct MoveOutcome {
  std::vector<int> forced_dimensions;  // ascending
  bool local_updated = false;
  bool global_updated = false;
};

// Per-dimension hook for the statistical verifiers.  pre_move_distance is
// G_d - X_d before the move; new_velocity is the value just written, so the
// mover's potential contribution after the move is
// |new_velocity| + |pre_move_distance - new_velocity|.
class MoveObserver {
 public:
  virtual ~MoveObserver() = default;
  virtual void on_dimension_move(int particle, int dim, bool forced,
                                 double pre_move_distance,
                                 double new_velocity) = 0;
};

// Thrown when a run produces a non-finite position or objective value.
class NonFiniteObjectiveError : public std::runtime_error {
 public:
  NonFiniteObjectiveError(const std::string& what, std::int64_t iteration,
                          int particle)
      : std::runtime_error(what), iteration(iteration), particle(particle) {}
  std::int64_t iteration;
  int particle;
};

// Random initialization: positions uniform over the objective's default box
// (N * D draws, particle-major), velocities zero, local attractors at the
// positions, global attractor at the best local attractor (lowest particle
// index on ties).
SwarmState initialize(const SwarmConfig& config, const Objective& objective,
                      Rng rng);
SwarmState initialize(const SwarmConfig& config, const Objective& objective,
                      std::uint64_t seed);

// Planted initialization: every particle at `point` with zero velocity,
// all attractors at `point`.  Consumes no draws.
SwarmState initialize_at(const SwarmConfig& config, const Objective& objective,
                         const Eigen::VectorXd& point, Rng rng);

// True iff every particle's potential contribution in `dim` is < delta.
bool forced_condition(const SwarmState& state, int dim);

// Velocity recursion for one dimension; consumes two draws (r before s),
// writes and returns the new velocity.
double regular_velocity_update(SwarmState& state, int particle, int dim);

// Forced velocity; consumes one draw t, writes and returns (2t - 1) * delta.
double forced_velocity_update(SwarmState& state, int particle, int dim);

// The forced velocity as a function of the unit draw.
inline double forced_velocity_from_unit(double t, double delta) {
  return (2.0 * t - 1.0) * delta;
}

void step_particle(SwarmState& state, int particle, const Objective& objective,
                   MoveOutcome& out, MoveObserver* observer = nullptr);

// Moves all particles once and increments state.iteration.  `outcomes` is
// resized to one entry per particle.
void step_iteration(SwarmState& state, const Objective& objective,
                    std::vector<MoveOutcome>& outcomes,
                    MoveObserver* observer = nullptr);

}  // namespace fpso
