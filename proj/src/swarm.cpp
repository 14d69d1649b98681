#include "fpso/swarm.hpp"

#include <cassert>
#include <cmath>

#include "fpso/potential.hpp"

namespace fpso {

void SwarmConfig::validate() const {
  if (num_particles < 2)
    throw std::invalid_argument("swarm needs at least two particles");
  if (num_dimensions < 1)
    throw std::invalid_argument("swarm needs at least one dimension");
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw std::invalid_argument("delta must be positive and finite");
  if (!(chi > 0.0) || !std::isfinite(chi))
    throw std::invalid_argument("chi must be positive and finite");
  if (!(c1 > 0.0) || !std::isfinite(c1) || !(c2 > 0.0) || !std::isfinite(c2))
    throw std::invalid_argument("c1 and c2 must be positive and finite");
}

namespace {

SwarmState finish_initialization(SwarmState state) {
  const int n = state.config.num_particles;
  state.global_value = state.particles[0].local_value;
  int best = 0;
  for (int i = 1; i < n; ++i) {
    // Strict comparison keeps the lowest particle index on ties.
    if (state.particles[i].local_value < state.global_value) {
      state.global_value = state.particles[i].local_value;
      best = i;
    }
  }
  state.global_attractor = state.particles[best].local_attractor;
  state.iteration = 0;
  return state;
}

}  // namespace

SwarmState initialize(const SwarmConfig& config, const Objective& objective,
                      Rng rng) {
  config.validate();
  if (objective.dimension() != config.num_dimensions)
    throw std::invalid_argument("objective dimension does not match the swarm");
  SwarmState state;
  state.config = config;
  state.rng = rng;
  const int d = config.num_dimensions;
  const double lo = objective.initialization_lower();
  const double width = objective.initialization_upper() - lo;
  state.particles.resize(config.num_particles);
  for (ParticleState& p : state.particles) {
    p.position.resize(d);
    for (int k = 0; k < d; ++k)
      p.position[k] = lo + width * state.rng.uniform01();
    p.velocity = Eigen::VectorXd::Zero(d);
    p.local_attractor = p.position;
    p.local_value = objective.evaluate(p.local_attractor);
  }
  return finish_initialization(std::move(state));
}

SwarmState initialize(const SwarmConfig& config, const Objective& objective,
                      std::uint64_t seed) {
  return initialize(config, objective, Rng(seed));
}

SwarmState initialize_at(const SwarmConfig& config, const Objective& objective,
                         const Eigen::VectorXd& point, Rng rng) {
  config.validate();
  if (objective.dimension() != config.num_dimensions)
    throw std::invalid_argument("objective dimension does not match the swarm");
  if (point.size() != config.num_dimensions)
    throw std::invalid_argument("planted point has the wrong dimension");
  SwarmState state;
  state.config = config;
  state.rng = rng;
  state.particles.resize(config.num_particles);
  const double value = objective.evaluate(point);
  for (ParticleState& p : state.particles) {
    p.position = point;
    p.velocity = Eigen::VectorXd::Zero(config.num_dimensions);
    p.local_attractor = point;
    p.local_value = value;
  }
  return finish_initialization(std::move(state));
}

bool forced_condition(const SwarmState& state, int dim) {
  const double delta = state.config.delta;
  const double g = state.global_attractor[dim];
  for (const ParticleState& p : state.particles) {
    if (std::abs(p.velocity[dim]) + std::abs(g - p.position[dim]) >= delta)
      return false;
  }
  return true;
}

double regular_velocity_update(SwarmState& state, int particle, int dim) {
  ParticleState& p = state.particles[particle];
  const double r = state.rng.uniform01();
  const double s = state.rng.uniform01();
  const SwarmConfig& c = state.config;
  const double v = c.chi * p.velocity[dim] +
                   c.c1 * r * (p.local_attractor[dim] - p.position[dim]) +
                   c.c2 * s * (state.global_attractor[dim] - p.position[dim]);
  p.velocity[dim] = v;
  return v;
}

double forced_velocity_update(SwarmState& state, int particle, int dim) {
  double v;
  switch (state.config.fault) {
    case EngineFault::ForcedVelocityZero:
      v = 0.0;
      break;
    case EngineFault::ForcedRangeHalf:
      v = forced_velocity_from_unit(state.rng.uniform01(),
                                    0.5 * state.config.delta);
      break;
    default:
      v = forced_velocity_from_unit(state.rng.uniform01(), state.config.delta);
      break;
  }
  state.particles[particle].velocity[dim] = v;
  return v;
}

void step_particle(SwarmState& state, int particle, const Objective& objective,
                   MoveOutcome& out, MoveObserver* observer) {
  assert(particle >= 0 && particle < state.config.num_particles);
  out.forced_dimensions.clear();
  out.local_updated = false;
  out.global_updated = false;
  ParticleState& p = state.particles[particle];
  const SwarmConfig& config = state.config;
  const bool forced_mode = config.mode == Mode::Forced;
  for (int d = 0; d < config.num_dimensions; ++d) {
    bool forced = false;
    if (forced_mode) {
      forced = config.fault == EngineFault::SkipAllParticlesCheck
                   ? potential_contribution(state, particle, d) < config.delta
                   : forced_condition(state, d);
    }
    double pre_distance = 0.0;
    if (observer) pre_distance = state.global_attractor[d] - p.position[d];
    const double v = forced ? forced_velocity_update(state, particle, d)
                            : regular_velocity_update(state, particle, d);
    p.position[d] += v;
    if (forced) out.forced_dimensions.push_back(d);
    if (observer)
      observer->on_dimension_move(particle, d, forced, pre_distance, v);
  }
  if (!p.position.allFinite())
    throw NonFiniteObjectiveError("particle position became non-finite",
                                  state.iteration, particle);
  const double value = objective.evaluate(p.position);
  if (!std::isfinite(value))
    throw NonFiniteObjectiveError("objective value became non-finite",
                                  state.iteration, particle);
  if (value <= p.local_value) {
    p.local_attractor = p.position;
    p.local_value = value;
    out.local_updated = true;
  }
  if (value <= state.global_value) {
    state.global_attractor = p.position;
    state.global_value = value;
    out.global_updated = true;
  }
}

void step_iteration(SwarmState& state, const Objective& objective,
                    std::vector<MoveOutcome>& outcomes,
                    MoveObserver* observer) {
  outcomes.resize(state.config.num_particles);
  for (int n = 0; n < state.config.num_particles; ++n)
    step_particle(state, n, objective, outcomes[n], observer);
  ++state.iteration;
}

}  // namespace fpso
