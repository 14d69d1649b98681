#pragma once

// Per-dimension potential accounting.  A particle's contribution to
// dimension d is |V_d| + |G_d - X_d|; the dimension total sums the
// contributions in ascending particle index, with no compensated summation,
// so the forced condition and the snapshot see identical arithmetic.

#include <cstdint>

#include <Eigen/Core>

#include "fpso/swarm.hpp"

namespace fpso {

struct PotentialSnapshot {
  std::int64_t iteration = 0;
  Eigen::MatrixXd contributions;   // num_particles x num_dimensions
  Eigen::VectorXd per_dimension;   // ascending-particle-index sums
};

inline double potential_contribution(const SwarmState& state, int particle,
                                     int dim) {
  const ParticleState& p = state.particles[particle];
  return std::abs(p.velocity[dim]) +
         std::abs(state.global_attractor[dim] - p.position[dim]);
}

PotentialSnapshot potential_snapshot(const SwarmState& state);

}  // namespace fpso
