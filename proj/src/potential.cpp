#include "fpso/potential.hpp"

namespace fpso {

PotentialSnapshot potential_snapshot(const SwarmState& state) {
  const int n = state.config.num_particles;
  const int d = state.config.num_dimensions;
  PotentialSnapshot snap;
  snap.iteration = state.iteration;
  snap.contributions.resize(n, d);
  snap.per_dimension = Eigen::VectorXd::Zero(d);
  for (int dim = 0; dim < d; ++dim) {
    for (int p = 0; p < n; ++p) {
      const double phi = potential_contribution(state, p, dim);
      snap.contributions(p, dim) = phi;
      snap.per_dimension[dim] += phi;
    }
  }
  return snap;
}

}  // namespace fpso
