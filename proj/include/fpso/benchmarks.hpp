#pragma once

// Benchmark objectives with analytic gradients and default initialization
// boxes.  All five have their global optimum value at 0.

#include <string>
#include <string_view>

#include <Eigen/Core>

namespace fpso {

enum class ObjectiveName {
  Sphere,
  HighConditionedElliptic,
  Schwefel12,
  Rastrigin,
  Rosenbrock,
};

std::string to_string(ObjectiveName name);

// Accepts the lowercase identifiers sphere, hcelliptic, schwefel12,
// rastrigin, rosenbrock; throws std::invalid_argument otherwise.
ObjectiveName parse_objective(std::string_view id);

class Objective {
 public:
  Objective(ObjectiveName name, int dimension);

  ObjectiveName name() const { return name_; }
  int dimension() const { return dimension_; }

  // Throws std::invalid_argument on a size mismatch or non-finite input.
  double evaluate(const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;

  // Per-dimension bounds of the default initialization box.
  double initialization_lower() const { return -initialization_half_width_; }
  double initialization_upper() const { return initialization_half_width_; }

  Eigen::VectorXd optimum_position() const;
  double optimum_value() const { return 0.0; }

 private:
  void check_input(const Eigen::VectorXd& x) const;

  ObjectiveName name_;
  int dimension_;
  double initialization_half_width_;
};

Objective make_objective(ObjectiveName name, int dimension);

}  // namespace fpso
