#include "fpso/benchmarks.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fpso {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Coefficient 10^(6 (d-1)/(D-1)) of the high conditioned elliptic function,
// with the 1-dimensional case degenerating to the sphere.
double elliptic_coefficient(int d, int dimension) {
  if (dimension == 1) return 1.0;
  return std::pow(10.0, 6.0 * d / (dimension - 1));
}

double init_half_width(ObjectiveName name) {
  switch (name) {
    case ObjectiveName::Sphere:
    case ObjectiveName::HighConditionedElliptic:
    case ObjectiveName::Schwefel12:
      return 100.0;
    case ObjectiveName::Rastrigin:
      return 5.12;
    case ObjectiveName::Rosenbrock:
      return 30.0;
  }
  throw std::invalid_argument("unknown objective");
}

}  // namespace

std::string to_string(ObjectiveName name) {
  switch (name) {
    case ObjectiveName::Sphere: return "sphere";
    case ObjectiveName::HighConditionedElliptic: return "hcelliptic";
    case ObjectiveName::Schwefel12: return "schwefel12";
    case ObjectiveName::Rastrigin: return "rastrigin";
    case ObjectiveName::Rosenbrock: return "rosenbrock";
  }
  throw std::invalid_argument("unknown objective");
}

ObjectiveName parse_objective(std::string_view id) {
  if (id == "sphere") return ObjectiveName::Sphere;
  if (id == "hcelliptic") return ObjectiveName::HighConditionedElliptic;
  if (id == "schwefel12") return ObjectiveName::Schwefel12;
  if (id == "rastrigin") return ObjectiveName::Rastrigin;
  if (id == "rosenbrock") return ObjectiveName::Rosenbrock;
  throw std::invalid_argument("unknown objective id: " + std::string(id));
}

Objective::Objective(ObjectiveName name, int dimension)
    : name_(name), dimension_(dimension),
      initialization_half_width_(init_half_width(name)) {
  if (dimension < 1) throw std::invalid_argument("objective dimension must be >= 1");
  if (name == ObjectiveName::Rosenbrock && dimension < 2)
    throw std::invalid_argument("rosenbrock needs dimension >= 2");
}

void Objective::check_input(const Eigen::VectorXd& x) const {
  if (x.size() != dimension_)
    throw std::invalid_argument("objective input has wrong dimension");
  if (!x.allFinite())
    throw std::invalid_argument("objective input is not finite");
}

double Objective::evaluate(const Eigen::VectorXd& x) const {
  check_input(x);
  const int n = dimension_;
  switch (name_) {
    case ObjectiveName::Sphere:
      return x.squaredNorm();
    case ObjectiveName::HighConditionedElliptic: {
      double sum = 0.0;
      for (int d = 0; d < n; ++d) sum += elliptic_coefficient(d, n) * x[d] * x[d];
      return sum;
    }
    case ObjectiveName::Schwefel12: {
      double sum = 0.0;
      double prefix = 0.0;
      for (int d = 0; d < n; ++d) {
        prefix += x[d];
        sum += prefix * prefix;
      }
      return sum;
    }
    case ObjectiveName::Rastrigin: {
      double sum = 10.0 * n;
      for (int d = 0; d < n; ++d)
        sum += x[d] * x[d] - 10.0 * std::cos(kTwoPi * x[d]);
      return sum;
    }
    case ObjectiveName::Rosenbrock: {
      double sum = 0.0;
      for (int d = 0; d + 1 < n; ++d) {
        const double a = x[d + 1] - x[d] * x[d];
        const double b = 1.0 - x[d];
        sum += 100.0 * a * a + b * b;
      }
      return sum;
    }
  }
  throw std::invalid_argument("unknown objective");
}

Eigen::VectorXd Objective::gradient(const Eigen::VectorXd& x) const {
  check_input(x);
  const int n = dimension_;
  Eigen::VectorXd g(n);
  switch (name_) {
    case ObjectiveName::Sphere:
      g = 2.0 * x;
      break;
    case ObjectiveName::HighConditionedElliptic:
      for (int d = 0; d < n; ++d) g[d] = 2.0 * elliptic_coefficient(d, n) * x[d];
      break;
    case ObjectiveName::Schwefel12: {
      // d/dx_k sum_d S_d^2 = 2 sum_{d >= k} S_d with S_d the prefix sums.
      double prefix = 0.0;
      Eigen::VectorXd s(n);
      for (int d = 0; d < n; ++d) {
        prefix += x[d];
        s[d] = prefix;
      }
      double suffix = 0.0;
      for (int d = n - 1; d >= 0; --d) {
        suffix += s[d];
        g[d] = 2.0 * suffix;
      }
      break;
    }
    case ObjectiveName::Rastrigin:
      for (int d = 0; d < n; ++d)
        g[d] = 2.0 * x[d] + 10.0 * kTwoPi * std::sin(kTwoPi * x[d]);
      break;
    case ObjectiveName::Rosenbrock:
      g.setZero();
      for (int d = 0; d + 1 < n; ++d) {
        const double a = x[d + 1] - x[d] * x[d];
        g[d] += -400.0 * x[d] * a - 2.0 * (1.0 - x[d]);
        g[d + 1] += 200.0 * a;
      }
      break;
  }
  return g;
}

Eigen::VectorXd Objective::optimum_position() const {
  if (name_ == ObjectiveName::Rosenbrock)
    return Eigen::VectorXd::Ones(dimension_);
  return Eigen::VectorXd::Zero(dimension_);
}

Objective make_objective(ObjectiveName name, int dimension) {
  return Objective(name, dimension);
}

}  // namespace fpso
