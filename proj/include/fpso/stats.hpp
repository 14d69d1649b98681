#pragma once

// Small statistics helpers shared by the calibration, verification and
// experiment summaries.

#include <cstdint>
#include <vector>

namespace fpso::stats {

double mean(const std::vector<double>& values);

// Sample standard deviation (n-1 denominator); 0 for a single value.
double sample_std(const std::vector<double>& values);

// Median with the lower-middle element for even-sized inputs.
double median(std::vector<double> values);

struct GeometricMean {
  double value = 0.0;
  int excluded = 0;  // non-positive entries left out of the product
};
GeometricMean geometric_mean(const std::vector<double>& values);

// Lower regularized incomplete gamma P(s, x).
double lower_regularized_gamma(double s, double x);

// CDF of the chi-squared distribution with `dof` degrees of freedom.
double chi_squared_cdf(double x, int dof);

}  // namespace fpso::stats
