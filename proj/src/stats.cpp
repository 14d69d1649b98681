#include "fpso/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fpso::stats {

double mean(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("mean of empty sample");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double sample_std(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("std of empty sample");
  if (values.size() == 1) return 0.0;
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of empty sample");
  // Lower-middle element for even sizes, so the median of observed
  // termination iterations is always an observed value.
  const std::size_t k = (values.size() - 1) / 2;
  std::nth_element(values.begin(), values.begin() + k, values.end());
  return values[k];
}

GeometricMean geometric_mean(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("geometric mean of empty sample");
  GeometricMean result;
  double log_sum = 0.0;
  int used = 0;
  for (double v : values) {
    if (v > 0.0) {
      log_sum += std::log(v);
      ++used;
    } else {
      ++result.excluded;
    }
  }
  result.value = used > 0 ? std::exp(log_sum / used) : 0.0;
  return result;
}

namespace {

// Series expansion of P(s, x), converges quickly for x < s + 1.
double gamma_p_series(double s, double x) {
  double term = 1.0 / s;
  double sum = term;
  double a = s;
  for (int i = 0; i < 500; ++i) {
    a += 1.0;
    term *= x / a;
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

// Continued fraction for Q(s, x) (modified Lentz), for x >= s + 1.
double gamma_q_continued_fraction(double s, double x) {
  const double tiny = std::numeric_limits<double>::min() / 1e-30;
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-15) break;
  }
  return std::exp(-x + s * std::log(x) - std::lgamma(s)) * h;
}

}  // namespace

double lower_regularized_gamma(double s, double x) {
  if (s <= 0.0 || x < 0.0) throw std::invalid_argument("lower_regularized_gamma domain");
  if (x == 0.0) return 0.0;
  if (x < s + 1.0) return gamma_p_series(s, x);
  return 1.0 - gamma_q_continued_fraction(s, x);
}

double chi_squared_cdf(double x, int dof) {
  if (dof <= 0) throw std::invalid_argument("chi_squared_cdf needs dof > 0");
  if (x <= 0.0) return 0.0;
  return lower_regularized_gamma(0.5 * dof, 0.5 * x);
}

}  // namespace fpso::stats
