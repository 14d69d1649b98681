#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fpso/stats.hpp"

using namespace fpso;

TEST_CASE("mean and sample standard deviation") {
  CHECK(stats::mean({1.0, 2.0, 3.0}) == 2.0);
  CHECK(stats::sample_std({2.0, 2.0, 2.0}) == 0.0);
  CHECK(stats::sample_std({5.0}) == 0.0);
  // n-1 denominator: {1, 3} has variance 2.
  CHECK(stats::sample_std({1.0, 3.0}) == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(stats::mean({}), std::invalid_argument);
  CHECK_THROWS_AS(stats::sample_std({}), std::invalid_argument);
}

TEST_CASE("median picks the lower middle for even counts") {
  CHECK(stats::median({1.0, 2.0, 3.0}) == 2.0);
  CHECK(stats::median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(stats::median({1.0, 2.0, 3.0, 4.0}) == 2.0);
  CHECK(stats::median({3.0, 1.0}) == 1.0);
  CHECK(stats::median({7.0}) == 7.0);
  CHECK_THROWS_AS(stats::median({}), std::invalid_argument);
}

TEST_CASE("geometric mean over positive values") {
  const auto gm = stats::geometric_mean({1.0, 4.0});
  CHECK(gm.value == doctest::Approx(2.0));
  CHECK(gm.excluded == 0);

  const auto with_junk = stats::geometric_mean({1.0, 4.0, 0.0, -2.0});
  CHECK(with_junk.value == doctest::Approx(2.0));
  CHECK(with_junk.excluded == 2);

  CHECK_THROWS_AS(stats::geometric_mean({}), std::invalid_argument);
}

// Reference values from the closed forms: dof 1 via erf(sqrt(x/2)), even
// dof via 1 - exp(-x/2) * sum_{j<dof/2} (x/2)^j / j!.
TEST_CASE("chi squared cdf") {
  CHECK(stats::chi_squared_cdf(1.0, 1) ==
        doctest::Approx(0.682689492137086).epsilon(1e-12));
  CHECK(stats::chi_squared_cdf(2.0, 2) ==
        doctest::Approx(0.6321205588285577).epsilon(1e-12));
  CHECK(stats::chi_squared_cdf(3.0, 4) ==
        doctest::Approx(0.44217459962892547).epsilon(1e-12));
  CHECK(stats::chi_squared_cdf(18.307, 10) ==
        doctest::Approx(0.9499994109086018).epsilon(1e-12));
  CHECK(stats::chi_squared_cdf(23.209, 10) ==
        doctest::Approx(0.9899991341852592).epsilon(1e-12));
  CHECK(stats::chi_squared_cdf(2.0, 10) ==
        doctest::Approx(0.003659846827343771).epsilon(1e-10));
  CHECK(stats::chi_squared_cdf(0.0, 3) == 0.0);
}

TEST_CASE("lower regularized gamma") {
  // P(0.5, x) = erf(sqrt(x)); P(1.5, x) = erf(sqrt(x)) - 2 sqrt(x/pi) e^-x.
  CHECK(stats::lower_regularized_gamma(0.5, 1.0) ==
        doctest::Approx(0.8427007929497149).epsilon(1e-12));
  CHECK(stats::lower_regularized_gamma(1.5, 2.5) ==
        doctest::Approx(0.8282028557032669).epsilon(1e-12));
  CHECK(stats::lower_regularized_gamma(2.0, 0.0) == 0.0);
}
