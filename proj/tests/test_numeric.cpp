#include <cmath>

#include "doctest.h"
#include "gwprune/numeric.hpp"

using namespace gwprune;

TEST_CASE("adaptive quadrature") {
  CHECK(num::integrate([](double x) { return x * x; }, 0.0, 1.0) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  CHECK(num::integrate([](double x) { return std::exp(-x); }, 0.0, 30.0) ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(num::integrate([](double x) { return 1.0 / (x * x); }, 1.0, 1000.0) ==
        doctest::Approx(1.0 - 1e-3).epsilon(1e-8));
}

TEST_CASE("bisection") {
  double root = num::bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0);
  CHECK(root == doctest::Approx(std::sqrt(2.0)).epsilon(1e-11));
}

TEST_CASE("regularized upper incomplete gamma") {
  // gamma_q(1, x) = e^{-x}; gamma_q(0.5, x) = erfc(sqrt(x))
  CHECK(num::gamma_q(1.0, 2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  CHECK(num::gamma_q(0.5, 1.0) == doctest::Approx(std::erfc(1.0)).epsilon(1e-10));
  CHECK(num::gamma_q(3.0, 0.0) == doctest::Approx(1.0));
  // chi-square with 2 dof: P(X > x) = e^{-x/2}
  CHECK(num::gamma_q(1.0, 0.5 * 4.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
}

TEST_CASE("kolmogorov survival function matches its series") {
  for (double lam : {0.5, 1.0, 1.5}) {
    double ref = 0.0;
    for (int k = 1; k <= 50; ++k)
      ref += 2.0 * (k % 2 == 1 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lam * lam);
    CHECK(num::kolmogorov_sf(lam) == doctest::Approx(ref).epsilon(1e-10));
  }
  CHECK(num::kolmogorov_sf(0.0) == doctest::Approx(1.0));
  CHECK(num::kolmogorov_sf(10.0) < 1e-10);
}
