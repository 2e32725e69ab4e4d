#include <cmath>

#include <doctest.h>

#include "shocklab/errors.hpp"
#include "shocklab/shift_controller.hpp"

using namespace shocklab;

TEST_CASE("phi knot values are exact") {
  CHECK(phi_eps(0.02, 0.1) == -100.0);
  CHECK(phi_eps(-0.02, 0.1) == 100.0);
  CHECK(phi_eps(0.01, 0.1) == -100.0);
  CHECK(phi_eps(-0.01, 0.1) == 100.0);
  CHECK(phi_eps(0.0, 0.1) == 0.0);
  CHECK(phi_eps(0.005, 0.1) == -50.0);
  CHECK(phi_eps(1e3, 0.05) == -400.0);
  CHECK_THROWS_AS(phi_eps(0.0, 0.0), DomainError);
}

TEST_CASE("phi is continuous, odd and non-increasing") {
  const double eps = 0.07, e2 = eps * eps;
  double prev = phi_eps(-2.0 * e2, eps);
  for (int i = -400; i <= 400; ++i) {
    const double y = 2.0 * e2 * i / 400.0;
    const double f = phi_eps(y, eps);
    CHECK(f <= prev + 1e-9);
    CHECK(f == doctest::Approx(-phi_eps(-y, eps)).epsilon(1e-14));
    CHECK(std::abs(f) <= 1.0 / e2 * (1 + 1e-14));
    prev = f;
  }
  CHECK(phi_eps(e2 * (1 - 1e-12), eps) == doctest::Approx(-1.0 / e2).epsilon(1e-10));
}

TEST_CASE("shift right side and its algebraic bound") {
  const double eps = 0.1;
  for (double Y : {-1.0, -1e-3, 0.0, 4e-3, 0.5}) {
    for (double B : {-2.0, 0.0, 0.3}) {
      const double x = shift_rhs(Y, B, eps);
      CHECK(x == doctest::Approx(phi_eps(Y, eps) * (2 * std::abs(B) + 1)));
      CHECK(std::abs(x) * eps * eps <= 1.0 + 2.0 * std::abs(B));
    }
  }
}
