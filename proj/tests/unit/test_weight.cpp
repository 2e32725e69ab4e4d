#include <cmath>
#include <memory>

#include <doctest.h>

#include "shocklab/errors.hpp"
#include "shocklab/weight.hpp"

using namespace shocklab;

namespace {

std::shared_ptr<const ShockProfile> make_profile(double gamma, double eps) {
  const GasModel gas(gamma, 1.0);
  return std::make_shared<const ShockProfile>(ShockProfile::solve(gas, end_states_from_amplitude(gas, eps)));
}

}  // namespace

TEST_CASE("weight is an affine function of the profile pressure") {
  const auto prof = make_profile(2.0, 0.1);
  const double lambda = 0.3;
  const WeightFn w(prof, lambda);
  const ShockEndStates& s = prof->end_states();
  for (double xi : {-80.0, -3.0, 0.0, 2.5, 40.0}) {
    const ProfilePoint q = prof->eval(xi);
    const WeightPoint a = w.eval(xi);
    CHECK(a.a == doctest::Approx(1.0 - lambda * (q.p - s.p_minus) / s.eps).epsilon(1e-14));
    CHECK(a.da == doctest::Approx(-lambda * q.dp / s.eps).epsilon(1e-12));
    CHECK(a.a <= 1.0);
    CHECK(a.a >= 1.0 - lambda);
    CHECK(a.da <= 0.0);
  }
}

TEST_CASE("weight second derivative matches finite differences") {
  const auto prof = make_profile(1.4, 0.1);
  const WeightFn w(prof, 0.45);
  for (double xi : {-12.0, -1.0, 4.0, 9.0}) {
    const double h = 1e-3;
    const double fd = (w.eval(xi + h).da - w.eval(xi - h).da) / (2 * h);
    CHECK(w.eval(xi).d2a == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("weight derivative ratios") {
  const auto prof = make_profile(2.0, 0.1);
  const double lambda = 0.45;
  const WeightFn w(prof, lambda);
  const WeightRatioReport r = weight_derivative_ratios(w);
  // a' = -(lambda/eps) p~', and p~' / v~' = p'(v~) lies between p'(v_-) and p'(v_+).
  const double lo = -prof->end_states().gamma;  // p'(v_-) for v_- = 1
  CHECK(r.max_da <= 0.0);
  CHECK(r.total_variation == doctest::Approx(lambda).epsilon(1e-6));
  CHECK(r.da_over_dv_min >= std::abs(lo) * 0.999);
  CHECK(r.da_over_dv_max >= r.da_over_dv_min);
  CHECK(r.d2a_over_eps_da > 0.0);
  CHECK(r.d2a_over_eps_da < 10.0);
}

TEST_CASE("weight rejects lambda outside (0, 1/2)") {
  const auto prof = make_profile(2.0, 0.1);
  CHECK_THROWS_AS(WeightFn(prof, 0.0), DomainError);
  CHECK_THROWS_AS(WeightFn(prof, 0.5), DomainError);
}
