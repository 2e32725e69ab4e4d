#include <cmath>

#include <doctest.h>

#include "shocklab/errors.hpp"
#include "shocklab/gas_model.hpp"
#include "shocklab/shock_profile.hpp"

using namespace shocklab;

namespace {

// Naive relative quantities in long double, accurate when v and w are well separated.
long double q_rel_naive(long double g, long double v, long double w) {
  auto Q = [g](long double x) { return std::pow(x, 1.0L - g) / (g - 1.0L); };
  return Q(v) - Q(w) + std::pow(w, -g) * (v - w);
}
long double p_rel_naive(long double g, long double v, long double w) {
  return std::pow(v, -g) - std::pow(w, -g) + g * std::pow(w, -g - 1.0L) * (v - w);
}

}  // namespace

TEST_CASE("pressure and its inverse") {
  const GasModel gas(1.4, 1.0);
  for (double v : {0.3, 0.9, 1.0, 2.5}) {
    CHECK(gas.pressure(v) == doctest::Approx(std::pow(v, -1.4)).epsilon(1e-15));
    CHECK(gas.pressure_inverse(gas.pressure(v)) == doctest::Approx(v).epsilon(1e-14));
    const double h = 1e-5;
    CHECK(gas.dpressure(v) == doctest::Approx((gas.pressure(v + h) - gas.pressure(v - h)) / (2 * h)).epsilon(1e-8));
  }
  CHECK_THROWS_AS(gas.pressure(0.0), DomainError);
  CHECK_THROWS_AS(GasModel(1.0, 1.0), DomainError);
}

TEST_CASE("relative quantities match the naive formulas away from the diagonal") {
  for (double g : {1.4, 2.0, 3.0}) {
    const GasModel gas(g, 1.0);
    for (auto [v, w] : {std::pair{0.5, 1.0}, std::pair{2.0, 0.9}, std::pair{1.3, 1.1}}) {
      CHECK(gas.q_relative(v, w) == doctest::Approx(static_cast<double>(q_rel_naive(g, v, w))).epsilon(1e-12));
      CHECK(gas.p_relative(v, w) == doctest::Approx(static_cast<double>(p_rel_naive(g, v, w))).epsilon(1e-12));
      CHECK(gas.q_rel_fast(v, w) == doctest::Approx(gas.q_relative(v, w)).epsilon(1e-13));
      CHECK(gas.p_rel_fast(v, w) == doctest::Approx(gas.p_relative(v, w)).epsilon(1e-13));
    }
  }
}

TEST_CASE("relative quantities keep full precision near the diagonal") {
  const double g = 2.0, w = 0.97;
  const GasModel gas(g, 1.0);
  for (double d : {1e-4, -1e-6, 1e-9}) {
    const double v = w + d;
    const double dd = v - w;  // exact separation after rounding v
    // Third-order Taylor expansions; the quartic remainder is below 1e-10 relative.
    const double q2 = g * std::pow(w, -g - 1), q3 = -g * (g + 1) * std::pow(w, -g - 2);
    const double p2 = g * (g + 1) * std::pow(w, -g - 2), p3 = -g * (g + 1) * (g + 2) * std::pow(w, -g - 3);
    CHECK(gas.q_relative(v, w) == doctest::Approx(0.5 * q2 * dd * dd + q3 * dd * dd * dd / 6).epsilon(1e-7));
    CHECK(gas.p_relative(v, w) == doctest::Approx(0.5 * p2 * dd * dd + p3 * dd * dd * dd / 6).epsilon(1e-7));
    CHECK(gas.q_relative(v, w) > 0.0);
  }
  CHECK(gas.q_relative(w, w) == 0.0);
}

TEST_CASE("end states from the closed form") {
  const GasModel gas(2.0, 1.0);
  const ShockEndStates s = end_states_from_amplitude(gas, 0.1);
  const double v_plus = 1.0 / std::sqrt(1.1);
  CHECK(s.v_plus == doctest::Approx(v_plus).epsilon(1e-15));
  CHECK(s.v_plus == doctest::Approx(0.9534625892).epsilon(1e-10));
  const double sigma = -std::sqrt(0.1 / (1.0 - v_plus));
  CHECK(s.sigma == doctest::Approx(sigma).epsilon(1e-13));
  CHECK(s.sigma == doctest::Approx(-1.46588159).epsilon(1e-8));
  CHECK(s.u_plus == doctest::Approx(-sigma * (v_plus - 1.0)).epsilon(1e-13));
  CHECK(s.p_plus - s.p_minus == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(rankine_hugoniot_residual(s) <= 1e-14);
  CHECK_THROWS(end_states_from_amplitude(gas, -0.1));
}

TEST_CASE("global constants are consistent with sampled inequalities") {
  const GasModel gas(1.4, 1.0);
  const BoundConstants c = fit_bound_constants(gas, 200);
  CHECK(c.c1 > 0.0);
  CHECK(c.c3 > 0.0);
  int rejected = 0, checked = 0;
  for (double v : {0.6, 0.8, 0.95, 1.05, 1.5, 2.9, 3.5, 8.0}) {
    for (double w : {0.9, 0.95, 0.99, 1.0}) {
      const GlobalBoundsReport r = check_global_bounds(gas, c, v, w);
      if (r.rejected) {
        ++rejected;
        continue;
      }
      ++checked;
      CHECK_MESSAGE(r.all_hold(), "v=" << v << " w=" << w);
    }
  }
  CHECK(checked > 0);
  const GlobalBoundsReport bad = check_global_bounds(gas, c, -1.0, 1.0);
  CHECK(bad.rejected);
  (void)rejected;
}

TEST_CASE("local expansion ratios tend to one") {
  const GasModel gas(2.0, 1.0);
  const LocalExpansionRatios r = local_expansion_ratios(gas, 0.9601, 0.96);
  CHECK(r.p_ratio == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(r.q_ratio == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(r.q_lower_gap >= 0.0);
}
