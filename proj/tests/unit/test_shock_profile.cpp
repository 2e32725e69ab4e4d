#include <cmath>

#include <boost/numeric/odeint.hpp>
#include <doctest.h>

#include "shocklab/errors.hpp"
#include "shocklab/pde_solver.hpp"
#include "shocklab/shock_profile.hpp"

using namespace shocklab;

namespace {

// Independent integration of sigma p' = sigma^2 (v(p) - v_-) + p - p_- from the midpoint volume.
double oracle_pressure(const ShockEndStates& s, double xi) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 1>;
  const double g = s.gamma;
  auto rhs = [&](const State& p, State& dp, double) {
    const double v = std::pow(p[0], -1.0 / g);
    dp[0] = (s.sigma * s.sigma * (v - s.v_minus) + p[0] - s.p_minus) / s.sigma;
  };
  State p{std::pow(0.5 * (s.v_minus + s.v_plus), -g)};
  if (xi == 0.0) return p[0];
  auto stepper = odeint::make_controlled(1e-13, 1e-13, odeint::runge_kutta_dopri5<State>());
  odeint::integrate_adaptive(stepper, rhs, p, 0.0, xi, xi > 0 ? 1e-3 : -1e-3);
  return p[0];
}

}  // namespace

TEST_CASE("profile matches an independent ODE integration") {
  for (double g : {1.4, 2.0}) {
    const GasModel gas(g, 1.0);
    const ShockEndStates s = end_states_from_amplitude(gas, 0.1);
    const ShockProfile prof = ShockProfile::solve(gas, s);
    for (double xi : {-60.0, -20.0, -5.0, 0.0, 3.3, 17.0, 60.0}) {
      const ProfilePoint q = prof.eval(xi);
      const double p = oracle_pressure(s, xi);
      CHECK_MESSAGE(std::abs(q.p - p) <= 1e-9 * s.eps, "gamma=" << g << " xi=" << xi);
      CHECK(q.v == doctest::Approx(std::pow(q.p, -1.0 / g)).epsilon(1e-13));
    }
  }
}

TEST_CASE("profile connects the end states monotonically") {
  const GasModel gas(2.0, 1.0);
  const ShockEndStates s = end_states_from_amplitude(gas, 0.1);
  const ShockProfile prof = ShockProfile::solve(gas, s);
  CHECK(prof.ode_residual() <= 1e-10);
  CHECK(prof.eval(prof.xi_first()).v == doctest::Approx(s.v_minus).epsilon(1e-6));
  CHECK(prof.eval(prof.xi_last()).v == doctest::Approx(s.v_plus).epsilon(1e-6));
  double prev = -1.0;
  for (size_t i = 0; i < prof.size(); i += 7) {
    double y, yb;
    prof.eval_y(prof.node(i), y, yb);
    CHECK(y + yb == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(y > prev);
    prev = y;
  }
  // v decreases and the steady h equation gives sigma h' = p'.
  const ProfilePoint q = prof.eval(1.7);
  CHECK(q.dv < 0.0);
  CHECK(q.dh == doctest::Approx(q.dp / s.sigma).epsilon(1e-10));
  CHECK_THROWS_AS(prof.eval(prof.xi_last() + 2.0 * prof.extension() + 1.0), EvaluationError);
}

TEST_CASE("tail decay rates scale with eps") {
  const GasModel gas(2.0, 1.0);
  double r[2];
  int k = 0;
  for (double eps : {0.1, 0.05}) {
    const ShockProfile prof = ShockProfile::solve(gas, end_states_from_amplitude(gas, eps));
    const TailDecayReport t = tail_decay_report(prof);
    CHECK(t.samples_left > 3);
    r[k++] = t.rate_left;
  }
  CHECK(r[0] / r[1] == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("left tail rate equals the linearized eigenvalue") {
  const GasModel gas(2.0, 1.0);
  const ShockEndStates s = end_states_from_amplitude(gas, 0.05);
  const ShockProfile prof = ShockProfile::solve(gas, s);
  // Near v_-: sigma p' = sigma^2 (v - v_-) + p - p_- with v - v_- = (p - p_-)/p'(v_-).
  const double mu = (s.sigma * s.sigma / gas.dpressure(s.v_minus) + 1.0) / s.sigma;
  const TailDecayReport t = tail_decay_report(prof);
  CHECK(t.rate_left == doctest::Approx(std::abs(mu)).epsilon(1e-3));
}

TEST_CASE("lattice profile is a discrete steady state") {
  const GasModel gas(2.0, 1.0);
  const ShockEndStates s = end_states_from_amplitude(gas, 0.1);
  const ShockProfile cont = ShockProfile::solve(gas, s);
  const Grid grid = default_grid(0.1);
  const ShockProfile lat = ShockProfile::lattice(cont, grid.xi_min, grid.dx(), grid.n);
  CHECK(lat.is_lattice());
  const double r_lat = steady_residual(gas, lat, grid);
  const double r_cont = steady_residual(gas, cont, grid);
  CHECK(r_lat <= 1e-12);
  CHECK(r_lat < 1e-2 * r_cont);
  // Both solve the same ODE up to O(dx^2).
  CHECK(std::abs(lat.eval(0.0).v - cont.eval(0.0).v) <= 1e-12);
  CHECK(std::abs(lat.eval(15.0).v - cont.eval(15.0).v) <= 1e-4);
}
