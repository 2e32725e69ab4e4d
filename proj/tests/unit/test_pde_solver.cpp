#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>

#include <doctest.h>

#include "shocklab/errors.hpp"
#include "shocklab/pde_solver.hpp"

using namespace shocklab;

TEST_CASE("central derivative is exact on quadratics") {
  const Grid g(-1.0, 2.0, 30);
  std::vector<double> f(g.nodes());
  for (size_t i = 0; i < f.size(); ++i) {
    const double x = g.x(static_cast<int>(i));
    f[i] = 3.0 * x * x - x + 2.0;
  }
  const std::vector<double> d = central_derivative(f, g.dx());
  for (size_t i = 0; i < f.size(); ++i) {
    CHECK(d[i] == doctest::Approx(6.0 * g.x(static_cast<int>(i)) - 1.0).epsilon(1e-12));
  }
}

TEST_CASE("default grid spacing") {
  const Grid g = default_grid(0.1);
  CHECK(g.xi_min == doctest::Approx(-400.0));
  CHECK(g.xi_max == doctest::Approx(400.0));
  CHECK(g.dx() <= 1.0 / (50.0 * 0.1) + 1e-12);
}

TEST_CASE("constant states are steady") {
  const GasModel gas(2.0, 1.0);
  const ShockEndStates s = end_states_from_amplitude(gas, 0.1);
  const Grid g(-10.0, 10.0, 100);
  std::vector<double> v(g.nodes(), 1.2), h(g.nodes(), -0.3), dv, dh;
  semi_discrete_rhs(gas, s.sigma, g, v, h, dv, dh);
  for (size_t i = 0; i < v.size(); ++i) {
    CHECK(dv[i] == 0.0);
    CHECK(dh[i] == 0.0);
  }
}

TEST_CASE("semi-discrete right side is second order on smooth data") {
  const GasModel gas(2.0, 1.0);
  const double sigma = -1.3;
  auto err_at = [&](int n) {
    const Grid g(-M_PI, M_PI, n);
    std::vector<double> v(g.nodes()), h(g.nodes()), dv, dh;
    for (size_t i = 0; i < v.size(); ++i) {
      const double x = g.x(static_cast<int>(i));
      v[i] = 1.0 + 0.2 * std::sin(x);
      h[i] = 0.1 * std::cos(x);
    }
    semi_discrete_rhs(gas, sigma, g, v, h, dv, dh);
    double e = 0.0;
    for (size_t i = 2; i + 2 < v.size(); ++i) {
      const double x = g.x(static_cast<int>(i));
      const double V = 1.0 + 0.2 * std::sin(x), Vx = 0.2 * std::cos(x), Vxx = -0.2 * std::sin(x);
      const double Hx = -0.1 * std::sin(x);
      const double P1 = -2.0 * std::pow(V, -3.0), P2 = 6.0 * std::pow(V, -4.0);
      const double pxx = P2 * Vx * Vx + P1 * Vxx;
      const double exact_v = sigma * Vx + Hx - pxx;
      const double exact_h = sigma * Hx - P1 * Vx;
      e = std::max({e, std::abs(dv[i] - exact_v), std::abs(dh[i] - exact_h)});
    }
    return e;
  };
  const double ratio = err_at(100) / err_at(200);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("steady residual of the continuum profile converges at second order") {
  const GasModel gas(2.0, 1.0);
  const ShockEndStates s = end_states_from_amplitude(gas, 0.1);
  const ShockProfile prof = ShockProfile::solve(gas, s);
  const Grid g1 = default_grid(0.1);
  const Grid g2(g1.xi_min, g1.xi_max, 2 * g1.n);
  const double ratio = steady_residual(gas, prof, g1) / steady_residual(gas, prof, g2);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("stepper keeps the lattice profile fixed and the coupled ODE exact") {
  const GasModel gas(2.0, 1.0);
  const ShockEndStates s = end_states_from_amplitude(gas, 0.1);
  const ShockProfile cont = ShockProfile::solve(gas, s);
  // Boundary nodes are pinned to the exact end states, so the window must reach the tails.
  const Grid g = default_grid(0.1);
  const ShockProfile lat = ShockProfile::lattice(cont, g.xi_min, g.dx(), g.n);
  FieldState init;
  for (size_t i = 0; i < g.nodes(); ++i) {
    const ProfilePoint q = lat.eval(g.x(static_cast<int>(i)));
    init.v.push_back(q.v);
    init.h.push_back(q.h);
  }
  Stepper st(gas, s, g, init);
  // A zero coupled rate must leave X untouched.
  st.set_coupled([&](const std::vector<double>&, const std::vector<double>&, double) { return 0.0; }, 0.0);
  st.advance_to(2.0);
  CHECK(st.state().t == doctest::Approx(2.0).epsilon(1e-14));
  double drift = 0.0;
  for (size_t i = 0; i < g.nodes(); ++i) drift = std::max(drift, std::abs(st.state().v[i] - init.v[i]));
  CHECK(drift <= 1e-9);
  CHECK(st.coupled_value() == 0.0);
  CHECK(st.max_dt() <= 0.4 * g.dx() * g.dx() / (2.0 * 2.0) + 1e-15);
}

TEST_CASE("coupled scalar is integrated with the field stages") {
  const GasModel gas(2.0, 1.0);
  const ShockEndStates s = end_states_from_amplitude(gas, 0.1);
  const Grid g(-5.0, 5.0, 50);
  FieldState init;
  init.v.assign(g.nodes(), 1.0);
  init.h.assign(g.nodes(), 0.0);
  Stepper st(gas, s, g, init);
  // X' = -X has the solution exp(-t); RK4 error is O(dt^4).
  st.set_coupled([](const std::vector<double>&, const std::vector<double>&, double x) { return -x; }, 1.0);
  st.advance_to(1.0);
  CHECK(st.coupled_value() == doctest::Approx(std::exp(-1.0)).epsilon(1e-10));
}

TEST_CASE("checkpoint round trip is bit exact") {
  const Grid g(-3.0, 7.0, 11);
  FieldState s;
  s.t = 1.25;
  for (size_t i = 0; i < g.nodes(); ++i) {
    s.v.push_back(1.0 + 0.1 * std::sin(static_cast<double>(i)));
    s.h.push_back(std::cos(static_cast<double>(i)) / 3.0);
  }
  const std::string path = (std::filesystem::temp_directory_path() / "shocklab_ckpt_test.bin").string();
  write_checkpoint(path, g, s, -0.75);
  CHECK(std::filesystem::file_size(path) == 8 + 4 + 4 + 8 + 4 * 8 + 2 * 8 * g.nodes());
  {
    std::ifstream in(path, std::ios::binary);
    char magic[9] = {};
    in.read(magic, 8);
    CHECK(std::string(magic) == "SHKCKPT1");
    unsigned char ver[4];
    in.read(reinterpret_cast<char*>(ver), 4);
    CHECK(ver[0] == 1);
    CHECK(ver[1] == 0);
  }
  Grid g2;
  FieldState s2;
  double x = 0.0;
  read_checkpoint(path, g2, s2, x);
  CHECK(g2.n == g.n);
  CHECK(g2.xi_min == g.xi_min);
  CHECK(g2.xi_max == g.xi_max);
  CHECK(s2.t == s.t);
  CHECK(x == -0.75);
  CHECK(s2.v == s.v);
  CHECK(s2.h == s.h);

  std::ofstream(path, std::ios::binary) << "garbage";
  CHECK_THROWS_AS(read_checkpoint(path, g2, s2, x), IoError);
  std::filesystem::remove(path);
}
