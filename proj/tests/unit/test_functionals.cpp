#include <cmath>
#include <memory>

#include <doctest.h>

#include "shocklab/functionals.hpp"

using namespace shocklab;

namespace {

struct Fixture {
  GasModel gas{2.0, 1.0};
  ShockEndStates s = end_states_from_amplitude(gas, 0.1);
  Grid grid = default_grid(0.1, 20.0);
  std::shared_ptr<const ShockProfile> prof =
      std::make_shared<const ShockProfile>(ShockProfile::solve(gas, s));
  std::shared_ptr<const WeightFn> w = std::make_shared<const WeightFn>(prof, 0.45);
  FunctionalEvaluator ev{gas, w, grid};

  // Profile plus a smooth bump in v and h.
  FieldState perturbed(double amp) const {
    FieldState f;
    for (size_t i = 0; i < grid.nodes(); ++i) {
      const double x = grid.x(static_cast<int>(i));
      const ProfilePoint q = prof->eval(x);
      const double bump = amp * std::exp(-std::pow((x + 5.0) / 8.0, 2));
      f.v.push_back(q.v + bump);
      f.h.push_back(q.h - 0.5 * bump);
    }
    return f;
  }
};

double trapezoid(const std::vector<double>& f, double dx) {
  double s = 0.0;
  for (size_t i = 0; i < f.size(); ++i) s += (i == 0 || i + 1 == f.size() ? 0.5 : 1.0) * f[i];
  return s * dx;
}

}  // namespace

TEST_CASE("all functionals vanish on the profile") {
  Fixture fx;
  const FieldState f = fx.perturbed(0.0);
  const FunctionalBreakdown b = fx.ev.breakdown(f.v, f.h, 0.0);
  CHECK(std::abs(b.weighted_entropy) <= 1e-20);
  CHECK(std::abs(b.Y) <= 1e-20);
  CHECK(std::abs(b.B) <= 1e-20);
  CHECK(std::abs(b.G) <= 1e-20);
}

TEST_CASE("weighted entropy against a direct evaluation") {
  Fixture fx;
  const FieldState f = fx.perturbed(0.02);
  const double X = 1.3;
  std::vector<double> integrand(fx.grid.nodes());
  for (size_t i = 0; i < integrand.size(); ++i) {
    const double xi = fx.grid.x(static_cast<int>(i)) - X;
    const ProfilePoint q = fx.prof->eval(xi);
    const double a = fx.w->eval(xi).a;
    const double v = f.v[i], vt = q.v;
    // Q(v) = v^-1 for gamma = 2.
    const double Q = 1.0 / v - 1.0 / vt + (v - vt) / (vt * vt);
    integrand[i] = a * (0.5 * (f.h[i] - q.h) * (f.h[i] - q.h) + Q);
  }
  const double direct = trapezoid(integrand, fx.grid.dx());
  CHECK(fx.ev.weighted_entropy(f.v, f.h, X) == doctest::Approx(direct).epsilon(1e-9));
  CHECK(fx.ev.breakdown(f.v, f.h, X).weighted_entropy == doctest::Approx(direct).epsilon(1e-9));
}

TEST_CASE("Y is the derivative of the weighted entropy in the shift") {
  Fixture fx;
  const FieldState f = fx.perturbed(0.03);
  for (double X : {-2.0, 0.0, 3.5}) {
    const double h = 1e-3;
    const double dE = (fx.ev.weighted_entropy(f.v, f.h, X + h) - fx.ev.weighted_entropy(f.v, f.h, X - h)) / (2 * h);
    const FunctionalBreakdown b = fx.ev.breakdown(f.v, f.h, X);
    CHECK(b.Y == doctest::Approx(dE).epsilon(1e-5));
    CHECK(b.Y_g + b.Y_b + b.Y_l == doctest::Approx(b.Y).epsilon(1e-11));
  }
}

TEST_CASE("signs and composition of the good and bad terms") {
  Fixture fx;
  const FieldState f = fx.perturbed(0.03);
  const FunctionalBreakdown b = fx.ev.breakdown(f.v, f.h, 0.7);
  CHECK(b.G1 >= 0.0);
  CHECK(b.G2 >= 0.0);
  CHECK(b.D > 0.0);
  CHECK(b.G == doctest::Approx(b.G1 + b.G2 + b.D));
  CHECK(b.B == doctest::Approx(b.B1 + b.B2));
  const double e4 = std::pow(0.1, 4);
  CHECK(b.R == doctest::Approx(-b.Y * b.Y / e4 + (1 + b.margin) * std::abs(b.B) - b.G));
  CHECK(b.margin == doctest::Approx(0.1 * 0.1 / 0.45));
  double Y, B;
  fx.ev.y_and_b(f.v, f.h, 0.7, Y, B);
  CHECK(Y == doctest::Approx(b.Y).epsilon(1e-12));
  CHECK(B == doctest::Approx(b.B).epsilon(1e-12));
}

TEST_CASE("dissipation against a direct cell sum") {
  Fixture fx;
  const FieldState f = fx.perturbed(0.05);
  const double X = -0.4, dx = fx.grid.dx();
  double d = 0.0;
  for (size_t i = 0; i + 1 < fx.grid.nodes(); ++i) {
    const double x0 = fx.grid.x(static_cast<int>(i)) - X, x1 = x0 + dx;
    const double w0 = 1.0 / (f.v[i] * f.v[i]) - fx.prof->eval(x0).p;
    const double w1 = 1.0 / (f.v[i + 1] * f.v[i + 1]) - fx.prof->eval(x1).p;
    const double a = 0.5 * (fx.w->eval(x0).a + fx.w->eval(x1).a);
    d += a * (w1 - w0) * (w1 - w0) / dx;
  }
  CHECK(fx.ev.dissipation(f.v, X) == doctest::Approx(d).epsilon(1e-9));
}

TEST_CASE("truncation clamps the pressure deviation") {
  Fixture fx;
  const FieldState f = fx.perturbed(-0.2);
  const double k = 0.05;
  const TruncatedState t = truncate_state(fx.ev, f, 0.0, k);
  for (size_t i = 0; i < f.v.size(); ++i) {
    const double pt = fx.prof->eval(fx.grid.x(static_cast<int>(i))).p;
    const double dp = 1.0 / (t.v_bar[i] * t.v_bar[i]) - pt;
    CHECK(std::abs(dp) <= k * (1 + 1e-12));
    const double orig = 1.0 / (f.v[i] * f.v[i]) - pt;
    if (std::abs(orig) < k) CHECK(t.v_bar[i] == doctest::Approx(f.v[i]).epsilon(1e-13));
  }
}

TEST_CASE("profile layer ratio residual shrinks like eps squared") {
  const GasModel gas(2.0, 1.0);
  double r[2];
  int k = 0;
  for (double eps : {0.1, 0.05}) {
    const ShockProfile prof = ShockProfile::solve(gas, end_states_from_amplitude(gas, eps));
    r[k++] = dy_dxi_ratio_residual(gas, prof);
  }
  CHECK(std::log2(r[0] / r[1]) == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("constrained probe has vanishing Y") {
  Fixture fx;
  const ConstrainedProbe p = y_constrained_probe(fx.ev);
  CHECK(p.s > 0.0);
  CHECK(std::abs(p.Y) <= 1e-10);
  CHECK(p.weighted_q > 0.0);
  CHECK(p.weighted_h > 0.0);
}
