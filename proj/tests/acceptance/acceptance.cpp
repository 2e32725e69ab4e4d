// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any criterion fails.
//
//   shocklab_acceptance [--only N]... [--seed S]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shocklab/contraction_experiment.hpp"
#include "shocklab/errors.hpp"
#include "shocklab/inequality_lab.hpp"
#include "shocklab/pde_solver.hpp"
#include "shocklab/shift_controller.hpp"
#include "shocklab/shock_profile.hpp"

using namespace shocklab;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::uint64_t g_seed = 12345;

Outcome theta_constant_check() {
  const ThetaResult th = theta_constant();
  const double exact = 5.0 - std::numbers::pi * std::numbers::pi / 3.0;
  const double e_int = std::abs(th.integral - exact);
  const double e_theta = std::abs(th.theta - 1.30772);
  return {e_int <= 1e-8 && e_theta <= 1e-6,
          fmt("integral err %.2e (tol 1e-8), theta %.10f err %.2e (tol 1e-6)", e_int, th.theta, e_theta)};
}

Outcome polynomial_lemma_check() {
  const double e_end = std::abs(g_poly(-2.0) + 4.0 / 3.0);
  const CertificationReport neg = certify_g_negative(1e-5);
  const GCriticalReport gc = locate_g_local_max();
  const double lo = -1.0 + std::sqrt(2.0) / 2.0, hi = -1.0 + std::sqrt(3.0) / 2.0;
  const bool x1_ok = gc.found && gc.x1 > lo && gc.x1 < hi;
  std::string x1 = gc.found ? fmt("x1 = %.6f", gc.x1)
                            : fmt("no sign change of g' on (-1,0): min g' = %.6f at %.4f", gc.min_derivative, gc.argmin);
  return {e_end <= 1e-14 && neg.certified() && x1_ok,
          fmt("g(-2) err %.1e; g<0 %s with margin %.4g; ", e_end, neg.certified() ? "certified" : "NOT certified",
              neg.margin) +
              x1 + fmt(" (required in (%.5f, %.5f))", lo, hi)};
}

Outcome poincare_check() {
  const double eq = std::abs(weighted_poincare_check_poly({-1.0, 2.0}));
  std::mt19937_64 rng(g_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 200; ++i) {
    std::vector<double> c(9);
    for (double& x : c) x = normal(rng);
    worst = std::min(worst, weighted_poincare_check_poly(c));
  }
  return {eq <= 1e-10 && worst >= -1e-12, fmt("equality err %.2e (tol 1e-10), min slack %.3e over 200 polynomials", eq, worst)};
}

Outcome algebra_check() {
  const CertificationReport r = certify_prop_algebra(0.01, 0.01, AlgebraBox{}, 1e-3);
  return {r.certified(), fmt("max P - E^2 = %.3e (tol 1e-10) over %zu points", r.worst, r.evaluations)};
}

Outcome nonlinear_poincare_check() {
  MaximizeOptions mo;
  mo.points = 64;
  mo.starts = 200;
  mo.seed = g_seed;
  const CertificationReport r = maximize_R_delta(0.01, 10.0, mo);
  return {r.worst <= 1e-8, fmt("max R found = %.3e (tol 1e-8), %zu evaluations", r.worst, r.evaluations)};
}

Outcome profile_check() {
  bool ok = true;
  std::string detail;
  for (double eps : {0.1, 0.05}) {
    const GasModel gas(2.0, 1.0);
    const ShockEndStates s = end_states_from_amplitude(gas, eps);
    const ShockProfile prof = ShockProfile::solve(gas, s);
    const double rh = rankine_hugoniot_residual(s);
    const double ode = prof.ode_residual();
    bool mono = true;
    double y0 = 0.0, yb0 = 0.0;
    prof.eval_y(prof.node(0), y0, yb0);
    for (size_t i = 1; i < prof.size(); ++i) {
      double y = 0.0, yb = 0.0;
      prof.eval_y(prof.node(i), y, yb);
      mono = mono && y > y0 && yb < yb0;
      y0 = y;
      yb0 = yb;
    }
    const Grid g1 = default_grid(eps);
    const Grid g2(g1.xi_min, g1.xi_max, 2 * g1.n);
    const double r1 = steady_residual(gas, prof, g1), r2 = steady_residual(gas, prof, g2);
    const double ratio = r1 / r2;
    const bool pass = rh <= 1e-12 && ode <= 1e-10 && mono && ratio >= 3.5 && ratio <= 4.5;
    ok = ok && pass;
    detail += fmt("[eps %.3g: RH %.1e, ODE %.1e, monotone %d, steady %.2e -> %.2e ratio %.3f] ", eps, rh, ode,
                  mono ? 1 : 0, r1, r2, ratio);
  }
  return {ok, detail};
}

Outcome tail_check() {
  double rl[2], rr[2];
  const double eps[2] = {0.1, 0.05};
  for (int k = 0; k < 2; ++k) {
    const GasModel gas(2.0, 1.0);
    const ShockProfile prof = ShockProfile::solve(gas, end_states_from_amplitude(gas, eps[k]));
    const TailDecayReport t = tail_decay_report(prof);
    rl[k] = t.rate_left;
    rr[k] = t.rate_right;
  }
  const double ql = rl[0] / rl[1], qr = rr[0] / rr[1];
  const bool ok = ql >= 1.6 && ql <= 2.4 && qr >= 1.6 && qr <= 2.4;
  return {ok, fmt("left rates %.5f / %.5f = %.4f, right rates %.5f / %.5f = %.4f (range [1.6, 2.4])", rl[0], rl[1], ql,
                  rr[0], rr[1], qr)};
}

std::vector<ExperimentResult> g_contraction_runs;

ExperimentConfig contraction_config(double gamma, PerturbationKind kind, double amplitude) {
  ExperimentConfig c;
  c.gamma = gamma;
  c.eps = 0.1;
  c.perturbation.kind = kind;
  c.perturbation.amplitude = amplitude;
  c.perturbation.seed = g_seed;
  c.name = fmt("gamma%.1f-%s", gamma, to_string(kind));
  return c;
}

Outcome contraction_check() {
  g_contraction_runs.clear();
  bool ok = true;
  std::string detail;
  for (double gamma : {1.4, 2.0}) {
    for (auto [kind, amp] : {std::pair{PerturbationKind::bump, 0.05}, std::pair{PerturbationKind::random_fourier, 0.05},
                             std::pair{PerturbationKind::large_amplitude, 0.5}}) {
      const ExperimentResult r = run_experiment(contraction_config(gamma, kind, amp));
      const ExperimentSummary& s = r.summary;
      const bool mono = !s.aborted && s.max_increment <= s.mono_tolerance;
      const bool final_ok = s.final_entropy <= s.initial_entropy;
      const bool run_ok = mono && final_ok && s.runtime_seconds < 300.0;
      ok = ok && run_ok;
      detail += fmt("\n    %-28s max dE %.2e (tol %.2e), E %.4e -> %.4e, %.1f s %s", r.config.name.c_str(),
                    s.max_increment, s.mono_tolerance, s.initial_entropy, s.final_entropy, s.runtime_seconds,
                    run_ok ? "ok" : "FAILED");
      if (s.aborted) detail += " aborted: " + s.error;
      g_contraction_runs.push_back(r);
    }
  }
  return {ok, detail};
}

Outcome audit_check() {
  ExperimentConfig c = contraction_config(2.0, PerturbationKind::bump, 0.05);
  c.t_end_units = 3.0;
  const AuditReport a = identity_audit(c, {1, 2});
  const double ratio = a.ratios.empty() ? 0.0 : a.ratios.front();
  const bool ok = a.within_tolerance() && a.levels.size() == 2 && ratio >= 3.0 && ratio <= 5.0;
  return {ok, fmt("rel err %.3e at dx %.4g, %.3e at dx %.4g, ratio %.3f (tol 1%%, ratio in [3, 5])",
                  a.levels[0].max_rel_error, a.levels[0].dx, a.levels[1].max_rel_error, a.levels[1].dx, ratio)};
}

Outcome shift_check() {
  // |Xdot| <= (1/eps)^2 (1 + 2|B|), evaluated with the same factor as the shift law.
  double worst_ratio = 0.0;
  if (g_contraction_runs.empty()) {
    g_contraction_runs.push_back(run_experiment(contraction_config(2.0, PerturbationKind::bump, 0.05)));
  }
  for (const ExperimentResult& r : g_contraction_runs) {
    const double inv_e2 = (1.0 / r.config.eps) * (1.0 / r.config.eps);
    for (const TraceRow& row : r.trace) {
      worst_ratio = std::max(worst_ratio, std::abs(row.Xdot) / (inv_e2 * (1.0 + 2.0 * std::abs(row.B))));
    }
  }
  const bool bound_ok = worst_ratio <= 1.0 + 4.0 * std::numeric_limits<double>::epsilon();

  ExperimentConfig steady = contraction_config(2.0, PerturbationKind::none, 0.0);
  steady.t_end_units = 10.0;
  const ExperimentResult sr = run_experiment(steady);
  const bool steady_ok = !sr.summary.aborted && sr.summary.max_abs_X <= 1e-8;

  const double e = 0.1;
  const bool knots_ok = phi_eps(0.02, e) == -100.0 && phi_eps(-0.02, e) == 100.0 && phi_eps(0.01, e) == -100.0 &&
                        phi_eps(0.0, e) == 0.0 && std::abs(phi_eps(0.005, e) + 50.0) <= 1e-12;
  return {bound_ok && steady_ok && knots_ok,
          fmt("max |Xdot| eps^2 / (1 + 2|B|) = %.4f (<= 1), steady max|X| = %.2e (<= 1e-8), Phi knots %s", worst_ratio,
              sr.summary.max_abs_X, knots_ok ? "exact" : "mismatch")};
}

Outcome scaling_check() {
  SweepConfig dy;
  dy.eps = {0.1, 0.05, 0.025};
  dy.lambda_factors = {5.0};
  const SweepReport a = sweep(dy);
  SweepConfig probe;
  probe.eps = {0.05, 0.025, 0.0125};
  probe.lambda_factors = {4.0, 6.0, 8.0};
  const SweepReport b = sweep(probe);
  const bool ok = a.failed == 0 && b.failed == 0 && std::abs(a.dy_exponent - 2.0) <= 0.3 &&
                  std::abs(b.probe_exponent - 1.0) <= 0.3;
  return {ok, fmt("dy residual exponent %.3f (2 +- 0.3), weighted Q exponent in eps^2/lambda %.3f (1 +- 0.3)",
                  a.dy_exponent, b.probe_exponent)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> only;
  app.add_option("--only", only, "run only these criteria")->delimiter(',');
  app.add_option("--seed", g_seed, "seed for randomized checks");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "theta constant", 1.0, theta_constant_check},
      {2, "polynomial lemma", 10.0, polynomial_lemma_check},
      {3, "weighted Poincare", 5.0, poincare_check},
      {4, "algebraic proposition", 30.0, algebra_check},
      {5, "nonlinear Poincare maximization", 120.0, nonlinear_poincare_check},
      {6, "shock profile", 60.0, profile_check},
      {7, "tail scaling", 60.0, tail_check},
      {8, "contraction", 6 * 300.0, contraction_check},
      {9, "identity audit", 600.0, audit_check},
      {10, "shift bounds", 120.0, shift_check},
      {11, "scaling diagnostics", 600.0, scaling_check},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_budget = secs <= c.budget_seconds;
    const bool pass = o.passed && in_budget;
    if (!pass) ++failed;
    std::printf("criterion %2d %-32s %s  %s (%.2f s, budget %.0f s%s)\n", c.id, c.title, pass ? "PASS" : "FAIL",
                o.detail.c_str(), secs, c.budget_seconds, in_budget ? "" : ", over budget");
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
