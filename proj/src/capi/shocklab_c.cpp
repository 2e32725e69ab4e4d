// Extern "C" boundary: every entry point converts exceptions into status codes.

#include "shocklab/shocklab.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "shocklab/contraction_experiment.hpp"
#include "shocklab/errors.hpp"
#include "shocklab/inequality_lab.hpp"
#include "shocklab/pde_solver.hpp"
#include "shocklab/shock_profile.hpp"
#include "shocklab/weight.hpp"

struct shk_profile {
  shocklab::GasModel gas;
  shocklab::ShockEndStates states;
  std::shared_ptr<const shocklab::ShockProfile> profile;
};

struct shk_config {
  shocklab::ExperimentConfig config;
};

struct shk_experiment {
  shocklab::ExperimentResult result;
};

namespace {

thread_local std::string g_last_error;

shk_status fail(shk_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

shk_status from_kind(shocklab::ErrorKind k) {
  using shocklab::ErrorKind;
  switch (k) {
    case ErrorKind::domain: return SHK_ERR_DOMAIN;
    case ErrorKind::solver: return SHK_ERR_SOLVER;
    case ErrorKind::evaluation: return SHK_ERR_EVALUATION;
    case ErrorKind::quadrature: return SHK_ERR_QUADRATURE;
    case ErrorKind::diagnostics: return SHK_ERR_DIAGNOSTICS;
    case ErrorKind::config: return SHK_ERR_CONFIG;
    case ErrorKind::io: return SHK_ERR_IO;
  }
  return SHK_ERR_INTERNAL;
}

template <class F>
shk_status guarded(F&& f) noexcept {
  try {
    return f();
  } catch (const shocklab::Error& e) {
    return fail(from_kind(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(SHK_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SHK_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SHK_ERR_INTERNAL, "unknown exception");
  }
}

shk_status copy_out(const std::string& s, char* buf, size_t cap, size_t* needed) {
  if (needed) *needed = s.size() + 1;
  if (!buf) return needed ? SHK_OK : fail(SHK_ERR_INVALID_ARGUMENT, "null buffer and null size");
  if (cap < s.size() + 1) return fail(SHK_ERR_BUFFER_TOO_SMALL, "buffer too small");
  std::memcpy(buf, s.c_str(), s.size() + 1);
  return SHK_OK;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw shocklab::IoError("cannot open " + path);
  out << text << '\n';
  if (!out) throw shocklab::IoError("failed writing " + path);
}

#define SHK_REQUIRE(cond, msg) \
  if (!(cond)) return fail(SHK_ERR_INVALID_ARGUMENT, msg)

}  // namespace

extern "C" {

const char* shk_last_error(void) { return g_last_error.c_str(); }

const char* shk_status_name(shk_status s) {
  switch (s) {
    case SHK_OK: return "ok";
    case SHK_ERR_DOMAIN: return "domain";
    case SHK_ERR_SOLVER: return "solver";
    case SHK_ERR_EVALUATION: return "evaluation";
    case SHK_ERR_QUADRATURE: return "quadrature";
    case SHK_ERR_DIAGNOSTICS: return "diagnostics";
    case SHK_ERR_CONFIG: return "config";
    case SHK_ERR_IO: return "io";
    case SHK_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case SHK_ERR_BUFFER_TOO_SMALL: return "buffer_too_small";
    case SHK_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* shk_version(void) { return "0.1.0"; }

// ---- profile ----------------------------------------------------------------------------

shk_status shk_profile_create(double gamma, double v_minus, double u_minus, double eps, shk_profile** out) {
  SHK_REQUIRE(out, "null output handle");
  *out = nullptr;
  return guarded([&] {
    shocklab::GasModel gas(gamma, v_minus, u_minus);
    const auto states = shocklab::end_states_from_amplitude(gas, eps);
    auto prof = std::make_shared<const shocklab::ShockProfile>(shocklab::ShockProfile::solve(gas, states));
    *out = new shk_profile{gas, states, std::move(prof)};
    return SHK_OK;
  });
}

shk_status shk_profile_create_from_config(const shk_config* c, shk_profile** out) {
  SHK_REQUIRE(c, "null config");
  return shk_profile_create(c->config.gamma, c->config.v_minus, c->config.u_minus, c->config.eps, out);
}

void shk_profile_destroy(shk_profile* p) { delete p; }

shk_status shk_profile_end_states(const shk_profile* p, shk_end_states* out) {
  SHK_REQUIRE(p && out, "null argument");
  const auto& s = p->states;
  *out = {s.gamma, s.v_minus, s.u_minus, s.v_plus, s.u_plus, s.sigma, s.eps, s.p_minus, s.p_plus};
  return SHK_OK;
}

shk_status shk_profile_report_get(const shk_profile* p, shk_profile_report* out) {
  SHK_REQUIRE(p && out, "null argument");
  return guarded([&] {
    const auto& prof = *p->profile;
    out->rh_residual = shocklab::rankine_hugoniot_residual(p->states);
    out->ode_residual = prof.ode_residual();
    // y rises and ybar falls; checking both keeps full precision in either tail, where v
    // itself rounds to the end state.
    int mono = 1;
    double y0 = 0.0, yb0 = 0.0;
    prof.eval_y(prof.node(0), y0, yb0);
    for (size_t i = 1; i < prof.size(); ++i) {
      double y = 0.0, yb = 0.0;
      prof.eval_y(prof.node(i), y, yb);
      if (!(y > y0) || !(yb < yb0)) mono = 0;
      y0 = y;
      yb0 = yb;
    }
    out->monotone = mono;
    const auto tail = shocklab::tail_decay_report(prof);
    out->rate_left = tail.rate_left;
    out->rate_right = tail.rate_right;
    out->kappa = tail.kappa;
    out->tail_gap = std::max(std::abs(prof.eval(prof.xi_first()).v - p->states.v_minus),
                             std::abs(prof.eval(prof.xi_last()).v - p->states.v_plus));
    return SHK_OK;
  });
}

shk_status shk_profile_steady_residual(const shk_profile* p, double dx, double* out) {
  SHK_REQUIRE(p && out, "null argument");
  SHK_REQUIRE(dx > 0.0, "dx must be positive");
  return guarded([&] {
    const double half = 40.0 / p->states.eps;
    const int cells = static_cast<int>(std::lround(2.0 * half / dx));
    *out = shocklab::steady_residual(p->gas, *p->profile, shocklab::Grid(-half, half, cells));
    return SHK_OK;
  });
}

shk_status shk_profile_write_csv(const shk_profile* p, double lambda, double xi_lo, double xi_hi, size_t n,
                                 const char* path) {
  SHK_REQUIRE(p && path, "null argument");
  return guarded([&] {
    shocklab::WeightFn w(p->profile, lambda);
    shocklab::write_profile_csv(path, w, xi_lo, xi_hi, n);
    return SHK_OK;
  });
}

// ---- config -----------------------------------------------------------------------------

shk_status shk_config_create(shk_config** out) {
  SHK_REQUIRE(out, "null output handle");
  return guarded([&] {
    *out = new shk_config{};
    return SHK_OK;
  });
}

void shk_config_destroy(shk_config* c) { delete c; }

shk_status shk_config_load(shk_config* c, const char* path) {
  SHK_REQUIRE(c && path, "null argument");
  return guarded([&] {
    c->config = shocklab::load_config(path, c->config);
    return SHK_OK;
  });
}

shk_status shk_config_parse(shk_config* c, const char* text) {
  SHK_REQUIRE(c && text, "null argument");
  return guarded([&] {
    c->config = shocklab::parse_config(text, c->config);
    return SHK_OK;
  });
}

shk_status shk_config_set(shk_config* c, const char* key, const char* value) {
  SHK_REQUIRE(c && key && value, "null argument");
  return guarded([&] {
    shocklab::apply_config_key(c->config, key, value);
    return SHK_OK;
  });
}

shk_status shk_config_to_text(const shk_config* c, char* buf, size_t cap, size_t* needed) {
  SHK_REQUIRE(c, "null argument");
  return guarded([&] { return copy_out(c->config.to_text(), buf, cap, needed); });
}

shk_status shk_config_resolved_lambda(const shk_config* c, double* out) {
  SHK_REQUIRE(c && out, "null argument");
  return guarded([&] {
    *out = c->config.resolved_lambda();
    return SHK_OK;
  });
}

// ---- experiments ------------------------------------------------------------------------

shk_status shk_experiment_run(const shk_config* c, shk_experiment** out) {
  SHK_REQUIRE(c && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    c->config.validate();
    *out = new shk_experiment{shocklab::run_experiment(c->config)};
    return SHK_OK;
  });
}

shk_status shk_experiment_resume(const shk_config* c, const char* checkpoint, shk_experiment** out) {
  SHK_REQUIRE(c && checkpoint && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    c->config.validate();
    shocklab::Grid g;
    shocklab::FieldState s;
    double x = 0.0;
    shocklab::read_checkpoint(checkpoint, g, s, x);
    const shocklab::Grid expect = c->config.grid();
    if (g.nodes() != expect.nodes() || std::abs(g.xi_min - expect.xi_min) > 1e-9 * std::abs(expect.xi_min) ||
        std::abs(g.xi_max - expect.xi_max) > 1e-9 * std::abs(expect.xi_max))
      throw shocklab::ConfigError("checkpoint grid does not match the configuration");
    *out = new shk_experiment{shocklab::run_experiment(c->config, s, x)};
    return SHK_OK;
  });
}

void shk_experiment_destroy(shk_experiment* e) { delete e; }

shk_status shk_experiment_passed(const shk_experiment* e, int* passed) {
  SHK_REQUIRE(e && passed, "null argument");
  *passed = e->result.summary.all_passed() ? 1 : 0;
  return SHK_OK;
}

shk_status shk_experiment_records(const shk_experiment* e, size_t* n) {
  SHK_REQUIRE(e && n, "null argument");
  *n = e->result.trace.size();
  return SHK_OK;
}

shk_status shk_experiment_summary_json(const shk_experiment* e, char* buf, size_t cap, size_t* needed) {
  SHK_REQUIRE(e, "null argument");
  return guarded([&] { return copy_out(shocklab::summary_json(e->result), buf, cap, needed); });
}

shk_status shk_experiment_write_trace(const shk_experiment* e, const char* path) {
  SHK_REQUIRE(e && path, "null argument");
  return guarded([&] {
    shocklab::write_trace_csv(path, e->result.trace);
    return SHK_OK;
  });
}

shk_status shk_experiment_write_summary(const shk_experiment* e, const char* path) {
  SHK_REQUIRE(e && path, "null argument");
  return guarded([&] {
    write_text(path, shocklab::summary_json(e->result));
    return SHK_OK;
  });
}

shk_status shk_experiment_write_snapshot(const shk_experiment* e, const char* path) {
  SHK_REQUIRE(e && path, "null argument");
  return guarded([&] {
    shocklab::write_snapshot_csv(path, e->result.grid, e->result.final_state);
    return SHK_OK;
  });
}

shk_status shk_experiment_write_checkpoint(const shk_experiment* e, const char* path) {
  SHK_REQUIRE(e && path, "null argument");
  return guarded([&] {
    shocklab::write_checkpoint(path, e->result.grid, e->result.final_state, e->result.final_X);
    return SHK_OK;
  });
}

// ---- audit ------------------------------------------------------------------------------

shk_status shk_audit_run(const shk_config* c, const int* refinements, size_t n, const char* json_path,
                         int* within_tolerance, int* ratios_in_range) {
  SHK_REQUIRE(c, "null argument");
  SHK_REQUIRE(n == 0 || refinements, "null refinements");
  return guarded([&] {
    c->config.validate();
    std::vector<int> levels = n ? std::vector<int>(refinements, refinements + n) : std::vector<int>{1, 2};
    const auto rep = shocklab::identity_audit(c->config, levels);
    if (json_path) write_text(json_path, shocklab::audit_json(rep));
    if (within_tolerance) *within_tolerance = rep.within_tolerance() ? 1 : 0;
    if (ratios_in_range) *ratios_in_range = rep.ratios_in_range() ? 1 : 0;
    return SHK_OK;
  });
}

// ---- sweep ------------------------------------------------------------------------------

shk_status shk_sweep_run(const shk_config* base, const double* eps, size_t n_eps, const double* factors,
                         size_t n_factors, int run_experiments, const char* csv_path, const char* json_path,
                         shk_sweep_fits* out) {
  SHK_REQUIRE(base, "null argument");
  SHK_REQUIRE(n_eps == 0 || eps, "null eps list");
  SHK_REQUIRE(n_factors == 0 || factors, "null factor list");
  return guarded([&] {
    shocklab::SweepConfig sc;
    sc.base = base->config;
    if (n_eps) sc.eps.assign(eps, eps + n_eps);
    if (n_factors) sc.lambda_factors.assign(factors, factors + n_factors);
    sc.run_experiments = run_experiments != 0;
    const auto rep = shocklab::sweep(sc);
    if (csv_path) shocklab::write_sweep_csv(csv_path, rep);
    if (json_path) write_text(json_path, shocklab::sweep_json(rep));
    if (out) {
      *out = {rep.tail_exponent_left, rep.tail_exponent_right, rep.dy_exponent, rep.probe_exponent,
              rep.rows.size(), rep.failed};
    }
    return SHK_OK;
  });
}

// ---- inequalities -----------------------------------------------------------------------

void shk_verify_options_default(shk_verify_options* o) {
  if (!o) return;
  const shocklab::SuiteOptions d;
  o->g_step = d.g_step;
  o->g_eta = d.g_eta;
  o->poincare_polys = d.poincare_polys;
  o->algebra_delta = d.algebra_delta;
  o->algebra_delta1 = d.algebra_delta1;
  o->algebra_step = d.algebra_step;
  o->r_delta = d.r_delta;
  o->r_c1 = d.r_c1;
  o->r_starts = d.maximize.starts;
  o->r_points = static_cast<int>(d.maximize.points);
  o->search_delta = d.search_delta ? 1 : 0;
  o->seed = d.seed;
}

shk_status shk_verify_inequalities(const shk_verify_options* o, const char* out_dir, int* passed, char* buf,
                                   size_t cap, size_t* needed) {
  return guarded([&] {
    shocklab::SuiteOptions opt;
    if (o) {
      if (!(o->g_step > 0.0) || !(o->algebra_step > 0.0) || o->poincare_polys < 0 || o->r_starts < 1 ||
          o->r_points < 4)
        return fail(SHK_ERR_INVALID_ARGUMENT, "invalid verification options");
      opt.g_step = o->g_step;
      opt.g_eta = o->g_eta;
      opt.poincare_polys = o->poincare_polys;
      opt.algebra_delta = o->algebra_delta;
      opt.algebra_delta1 = o->algebra_delta1;
      opt.algebra_step = o->algebra_step;
      opt.r_delta = o->r_delta;
      opt.r_c1 = o->r_c1;
      opt.maximize.starts = o->r_starts;
      opt.maximize.points = static_cast<decltype(opt.maximize.points)>(o->r_points);
      opt.search_delta = o->search_delta != 0;
      opt.seed = o->seed;
      opt.maximize.seed = o->seed;
    }
    const auto res = shocklab::run_inequality_suite(opt);
    const std::string all = shocklab::suite_json(res);
    if (out_dir) {
      std::filesystem::create_directories(out_dir);
      const std::filesystem::path dir(out_dir);
      for (const auto& e : res.entries) write_text((dir / (e.key + ".json")).string(), shocklab::to_json(e.report));
      write_text((dir / "certification.json").string(), all);
    }
    if (passed) *passed = res.passed() ? 1 : 0;
    if (buf || needed) return copy_out(all, buf, cap, needed);
    return SHK_OK;
  });
}

}  // extern "C"
