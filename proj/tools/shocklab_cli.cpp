// Command line front end. Uses only the C interface of the library.

#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shocklab/shocklab.h"

namespace {

struct ConfigDeleter {
  void operator()(shk_config* c) const { shk_config_destroy(c); }
};
struct ProfileDeleter {
  void operator()(shk_profile* p) const { shk_profile_destroy(p); }
};
struct ExperimentDeleter {
  void operator()(shk_experiment* e) const { shk_experiment_destroy(e); }
};
using ConfigPtr = std::unique_ptr<shk_config, ConfigDeleter>;
using ProfilePtr = std::unique_ptr<shk_profile, ProfileDeleter>;
using ExperimentPtr = std::unique_ptr<shk_experiment, ExperimentDeleter>;

// Exit codes: 0 all checks pass, 1 a check failed, 2 usage or library error.
constexpr int kFailedCheck = 1;
constexpr int kError = 2;

struct LibraryFailure {
  int code;
};

void check(shk_status s, const char* what) {
  if (s == SHK_OK) return;
  std::fprintf(stderr, "error: %s: %s (%s)\n", what, shk_last_error(), shk_status_name(s));
  throw LibraryFailure{kError};
}

struct Common {
  std::string config_path;
  std::vector<std::string> sets;
  std::string out_dir = ".";
  long long seed = -1;
};

ConfigPtr make_config(const Common& o) {
  shk_config* raw = nullptr;
  check(shk_config_create(&raw), "create config");
  ConfigPtr c(raw);
  if (!o.config_path.empty()) check(shk_config_load(c.get(), o.config_path.c_str()), "load config");
  for (const auto& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "error: --set expects key=value, got '%s'\n", kv.c_str());
      throw LibraryFailure{kError};
    }
    check(shk_config_set(c.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()), "set config key");
  }
  if (o.seed >= 0) check(shk_config_set(c.get(), "seed", std::to_string(o.seed).c_str()), "set seed");
  return c;
}

std::string out_path(const Common& o, const std::string& name) {
  std::filesystem::create_directories(o.out_dir);
  return (std::filesystem::path(o.out_dir) / name).string();
}

std::string experiment_summary(const shk_experiment* e) {
  size_t n = 0;
  check(shk_experiment_summary_json(e, nullptr, 0, &n), "summary size");
  std::string s(n, '\0');
  check(shk_experiment_summary_json(e, s.data(), s.size(), &n), "summary");
  s.resize(n - 1);
  return s;
}

void add_common(CLI::App* sub, Common& o, bool with_config = true) {
  if (with_config) {
    sub->add_option("--config", o.config_path, "key = value configuration file")->check(CLI::ExistingFile);
    sub->add_option("--set", o.sets, "override one key, as key=value (repeatable)");
  }
  sub->add_option("--out", o.out_dir, "output directory");
}

int run_profile(const Common& o, double xi_lo, double xi_hi, size_t points) {
  ConfigPtr c = make_config(o);
  shk_profile* raw = nullptr;
  check(shk_profile_create_from_config(c.get(), &raw), "solve profile");
  ProfilePtr p(raw);
  shk_end_states es{};
  check(shk_profile_end_states(p.get(), &es), "end states");
  double lambda = 0.0;
  check(shk_config_resolved_lambda(c.get(), &lambda), "lambda");
  const double lo = xi_lo != 0.0 || xi_hi != 0.0 ? xi_lo : -10.0 / es.eps;
  const double hi = xi_lo != 0.0 || xi_hi != 0.0 ? xi_hi : 10.0 / es.eps;
  const std::string csv = out_path(o, "profile.csv");
  check(shk_profile_write_csv(p.get(), lambda, lo, hi, points, csv.c_str()), "write profile");
  shk_profile_report r{};
  check(shk_profile_report_get(p.get(), &r), "profile report");

  const bool rh_ok = r.rh_residual <= 1e-12;
  const bool ode_ok = r.ode_residual <= 1e-10;
  const bool mono_ok = r.monotone == 1;
  std::printf("v_plus = %.12g\nsigma = %.12g\nlambda = %.6g\n", es.v_plus, es.sigma, lambda);
  std::printf("rankine_hugoniot_residual = %.3e [%s]\n", r.rh_residual, rh_ok ? "PASS" : "FAIL");
  std::printf("ode_residual = %.3e [%s]\n", r.ode_residual, ode_ok ? "PASS" : "FAIL");
  std::printf("monotone = %d [%s]\n", r.monotone, mono_ok ? "PASS" : "FAIL");
  std::printf("tail rates = %.6g %.6g, kappa = %.6g\n", r.rate_left, r.rate_right, r.kappa);
  std::printf("wrote %s\n", csv.c_str());
  return rh_ok && ode_ok && mono_ok ? 0 : kFailedCheck;
}

int run_simulate(const Common& o, const std::string& resume, bool write_checkpoint) {
  ConfigPtr c = make_config(o);
  shk_experiment* raw = nullptr;
  if (resume.empty())
    check(shk_experiment_run(c.get(), &raw), "run experiment");
  else
    check(shk_experiment_resume(c.get(), resume.c_str(), &raw), "resume experiment");
  ExperimentPtr e(raw);
  const std::string trace = out_path(o, "trace.csv");
  const std::string summary = out_path(o, "summary.json");
  const std::string snapshot = out_path(o, "snapshot.csv");
  check(shk_experiment_write_trace(e.get(), trace.c_str()), "write trace");
  check(shk_experiment_write_summary(e.get(), summary.c_str()), "write summary");
  check(shk_experiment_write_snapshot(e.get(), snapshot.c_str()), "write snapshot");
  if (write_checkpoint) {
    const std::string ckpt = out_path(o, "checkpoint.bin");
    check(shk_experiment_write_checkpoint(e.get(), ckpt.c_str()), "write checkpoint");
  }
  int passed = 0;
  check(shk_experiment_passed(e.get(), &passed), "passed");
  std::printf("%s\n", experiment_summary(e.get()).c_str());
  std::printf("%s\n", passed ? "PASS" : "FAIL");
  return passed ? 0 : kFailedCheck;
}

int run_verify(const Common& o, const shk_verify_options& opt_in) {
  shk_verify_options opt = opt_in;
  if (o.seed >= 0) opt.seed = static_cast<uint64_t>(o.seed);
  std::filesystem::create_directories(o.out_dir);
  int passed = 0;
  size_t n = 0;
  check(shk_verify_inequalities(&opt, o.out_dir.c_str(), &passed, nullptr, 0, &n), "verify inequalities");
  std::printf("reports written to %s\n%s\n", o.out_dir.c_str(), passed ? "PASS" : "FAIL");
  return passed ? 0 : kFailedCheck;
}

int run_sweep(const Common& o, const std::vector<double>& eps, const std::vector<double>& factors,
              bool experiments) {
  ConfigPtr c = make_config(o);
  const std::string csv = out_path(o, "sweep.csv");
  const std::string json = out_path(o, "sweep.json");
  shk_sweep_fits fits{};
  check(shk_sweep_run(c.get(), eps.data(), eps.size(), factors.data(), factors.size(), experiments ? 1 : 0,
                      csv.c_str(), json.c_str(), &fits),
        "sweep");
  std::printf("rows = %zu, failed = %zu\n", fits.rows, fits.failed);
  std::printf("tail exponents = %.4g %.4g\ndy exponent = %.4g\nprobe exponent = %.4g\n", fits.tail_exponent_left,
              fits.tail_exponent_right, fits.dy_exponent, fits.probe_exponent);
  std::printf("wrote %s and %s\n%s\n", csv.c_str(), json.c_str(), fits.failed == 0 ? "PASS" : "FAIL");
  return fits.failed == 0 ? 0 : kFailedCheck;
}

int run_audit(const Common& o, const std::vector<int>& refine) {
  ConfigPtr c = make_config(o);
  const std::string json = out_path(o, "audit.json");
  int tol_ok = 0, ratio_ok = 0;
  check(shk_audit_run(c.get(), refine.data(), refine.size(), json.c_str(), &tol_ok, &ratio_ok), "audit");
  std::printf("relative error within tolerance: %s\nrefinement ratios in range: %s\nwrote %s\n",
              tol_ok ? "PASS" : "FAIL", ratio_ok ? "PASS" : "FAIL", json.c_str());
  return tol_ok && ratio_ok ? 0 : kFailedCheck;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted relative entropy experiments for viscous shocks"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--seed", common.seed, "seed for perturbations and randomized checks")
      ->check(CLI::NonNegativeNumber);

  auto* profile = app.add_subcommand("profile", "solve the travelling wave and write profile.csv");
  add_common(profile, common);
  double xi_lo = 0.0, xi_hi = 0.0;
  size_t points = 2001;
  profile->add_option("--xi-lo", xi_lo, "left end of the output window (default -10/eps)");
  profile->add_option("--xi-hi", xi_hi, "right end of the output window (default 10/eps)");
  profile->add_option("--points", points, "number of output rows")->check(CLI::Range(2, 10000000));

  auto* simulate = app.add_subcommand("simulate", "run one contraction experiment");
  add_common(simulate, common);
  std::string resume;
  bool no_checkpoint = false;
  simulate->add_option("--resume", resume, "start from a checkpoint file")->check(CLI::ExistingFile);
  simulate->add_flag("--no-checkpoint", no_checkpoint, "skip writing checkpoint.bin");

  auto* verify = app.add_subcommand("verify-inequalities", "certify the functional inequalities");
  add_common(verify, common, false);
  shk_verify_options vopt;
  shk_verify_options_default(&vopt);
  bool no_search = false;
  verify->add_option("--g-step", vopt.g_step, "grid step of the polynomial certification");
  verify->add_option("--algebra-step", vopt.algebra_step, "grid step of the algebraic certification");
  verify->add_option("--starts", vopt.r_starts, "multistart count of the nonlinear maximization");
  verify->add_option("--points", vopt.r_points, "discretization points of the nonlinear maximization");
  verify->add_option("--delta", vopt.r_delta, "delta of the nonlinear inequality");
  verify->add_flag("--no-search", no_search, "skip the informational largest-delta ladders");

  auto* sweep = app.add_subcommand("sweep", "scaling study over eps and lambda");
  add_common(sweep, common);
  std::vector<double> sweep_eps, factors;
  bool experiments = false;
  sweep->add_option("--eps", sweep_eps, "shock amplitudes (default 0.1 0.05 0.025)")->delimiter(',');
  sweep->add_option("--lambda-factors", factors, "lambda = min(factor eps, lambda_cap)")->delimiter(',');
  sweep->add_flag("--run-experiments", experiments, "also run the configured experiment per point");

  auto* audit = app.add_subcommand("audit", "check the entropy identity along a run at two resolutions");
  add_common(audit, common);
  std::vector<int> refine = {1, 2};
  audit->add_option("--refine", refine, "refinement levels")->delimiter(',');

  CLI11_PARSE(app, argc, argv);
  vopt.search_delta = no_search ? 0 : 1;

  try {
    if (*profile) return run_profile(common, xi_lo, xi_hi, points);
    if (*simulate) return run_simulate(common, resume, !no_checkpoint);
    if (*verify) return run_verify(common, vopt);
    if (*sweep) return run_sweep(common, sweep_eps, factors, experiments);
    if (*audit) return run_audit(common, refine);
  } catch (const LibraryFailure& f) {
    return f.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kError;
  }
  return kError;
}
