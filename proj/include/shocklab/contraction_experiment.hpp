#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "shocklab/functionals.hpp"
#include "shocklab/pde_solver.hpp"
#include "shocklab/shift_controller.hpp"

namespace shocklab {

enum class PerturbationKind { none, bump, random_fourier, large_amplitude };
enum class PerturbationTarget { v, h, both };
enum class InitialHMode { direct, transform };
enum class ReferenceKind { lattice, continuum };

struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::bump;
  double amplitude = 0.01;
  double center = -1.0;      ///< in units of 1/eps
  double half_width = 2.0;   ///< in units of 1/eps
  PerturbationTarget target = PerturbationTarget::v;
  int modes = 6;             ///< random-fourier
  double stretch = 1.5;      ///< large-amplitude: v~(xi / stretch) before the bump
  std::uint64_t seed = 1;
};

struct ExperimentConfig {
  std::string name = "experiment";
  double gamma = 2.0;
  double v_minus = 1.0;
  double u_minus = 0.0;
  double eps = 0.1;
  double lambda = -1.0;        ///< <= 0 selects min(lambda_factor eps, lambda_cap)
  double lambda_factor = 5.0;
  double lambda_cap = 0.45;
  double ratio_floor = 1.0;    ///< requires lambda >= ratio_floor * eps
  double span = 40.0;          ///< half-width of the domain in units of 1/eps
  double points_per_width = 50.0;
  int refine = 1;
  double t_end = 0.0;          ///< absolute; 0 selects t_end_units / |sigma|
  double t_end_units = 30.0;
  double record_units = 0.01;  ///< record cadence in units of 1/|sigma|
  double dt_safety = 0.4;
  ReferenceKind reference = ReferenceKind::lattice;
  InitialHMode h_mode = InitialHMode::direct;
  PerturbationSpec perturbation;
  double margin = -1.0;        ///< R margin, < 0 selects 0.1 eps / lambda
  double mono_abs_tol = 1e-8;
  double mono_K = 1e-6;        ///< per-record tolerance mono_abs_tol + mono_K dx^2
  double steady_x_tol = 1e-8;
  bool check_monotone = true;
  bool check_final = true;
  bool check_shift_bound = true;
  bool check_branch = true;
  bool check_steady = true;

  double resolved_lambda() const;
  double resolved_t_end(double sigma) const;
  Grid grid() const;
  /// Throws ConfigError when a field is out of range.
  void validate() const;
  /// Canonical key = value text, one pair per line.
  std::string to_text() const;
};

/// Parses "key = value" lines; '#' starts a comment. Unknown keys raise ConfigError.
ExperimentConfig parse_config(const std::string& text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});
/// Applies one key = value assignment.
void apply_config_key(ExperimentConfig& c, const std::string& key, const std::string& value);

const char* to_string(PerturbationKind k) noexcept;

struct TraceRow {
  double t = 0.0;
  double X = 0.0;
  double Xdot = 0.0;
  double entropy = 0.0;  ///< weighted relative entropy
  double Y = 0.0;
  double B = 0.0;
  double G1 = 0.0;
  double G2 = 0.0;
  double D = 0.0;
  double R = 0.0;
  bool linear = false;   ///< |Y| <= eps^2
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
};

struct ExperimentSummary {
  double sigma = 0.0;
  double lambda = 0.0;
  double dx = 0.0;
  double t_end = 0.0;
  size_t records = 0;
  double initial_entropy = 0.0;
  double final_entropy = 0.0;
  double max_increment = 0.0;       ///< max over records of E_{k+1} - E_k
  double max_rate = 0.0;            ///< max centered difference quotient of E
  double mono_tolerance = 0.0;
  double worst_R_linear = 0.0;      ///< max R over records with |Y| <= eps^2 (-inf when none)
  size_t linear_records = 0;
  double max_shift_ratio = 0.0;     ///< max |Xdot| / ((1/eps)^2 (1 + 2|B|))
  double max_abs_X = 0.0;
  double final_X = 0.0;
  double f_integral = 0.0;
  double b_integral = 0.0;
  double bd_initial = 0.0;          ///< relative BD functional in (v, u)
  double bd_final = 0.0;
  double runtime_seconds = 0.0;
  bool aborted = false;
  std::string error;
  std::vector<CheckResult> checks;

  bool all_passed() const;
};

struct ExperimentResult {
  ExperimentConfig config;
  ShockEndStates end_states;
  Grid grid;
  std::vector<TraceRow> trace;
  ExperimentSummary summary;
  FieldState final_state;
  double final_X = 0.0;
};

/// Profile, weight and evaluator for a configuration.
struct ExperimentSetup {
  GasModel gas;
  ShockEndStates end_states;
  Grid grid;
  std::shared_ptr<const ShockProfile> continuum;
  std::shared_ptr<const ShockProfile> reference;
  std::shared_ptr<const WeightFn> weight;
  std::shared_ptr<const FunctionalEvaluator> evaluator;
};
ExperimentSetup build_setup(const ExperimentConfig& c);

/// Initial (v, h) on the grid; throws ConfigError if v < v_+/2 anywhere or the support leaves
/// the central 80% of the domain.
FieldState initial_state(const ExperimentConfig& c, const ExperimentSetup& s);

/// Runs the coupled field and shift integration. Solver failures are caught: the partial trace
/// is kept and summary.aborted is set.
ExperimentResult run_experiment(const ExperimentConfig& c);

/// Same run started from a given state (e.g. a checkpoint) with shift x0; the grid must match.
ExperimentResult run_experiment(const ExperimentConfig& c, const FieldState& init, double x0);

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace);
std::string summary_json(const ExperimentResult& r);

// ---------------------------------------------------------------------------

struct AuditLevel {
  int refine = 1;
  double dx = 0.0;
  size_t records = 0;
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
  double max_abs_rate = 0.0;
};

struct AuditReport {
  std::vector<AuditLevel> levels;
  std::vector<double> ratios;        ///< max_rel_error[i] / max_rel_error[i+1]
  double branch_max_error = 0.0;     ///< saturated-branch algebra
  size_t branch_records = 0;
  double rel_tolerance = 0.01;
  double ratio_lo = 3.0, ratio_hi = 5.0;

  bool within_tolerance() const;
  bool ratios_in_range() const;
};

/// Relative error of d/dt E (fourth-order centered difference of the trace) against
/// Xdot Y + B - G at interior records, normalized by |Xdot Y| + |B| + G.
AuditLevel audit_trace(const std::vector<TraceRow>& trace, double max_record_step);

/// |Xdot Y + (2|B| + 1)|Y| / eps^2| relative to the second term, on records with |Y| >= eps^2.
double audit_branch(const std::vector<TraceRow>& trace, double eps, size_t& count);

/// Runs the configuration at each refinement and compares the levels.
AuditReport identity_audit(const ExperimentConfig& c, const std::vector<int>& refinements = {1, 2});

std::string audit_json(const AuditReport& r);

// ---------------------------------------------------------------------------

struct SweepConfig {
  ExperimentConfig base;
  std::vector<double> eps = {0.1, 0.05, 0.025};
  std::vector<double> lambda_factors = {5.0};  ///< lambda = min(factor eps, lambda_cap)
  bool run_experiments = false;
};

struct SweepRow {
  double eps = 0.0;
  double lambda = 0.0;
  std::uint64_t hash = 0;
  double rate_left = 0.0;
  double rate_right = 0.0;
  double dy_residual = 0.0;
  double probe_weighted_q = 0.0;
  double probe_weighted_h = 0.0;
  double probe_s = 0.0;
  bool experiment_passed = true;
  bool failed = false;
  std::string error;
};

struct SweepReport {
  std::vector<SweepRow> rows;  ///< ordered by config hash
  double tail_exponent_left = 0.0;
  double tail_exponent_right = 0.0;
  double dy_exponent = 0.0;
  double probe_exponent = 0.0;  ///< slope of log int|a'|Q against log eps^2/lambda
  size_t failed = 0;
};

/// Least-squares slope of log y against log x; NaN with fewer than two distinct x.
double fit_log_slope(const std::vector<double>& x, const std::vector<double>& y);

SweepReport sweep(const SweepConfig& c);
void write_sweep_csv(const std::string& path, const SweepReport& r);
std::string sweep_json(const SweepReport& r);

/// FNV-1a of the canonical config text.
std::uint64_t config_hash(const std::string& text);

}  // namespace shocklab
