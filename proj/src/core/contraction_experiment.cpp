#include "shocklab/contraction_experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "shocklab/errors.hpp"

namespace shocklab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': not a number: '" + v + "'");
  }
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const long long d = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': not an integer: '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError("config key '" + key + "': not a boolean: '" + v + "'");
}

// C-infinity bump exp(1 - 1/(1 - z^2)) on |z| < 1, peak 1 at z = 0.
double smooth_bump(double z) {
  const double q = 1.0 - z * z;
  if (q <= 0.0) return 0.0;
  return std::exp(1.0 - 1.0 / q);
}

const char* target_name(PerturbationTarget t) {
  switch (t) {
    case PerturbationTarget::v: return "v";
    case PerturbationTarget::h: return "h";
    case PerturbationTarget::both: return "both";
  }
  return "v";
}

// Shortest text that parses back to the same double.
std::string fmt(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

}  // namespace

const char* to_string(PerturbationKind k) noexcept {
  switch (k) {
    case PerturbationKind::none: return "none";
    case PerturbationKind::bump: return "bump";
    case PerturbationKind::random_fourier: return "random-fourier";
    case PerturbationKind::large_amplitude: return "large-amplitude";
  }
  return "none";
}

double ExperimentConfig::resolved_lambda() const {
  return lambda > 0.0 ? lambda : std::min(lambda_factor * eps, lambda_cap);
}

double ExperimentConfig::resolved_t_end(double sigma) const {
  return t_end > 0.0 ? t_end : t_end_units / std::abs(sigma);
}

Grid ExperimentConfig::grid() const {
  const Grid g = default_grid(eps, span, points_per_width);
  return Grid(g.xi_min, g.xi_max, g.n * refine);
}

void ExperimentConfig::validate() const {
  if (!(gamma > 1.0)) throw ConfigError("gamma must exceed 1");
  if (!(v_minus > 0.0)) throw ConfigError("v_minus must be positive");
  if (!(eps > 0.0)) throw ConfigError("eps must be positive");
  const double lam = resolved_lambda();
  if (!(lam > 0.0 && lam < 0.5)) throw ConfigError("lambda must lie in (0, 1/2)");
  if (!(lam >= ratio_floor * eps)) throw ConfigError("lambda below ratio_floor * eps");
  if (!(span > 0.0) || !(points_per_width > 0.0) || refine < 1) throw ConfigError("bad grid spec");
  if (!(t_end >= 0.0) || !(t_end_units > 0.0)) throw ConfigError("bad t_end");
  if (!(record_units > 0.0)) throw ConfigError("record_units must be positive");
  if (!(dt_safety > 0.0 && dt_safety <= 1.0)) throw ConfigError("dt_safety must lie in (0, 1]");
  if (!(mono_abs_tol >= 0.0) || !(mono_K >= 0.0)) throw ConfigError("bad tolerances");
  const PerturbationSpec& p = perturbation;
  if (p.kind != PerturbationKind::none) {
    if (!(p.half_width > 0.0)) throw ConfigError("half_width must be positive");
    if (std::abs(p.center) + p.half_width > 0.8 * span)
      throw ConfigError("perturbation support leaves the central 80% of the domain");
  }
  if (p.kind == PerturbationKind::random_fourier && p.modes < 1) throw ConfigError("modes must be >= 1");
  if (p.kind == PerturbationKind::large_amplitude && !(p.stretch > 0.0))
    throw ConfigError("stretch must be positive");
}

std::string ExperimentConfig::to_text() const {
  std::ostringstream os;
  const PerturbationSpec& p = perturbation;
  os << "name = " << name << "\n"
     << "gamma = " << fmt(gamma) << "\n"
     << "v_minus = " << fmt(v_minus) << "\n"
     << "u_minus = " << fmt(u_minus) << "\n"
     << "eps = " << fmt(eps) << "\n"
     << "lambda = " << fmt(lambda) << "\n"
     << "lambda_factor = " << fmt(lambda_factor) << "\n"
     << "lambda_cap = " << fmt(lambda_cap) << "\n"
     << "ratio_floor = " << fmt(ratio_floor) << "\n"
     << "span = " << fmt(span) << "\n"
     << "points_per_width = " << fmt(points_per_width) << "\n"
     << "refine = " << refine << "\n"
     << "t_end = " << fmt(t_end) << "\n"
     << "t_end_units = " << fmt(t_end_units) << "\n"
     << "record_units = " << fmt(record_units) << "\n"
     << "dt_safety = " << fmt(dt_safety) << "\n"
     << "reference = " << (reference == ReferenceKind::lattice ? "lattice" : "continuum") << "\n"
     << "h_mode = " << (h_mode == InitialHMode::direct ? "direct" : "transform") << "\n"
     << "perturbation = " << to_string(p.kind) << "\n"
     << "amplitude = " << fmt(p.amplitude) << "\n"
     << "center = " << fmt(p.center) << "\n"
     << "half_width = " << fmt(p.half_width) << "\n"
     << "target = " << target_name(p.target) << "\n"
     << "modes = " << p.modes << "\n"
     << "stretch = " << fmt(p.stretch) << "\n"
     << "seed = " << p.seed << "\n"
     << "margin = " << fmt(margin) << "\n"
     << "mono_abs_tol = " << fmt(mono_abs_tol) << "\n"
     << "mono_K = " << fmt(mono_K) << "\n"
     << "steady_x_tol = " << fmt(steady_x_tol) << "\n"
     << "check_monotone = " << check_monotone << "\n"
     << "check_final = " << check_final << "\n"
     << "check_shift_bound = " << check_shift_bound << "\n"
     << "check_branch = " << check_branch << "\n"
     << "check_steady = " << check_steady << "\n";
  return os.str();
}

void apply_config_key(ExperimentConfig& c, const std::string& key, const std::string& value) {
  PerturbationSpec& p = c.perturbation;
  const std::string& v = value;
  if (key == "name") c.name = v;
  else if (key == "gamma") c.gamma = to_double(key, v);
  else if (key == "v_minus") c.v_minus = to_double(key, v);
  else if (key == "u_minus") c.u_minus = to_double(key, v);
  else if (key == "eps") c.eps = to_double(key, v);
  else if (key == "lambda") c.lambda = to_double(key, v);
  else if (key == "lambda_factor") c.lambda_factor = to_double(key, v);
  else if (key == "lambda_cap") c.lambda_cap = to_double(key, v);
  else if (key == "ratio_floor") c.ratio_floor = to_double(key, v);
  else if (key == "span") c.span = to_double(key, v);
  else if (key == "points_per_width") c.points_per_width = to_double(key, v);
  else if (key == "refine") c.refine = static_cast<int>(to_int(key, v));
  else if (key == "t_end") c.t_end = to_double(key, v);
  else if (key == "t_end_units") c.t_end_units = to_double(key, v);
  else if (key == "record_units") c.record_units = to_double(key, v);
  else if (key == "dt_safety") c.dt_safety = to_double(key, v);
  else if (key == "reference") {
    if (v == "lattice") c.reference = ReferenceKind::lattice;
    else if (v == "continuum") c.reference = ReferenceKind::continuum;
    else throw ConfigError("reference must be lattice or continuum");
  } else if (key == "h_mode") {
    if (v == "direct") c.h_mode = InitialHMode::direct;
    else if (v == "transform") c.h_mode = InitialHMode::transform;
    else throw ConfigError("h_mode must be direct or transform");
  } else if (key == "perturbation") {
    if (v == "none") p.kind = PerturbationKind::none;
    else if (v == "bump") p.kind = PerturbationKind::bump;
    else if (v == "random-fourier") p.kind = PerturbationKind::random_fourier;
    else if (v == "large-amplitude") p.kind = PerturbationKind::large_amplitude;
    else throw ConfigError("unknown perturbation kind '" + v + "'");
  } else if (key == "amplitude") p.amplitude = to_double(key, v);
  else if (key == "center") p.center = to_double(key, v);
  else if (key == "half_width") p.half_width = to_double(key, v);
  else if (key == "target") {
    if (v == "v") p.target = PerturbationTarget::v;
    else if (v == "h") p.target = PerturbationTarget::h;
    else if (v == "both") p.target = PerturbationTarget::both;
    else throw ConfigError("target must be v, h or both");
  } else if (key == "modes") p.modes = static_cast<int>(to_int(key, v));
  else if (key == "stretch") p.stretch = to_double(key, v);
  else if (key == "seed") p.seed = static_cast<std::uint64_t>(to_int(key, v));
  else if (key == "margin") c.margin = to_double(key, v);
  else if (key == "mono_abs_tol") c.mono_abs_tol = to_double(key, v);
  else if (key == "mono_K") c.mono_K = to_double(key, v);
  else if (key == "steady_x_tol") c.steady_x_tol = to_double(key, v);
  else if (key == "check_monotone") c.check_monotone = to_bool(key, v);
  else if (key == "check_final") c.check_final = to_bool(key, v);
  else if (key == "check_shift_bound") c.check_shift_bound = to_bool(key, v);
  else if (key == "check_branch") c.check_branch = to_bool(key, v);
  else if (key == "check_steady") c.check_steady = to_bool(key, v);
  else throw ConfigError("unknown config key '" + key + "'");
}

ExperimentConfig parse_config(const std::string& text, ExperimentConfig base) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    apply_config_key(base, key, value);
  }
  return base;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

// ---------------------------------------------------------------------------

bool ExperimentSummary::all_passed() const {
  if (aborted) return false;
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

ExperimentSetup build_setup(const ExperimentConfig& c) {
  c.validate();
  ExperimentSetup s{GasModel(c.gamma, c.v_minus, c.u_minus), {}, c.grid(), nullptr, nullptr, nullptr, nullptr};
  s.end_states = end_states_from_amplitude(s.gas, c.eps);
  s.continuum = std::make_shared<ShockProfile>(ShockProfile::solve(s.gas, s.end_states));
  if (c.reference == ReferenceKind::lattice) {
    s.reference = std::make_shared<ShockProfile>(
        ShockProfile::lattice(*s.continuum, s.grid.xi_min, s.grid.dx(), s.grid.n));
  } else {
    s.reference = s.continuum;
  }
  s.weight = std::make_shared<WeightFn>(s.reference, c.resolved_lambda());
  s.evaluator = std::make_shared<FunctionalEvaluator>(s.gas, s.weight, s.grid, c.margin);
  return s;
}

FieldState initial_state(const ExperimentConfig& c, const ExperimentSetup& s) {
  const Grid& g = s.grid;
  const size_t n = g.nodes();
  const PerturbationSpec& p = c.perturbation;
  const double scale = 1.0 / c.eps;
  const double center = p.center * scale;
  const double hw = p.half_width * scale;
  const double stretch = p.kind == PerturbationKind::large_amplitude ? p.stretch : 1.0;

  std::vector<double> shape(n, 0.0);
  if (p.kind == PerturbationKind::bump || p.kind == PerturbationKind::large_amplitude) {
    for (size_t i = 0; i < n; ++i) shape[i] = p.amplitude * smooth_bump((g.x(static_cast<int>(i)) - center) / hw);
  } else if (p.kind == PerturbationKind::random_fourier) {
    std::mt19937_64 rng(p.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> a(p.modes), b(p.modes);
    for (int k = 0; k < p.modes; ++k) {
      a[k] = normal(rng) / (k + 1.0);
      b[k] = normal(rng) / (k + 1.0);
    }
    double peak = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double z = (g.x(static_cast<int>(i)) - center) / hw;
      double sum = 0.0;
      for (int k = 0; k < p.modes; ++k) {
        const double arg = std::numbers::pi * (k + 1.0) * z;
        sum += a[k] * std::cos(arg) + b[k] * std::sin(arg);
      }
      shape[i] = smooth_bump(z) * sum;
      peak = std::max(peak, std::abs(shape[i]));
    }
    if (peak > 0.0)
      for (double& x : shape) x *= p.amplitude / peak;
  }
  const bool pv = p.target != PerturbationTarget::h;
  const bool ph = p.target != PerturbationTarget::v;

  FieldState st;
  st.v.resize(n);
  st.h.resize(n);
  std::vector<double> vr(n), hr(n);
  for (size_t i = 0; i < n; ++i) {
    const ProfilePoint q = s.reference->eval(g.x(static_cast<int>(i)) / stretch);
    vr[i] = q.v;
    hr[i] = q.h;
    st.v[i] = q.v + (pv ? shape[i] : 0.0);
  }
  if (c.h_mode == InitialHMode::direct) {
    for (size_t i = 0; i < n; ++i) st.h[i] = hr[i] + (ph ? shape[i] : 0.0);
  } else {
    std::vector<double> pr(n);
    for (size_t i = 0; i < n; ++i) pr[i] = s.gas.pressure(vr[i]);
    const std::vector<double> dpr = central_derivative(pr, g.dx());
    std::vector<double> u(n);
    for (size_t i = 0; i < n; ++i) u[i] = hr[i] - dpr[i] + (ph ? shape[i] : 0.0);
    st.h = effective_velocity_transform(s.gas, st.v, u, g);
  }
  const double vmin = 0.5 * s.end_states.v_plus;
  for (size_t i = 0; i < n; ++i) {
    if (!(st.v[i] >= vmin))
      throw ConfigError("initial v falls below v_+/2 at xi = " + std::to_string(g.x(static_cast<int>(i))));
  }
  return st;
}

namespace {

double bd_of(const ExperimentSetup& s, const FieldState& st, double X) {
  ReferenceSample r;
  s.evaluator->sample(X, r);
  const size_t n = st.v.size();
  std::vector<double> p(n), pr(n);
  for (size_t i = 0; i < n; ++i) {
    p[i] = s.gas.pressure(st.v[i]);
    pr[i] = s.gas.pressure(r.v[i]);
  }
  const auto dp = central_derivative(p, s.grid.dx());
  const auto dpr = central_derivative(pr, s.grid.dx());
  std::vector<double> u(n), ur(n);
  for (size_t i = 0; i < n; ++i) {
    u[i] = st.h[i] - dp[i];
    ur[i] = r.h[i] - dpr[i];
  }
  return bd_relative_functional(s.gas, st.v, u, r.v, ur, s.grid);
}

}  // namespace

namespace {
ExperimentResult run_with_setup(const ExperimentConfig& c, const ExperimentSetup& s, const FieldState& init,
                                double x0);
}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& c) {
  const ExperimentSetup s = build_setup(c);
  return run_with_setup(c, s, initial_state(c, s), 0.0);
}

ExperimentResult run_experiment(const ExperimentConfig& c, const FieldState& init, double x0) {
  const ExperimentSetup s = build_setup(c);
  if (init.v.size() != s.grid.nodes() || init.h.size() != s.grid.nodes())
    throw ConfigError("initial state does not match the configured grid");
  return run_with_setup(c, s, init, x0);
}

namespace {

ExperimentResult run_with_setup(const ExperimentConfig& c, const ExperimentSetup& s, const FieldState& init,
                                double x0) {
  const auto wall0 = std::chrono::steady_clock::now();
  ExperimentResult res;
  res.config = c;
  res.end_states = s.end_states;
  res.grid = s.grid;
  ExperimentSummary& sum = res.summary;
  const double eps = c.eps;
  const double sigma = s.end_states.sigma;
  sum.sigma = sigma;
  sum.lambda = c.resolved_lambda();
  sum.dx = s.grid.dx();
  sum.t_end = c.resolved_t_end(sigma);
  sum.mono_tolerance = c.mono_abs_tol + c.mono_K * sum.dx * sum.dx;

  StepperOptions opt;
  opt.safety = c.dt_safety;
  Stepper stepper(s.gas, s.end_states, s.grid, init, opt);
  ShiftController shift(s.evaluator);
  shift.attach(stepper, x0);
  sum.bd_initial = bd_of(s, init, x0);

  const double e2 = eps * eps;
  const double inv_e2 = (1.0 / eps) * (1.0 / eps);
  try {
    simulate(stepper, sum.t_end, c.record_units / std::abs(sigma), [&](const Stepper& st) {
      const FunctionalBreakdown b = s.evaluator->breakdown(st.state().v, st.state().h, st.coupled_value());
      const ShiftRecord& sr = shift.record(st, b.Y, b.B);
      TraceRow row;
      row.t = st.state().t;
      row.X = sr.X;
      row.Xdot = sr.Xdot;
      row.entropy = b.weighted_entropy;
      row.Y = b.Y;
      row.B = b.B;
      row.G1 = b.G1;
      row.G2 = b.G2;
      row.D = b.D;
      row.R = b.R;
      row.linear = std::abs(b.Y) <= e2;
      res.trace.push_back(row);
      return true;
    });
  } catch (const Error& e) {
    sum.aborted = true;
    sum.error = e.what();
  }
  res.final_state = stepper.state();
  res.final_X = stepper.coupled_value();
  sum.bd_final = bd_of(s, res.final_state, res.final_X);

  const auto& tr = res.trace;
  sum.records = tr.size();
  sum.worst_R_linear = -std::numeric_limits<double>::infinity();
  sum.max_increment = -std::numeric_limits<double>::infinity();
  sum.max_rate = -std::numeric_limits<double>::infinity();
  double branch_err = 0.0;
  double e_lo = std::numeric_limits<double>::infinity(), e_hi = -e_lo;
  for (size_t k = 0; k < tr.size(); ++k) {
    const TraceRow& r = tr[k];
    if (k + 1 < tr.size()) sum.max_increment = std::max(sum.max_increment, tr[k + 1].entropy - r.entropy);
    if (k >= 1 && k + 1 < tr.size())
      sum.max_rate = std::max(sum.max_rate, (tr[k + 1].entropy - tr[k - 1].entropy) / (tr[k + 1].t - tr[k - 1].t));
    if (r.linear) {
      ++sum.linear_records;
      sum.worst_R_linear = std::max(sum.worst_R_linear, r.R);
    }
    // Same (1/eps)^2 factor as the shift law, so a saturated record gives exactly 1.
    sum.max_shift_ratio = std::max(sum.max_shift_ratio, std::abs(r.Xdot) / (inv_e2 * (1.0 + 2.0 * std::abs(r.B))));
    sum.max_abs_X = std::max(sum.max_abs_X, std::abs(r.X));
    // Xdot must follow the branch the flag names.
    const double expect = r.linear ? -r.Y * inv_e2 * inv_e2 * (2.0 * std::abs(r.B) + 1.0)
                                   : (r.Y > 0.0 ? -inv_e2 : inv_e2) * (2.0 * std::abs(r.B) + 1.0);
    branch_err = std::max(branch_err, std::abs(r.Xdot - expect) / std::max(std::abs(expect), 1e-300));
    e_lo = std::min(e_lo, r.entropy);
    e_hi = std::max(e_hi, r.entropy);
  }
  if (!tr.empty()) {
    sum.initial_entropy = tr.front().entropy;
    sum.final_entropy = tr.back().entropy;
    sum.final_X = tr.back().X;
  }
  if (tr.size() < 2) sum.max_increment = sum.max_rate = 0.0;
  sum.f_integral = shift.state().f_integral;
  sum.b_integral = shift.state().b_integral;

  if (c.check_monotone)
    sum.checks.push_back({"entropy_non_increasing", sum.max_increment <= sum.mono_tolerance, sum.max_increment,
                          sum.mono_tolerance});
  // Steady runs hold the entropy at rounding level; steady_entropy_constant covers them instead.
  if (c.check_final && c.perturbation.kind != PerturbationKind::none)
    sum.checks.push_back({"final_not_above_initial", sum.final_entropy <= sum.initial_entropy,
                          sum.final_entropy - sum.initial_entropy, 0.0});
  // The bound is algebraic; the slack only absorbs the rounding of |Y| (1/eps)^4 near the knot.
  constexpr double kShiftSlack = 4.0 * std::numeric_limits<double>::epsilon();
  if (c.check_shift_bound)
    sum.checks.push_back({"shift_bound", sum.max_shift_ratio <= 1.0 + kShiftSlack, sum.max_shift_ratio, 1.0});
  if (c.check_branch)
    sum.checks.push_back({"branch_consistency", branch_err <= 1e-12, branch_err, 1e-12});
  if (c.check_steady && c.perturbation.kind == PerturbationKind::none) {
    sum.checks.push_back({"steady_shift", sum.max_abs_X <= c.steady_x_tol, sum.max_abs_X, c.steady_x_tol});
    const double spread = tr.empty() ? 0.0 : e_hi - e_lo;
    sum.checks.push_back({"steady_entropy_constant", spread <= 1e-10, spread, 1e-10});
  }
  sum.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
  return res;
}

}  // namespace

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot write trace '" + path + "'");
  f << "t,X,Xdot,entropy,Y,B,G1,G2,D,R,branch\n";
  f << std::setprecision(17);
  for (const TraceRow& r : trace) {
    f << r.t << ',' << r.X << ',' << r.Xdot << ',' << r.entropy << ',' << r.Y << ',' << r.B << ',' << r.G1 << ','
      << r.G2 << ',' << r.D << ',' << r.R << ',' << (r.linear ? "linear" : "saturated") << '\n';
  }
  if (!f) throw IoError("write failed for '" + path + "'");
}

namespace {

nlohmann::json finite_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

}  // namespace

std::string summary_json(const ExperimentResult& r) {
  const ExperimentSummary& s = r.summary;
  nlohmann::json j;
  j["name"] = r.config.name;
  j["perturbation"] = to_string(r.config.perturbation.kind);
  j["gamma"] = r.config.gamma;
  j["eps"] = r.config.eps;
  j["lambda"] = s.lambda;
  j["sigma"] = s.sigma;
  j["dx"] = s.dx;
  j["t_end"] = s.t_end;
  j["records"] = s.records;
  j["initial_entropy"] = s.initial_entropy;
  j["final_entropy"] = s.final_entropy;
  j["max_increment"] = finite_or_null(s.max_increment);
  j["max_rate"] = finite_or_null(s.max_rate);
  j["mono_tolerance"] = s.mono_tolerance;
  j["worst_R_linear"] = finite_or_null(s.worst_R_linear);
  j["linear_records"] = s.linear_records;
  j["max_shift_ratio"] = s.max_shift_ratio;
  j["max_abs_X"] = s.max_abs_X;
  j["final_X"] = s.final_X;
  j["f_integral"] = s.f_integral;
  j["b_integral"] = s.b_integral;
  j["bd_initial"] = s.bd_initial;
  j["bd_final"] = s.bd_final;
  j["runtime_seconds"] = s.runtime_seconds;
  j["aborted"] = s.aborted;
  j["error"] = s.error;
  nlohmann::json checks = nlohmann::json::array();
  for (const CheckResult& c : s.checks)
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"threshold", c.threshold}});
  j["checks"] = checks;
  j["passed"] = s.all_passed();
  j["config_hash"] = config_hash(r.config.to_text());
  return j.dump(2);
}

// ---------------------------------------------------------------------------

bool AuditReport::within_tolerance() const {
  return !levels.empty() && levels.front().max_rel_error <= rel_tolerance;
}

bool AuditReport::ratios_in_range() const {
  if (ratios.empty()) return false;
  return std::all_of(ratios.begin(), ratios.end(), [&](double r) { return r >= ratio_lo && r <= ratio_hi; });
}

AuditLevel audit_trace(const std::vector<TraceRow>& trace, double max_record_step) {
  if (trace.size() < 5) throw DiagnosticsError("audit needs at least five records");
  AuditLevel a;
  size_t used = 0;
  for (size_t k = 2; k + 2 < trace.size(); ++k) {
    const double h = trace[k + 1].t - trace[k].t;
    if (h > max_record_step * (1.0 + 1e-9)) throw DiagnosticsError("record cadence too coarse for the audit");
    bool uniform = true;
    for (size_t j = k - 2; j < k + 2; ++j)
      if (std::abs((trace[j + 1].t - trace[j].t) - h) > 1e-9 * h) uniform = false;
    if (!uniform) continue;
    const double d = (-trace[k + 2].entropy + 8.0 * trace[k + 1].entropy - 8.0 * trace[k - 1].entropy +
                      trace[k - 2].entropy) / (12.0 * h);
    const TraceRow& r = trace[k];
    const double G = r.G1 + r.G2 + r.D;
    const double rhs = r.Xdot * r.Y + r.B - G;
    const double scale = std::abs(r.Xdot * r.Y) + std::abs(r.B) + std::abs(G);
    const double err = std::abs(d - rhs);
    a.max_abs_error = std::max(a.max_abs_error, err);
    a.max_abs_rate = std::max(a.max_abs_rate, std::abs(d));
    if (scale > 0.0) a.max_rel_error = std::max(a.max_rel_error, err / scale);
    ++used;
  }
  if (used == 0) throw DiagnosticsError("no uniformly spaced interior records to audit");
  a.records = used;
  return a;
}

double audit_branch(const std::vector<TraceRow>& trace, double eps, size_t& count) {
  const double e2 = eps * eps;
  double worst = 0.0;
  count = 0;
  for (const TraceRow& r : trace) {
    if (std::abs(r.Y) < e2) continue;
    ++count;
    const double expect = -(2.0 * std::abs(r.B) + 1.0) * std::abs(r.Y) / e2;
    worst = std::max(worst, std::abs(r.Xdot * r.Y - expect) / std::abs(expect));
  }
  return worst;
}

AuditReport identity_audit(const ExperimentConfig& c, const std::vector<int>& refinements) {
  if (refinements.empty()) throw ConfigError("audit needs at least one resolution");
  AuditReport rep;
  for (int rf : refinements) {
    ExperimentConfig cc = c;
    cc.refine = c.refine * rf;
    const ExperimentResult r = run_experiment(cc);
    if (r.summary.aborted) throw SolverError("audit run aborted: " + r.summary.error);
    AuditLevel lv = audit_trace(r.trace, 0.05 / std::abs(r.end_states.sigma));
    lv.refine = cc.refine;
    lv.dx = r.grid.dx();
    rep.levels.push_back(lv);
    size_t cnt = 0;
    rep.branch_max_error = std::max(rep.branch_max_error, audit_branch(r.trace, c.eps, cnt));
    rep.branch_records += cnt;
  }
  for (size_t i = 0; i + 1 < rep.levels.size(); ++i) {
    const double den = rep.levels[i + 1].max_rel_error;
    rep.ratios.push_back(den > 0.0 ? rep.levels[i].max_rel_error / den : std::numeric_limits<double>::infinity());
  }
  return rep;
}

std::string audit_json(const AuditReport& r) {
  nlohmann::json j;
  nlohmann::json lv = nlohmann::json::array();
  for (const AuditLevel& a : r.levels)
    lv.push_back({{"refine", a.refine},
                  {"dx", a.dx},
                  {"records", a.records},
                  {"max_rel_error", a.max_rel_error},
                  {"max_abs_error", a.max_abs_error},
                  {"max_abs_rate", a.max_abs_rate}});
  j["levels"] = lv;
  nlohmann::json ratios = nlohmann::json::array();
  for (double x : r.ratios) ratios.push_back(finite_or_null(x));
  j["ratios"] = ratios;
  j["branch_max_error"] = r.branch_max_error;
  j["branch_records"] = r.branch_records;
  j["rel_tolerance"] = r.rel_tolerance;
  j["ratio_range"] = {r.ratio_lo, r.ratio_hi};
  j["within_tolerance"] = r.within_tolerance();
  j["ratios_in_range"] = r.ratios_in_range();
  return j.dump(2);
}

// ---------------------------------------------------------------------------

std::uint64_t config_hash(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

double fit_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw DomainError("fit_log_slope: size mismatch");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  size_t n = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  const double den = static_cast<double>(n) * sxx - sx * sx;
  if (n < 2 || std::abs(den) < 1e-14) return std::numeric_limits<double>::quiet_NaN();
  return (static_cast<double>(n) * sxy - sx * sy) / den;
}

namespace {

SweepRow sweep_point(const SweepConfig& c, double eps, double factor) {
  SweepRow row;
  row.eps = eps;
  ExperimentConfig ec = c.base;
  ec.eps = eps;
  ec.lambda = std::min(factor * eps, ec.lambda_cap);
  row.lambda = ec.lambda;
  row.hash = config_hash(ec.to_text());
  try {
    ec.validate();
    GasModel gas(ec.gamma, ec.v_minus, ec.u_minus);
    const ShockEndStates es = end_states_from_amplitude(gas, eps);
    auto prof = std::make_shared<ShockProfile>(ShockProfile::solve(gas, es));
    const TailDecayReport tail = tail_decay_report(*prof);
    row.rate_left = tail.rate_left;
    row.rate_right = tail.rate_right;
    row.dy_residual = dy_dxi_ratio_residual(gas, *prof);
    auto w = std::make_shared<WeightFn>(prof, ec.lambda);
    const FunctionalEvaluator ev(gas, w, default_grid(eps, ec.span, ec.points_per_width), ec.margin);
    const ConstrainedProbe probe = y_constrained_probe(ev);
    row.probe_weighted_q = probe.weighted_q;
    row.probe_weighted_h = probe.weighted_h;
    row.probe_s = probe.s;
    if (c.run_experiments) {
      const ExperimentResult r = run_experiment(ec);
      row.experiment_passed = r.summary.all_passed();
      if (!row.experiment_passed) {
        row.failed = true;
        row.error = r.summary.aborted ? r.summary.error : "experiment checks failed";
      }
    }
  } catch (const Error& e) {
    row.failed = true;
    row.error = e.what();
  }
  return row;
}

}  // namespace

SweepReport sweep(const SweepConfig& c) {
  if (c.eps.empty() || c.lambda_factors.empty()) throw ConfigError("sweep needs eps and lambda factors");
  std::vector<std::future<SweepRow>> jobs;
  for (double e : c.eps)
    for (double f : c.lambda_factors) jobs.push_back(std::async(std::launch::async, sweep_point, std::cref(c), e, f));
  SweepReport rep;
  for (auto& j : jobs) rep.rows.push_back(j.get());
  std::sort(rep.rows.begin(), rep.rows.end(), [](const SweepRow& a, const SweepRow& b) { return a.hash < b.hash; });

  std::vector<double> te, tl, tr, td, pq, px;
  for (const SweepRow& r : rep.rows) {
    if (r.failed) {
      ++rep.failed;
      continue;
    }
    if (std::find(te.begin(), te.end(), r.eps) == te.end()) {
      te.push_back(r.eps);
      tl.push_back(r.rate_left);
      tr.push_back(r.rate_right);
      td.push_back(r.dy_residual);
    }
    px.push_back(r.eps * r.eps / r.lambda);
    pq.push_back(r.probe_weighted_q);
  }
  rep.tail_exponent_left = fit_log_slope(te, tl);
  rep.tail_exponent_right = fit_log_slope(te, tr);
  rep.dy_exponent = fit_log_slope(te, td);
  rep.probe_exponent = fit_log_slope(px, pq);
  return rep;
}

void write_sweep_csv(const std::string& path, const SweepReport& r) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot write sweep '" + path + "'");
  f << "hash,eps,lambda,rate_left,rate_right,dy_residual,probe_weighted_q,probe_weighted_h,probe_s,failed,error\n";
  f << std::setprecision(17);
  for (const SweepRow& s : r.rows) {
    std::string err = s.error;
    std::replace(err.begin(), err.end(), ',', ';');
    f << s.hash << ',' << s.eps << ',' << s.lambda << ',' << s.rate_left << ',' << s.rate_right << ','
      << s.dy_residual << ',' << s.probe_weighted_q << ',' << s.probe_weighted_h << ',' << s.probe_s << ','
      << (s.failed ? 1 : 0) << ',' << err << '\n';
  }
  if (!f) throw IoError("write failed for '" + path + "'");
}

std::string sweep_json(const SweepReport& r) {
  nlohmann::json j;
  nlohmann::json rows = nlohmann::json::array();
  for (const SweepRow& s : r.rows)
    rows.push_back({{"hash", s.hash},
                    {"eps", s.eps},
                    {"lambda", s.lambda},
                    {"rate_left", s.rate_left},
                    {"rate_right", s.rate_right},
                    {"dy_residual", s.dy_residual},
                    {"probe_weighted_q", s.probe_weighted_q},
                    {"probe_weighted_h", s.probe_weighted_h},
                    {"probe_s", s.probe_s},
                    {"failed", s.failed},
                    {"error", s.error}});
  j["rows"] = rows;
  j["tail_exponent_left"] = finite_or_null(r.tail_exponent_left);
  j["tail_exponent_right"] = finite_or_null(r.tail_exponent_right);
  j["dy_exponent"] = finite_or_null(r.dy_exponent);
  j["probe_exponent"] = finite_or_null(r.probe_exponent);
  j["failed"] = r.failed;
  return j.dump(2);
}

}  // namespace shocklab
