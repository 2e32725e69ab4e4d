#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace shocklab {

enum class CertStatus { certified, failed, vacuous };

const char* to_string(CertStatus s) noexcept;

struct CertificationReport {
  std::string target;
  std::string domain;
  double resolution = 0.0;
  double worst = 0.0;      ///< largest value of the quantity claimed non-positive
  double slack = 0.0;      ///< rigor slack added to worst before the sign test
  double margin = 0.0;     ///< -(worst + slack); positive when certified
  double tolerance = 0.0;  ///< accepted threshold for worst + slack
  CertStatus status = CertStatus::failed;
  std::string method;
  std::vector<double> argmax;  ///< location of the worst value
  long long evaluations = 0;

  bool certified() const noexcept { return status == CertStatus::certified; }
};

/// Serializes a report as a JSON object.
std::string to_json(const CertificationReport& r);

// ---------------------------------------------------------------------------
// Polynomial lemma

/// sqrt(5 - pi^2/3).
double theta_exact();

/// 2x - 2x^2 - (4/3)x^3 + (4 theta/3)(-x^2 - 2x)^{3/2} on [-2, 0].
double g_poly(double x);
double g_poly_derivative(double x);

/// Upper bound of |g'| on [-2, 0].
double g_lipschitz_bound();

/// Largest eta for which 2x + (4 theta/3)(2|x|)^{3/2} < 0 on (-eta, 0).
double g_analytic_radius();

/// Grid plus Lipschitz slack on [-2, -eta], analytic bound on (-eta, 0).
CertificationReport certify_g_negative(double step, double eta = 0.1);

struct GCriticalReport {
  bool found = false;           ///< a + to - sign change of g' exists on (-1, 0)
  double x1 = 0.0;              ///< local maximum when found
  double min_derivative = 0.0;  ///< smallest sampled g' on (-1, 0)
  double argmin = 0.0;
  double scan_step = 0.0;
};

/// Scans g' on (-1, 0) and bisects the first + to - sign change.
GCriticalReport locate_g_local_max(double scan_step = 1e-4);

// ---------------------------------------------------------------------------
// Sup estimate and theta

struct ThetaResult {
  double integral = 0.0;  ///< int_0^1 (L(y) + L(1-y))^2 dy
  double theta = 0.0;
  double error = 0.0;     ///< quadrature error estimate
  double tail_cut = 0.0;  ///< width of the analytic tails at each end
};

/// Middle part by adaptive Gauss-Kronrod, tails [0, tau] and [1 - tau, 1] by series.
ThetaResult theta_constant(double tail_cut = 1e-2);

/// L(x) = -x - ln(1 - x).
double L_fn(double x);

/// Piecewise linear function on a uniform grid over [0, 1].
struct PiecewiseLinear {
  std::vector<double> values;

  size_t cells() const noexcept { return values.empty() ? 0 : values.size() - 1; }
  double step() const { return 1.0 / static_cast<double>(cells()); }
  double node(size_t i) const { return static_cast<double>(i) * step(); }
  double operator()(double y) const;
};

PiecewiseLinear sample_function(const std::function<double(double)>& f, size_t cells);

double pl_mean(const PiecewiseLinear& f);
/// int_0^1 y (1 - y) |f'|^2, exact for piecewise linear f.
double pl_weighted_dirichlet(const PiecewiseLinear& f);
/// int_0^1 |f - mean|^2, exact.
double pl_variance(const PiecewiseLinear& f);

/// min over interior nodes of RHS - LHS of the sup estimate.
double sup_estimate_check(const PiecewiseLinear& f);

/// Same check for a smooth f with derivative df, by quadrature at the given points x.
double sup_estimate_check(const std::function<double(double)>& f,
                          const std::function<double(double)>& df, const std::vector<double>& xs);

/// (1/2) int y(1-y)|f'|^2 - int |f - mean|^2, exact for piecewise linear f.
double weighted_poincare_check(const PiecewiseLinear& f);

/// Same slack for a polynomial given by monomial coefficients c[k] y^k (Gauss-Legendre exact).
double weighted_poincare_check_poly(const std::vector<double>& monomial);

/// Orthonormal shifted Legendre polynomial on [0, 1] and its derivative.
double shifted_legendre(int n, double y);
double shifted_legendre_derivative(int n, double y);

// ---------------------------------------------------------------------------
// Polynomial proposition

double E_poly(double z1, double z2);
double P_delta_poly(double z1, double z2, double delta);

struct AlgebraBox {
  double z1_lo = -3.0;
  double z1_hi = 1.0;
  double z2_lo = 0.0;
  double z2_hi = 3.0;
};

/// Exhaustive grid over the box restricted to |E| <= delta1; worst value of P_delta - E^2.
CertificationReport certify_prop_algebra(double delta, double delta1, const AlgebraBox& box,
                                         double step, double tolerance = 1e-10);

// ---------------------------------------------------------------------------
// Nonlinear Poincare functional

struct DiscretizedW {
  PiecewiseLinear w;
  std::vector<double> legendre;  ///< optional coefficients the samples were built from

  static DiscretizedW constant(size_t points, double value);
  static DiscretizedW from_legendre(const std::vector<double>& coeffs, size_t points);

  double l2_squared() const;
  double mean() const { return pl_mean(w); }
  double weighted_dirichlet() const { return pl_weighted_dirichlet(w); }
};

struct RDeltaTerms {
  double penalty = 0.0;    ///< -(1/delta)(int W^2 + 2 int W)^2
  double quadratic = 0.0;  ///< (1 + delta) int W^2
  double cubic = 0.0;      ///< (2/3) int W^3
  double abs_cubic = 0.0;  ///< delta int |W|^3
  double diffusion = 0.0;  ///< -(1 - delta) int y(1-y)|W'|^2
  double total = 0.0;
};

/// Five-term functional with exact piecewise linear integrals.
RDeltaTerms R_delta_terms(const DiscretizedW& W, double delta);
double R_delta_functional(const DiscretizedW& W, double delta);

/// Value and gradient with respect to the node values.
double R_delta_gradient(const std::vector<double>& w, double delta, std::vector<double>& grad);

struct MaximizeOptions {
  size_t points = 64;
  int starts = 200;
  int legendre_degree = 12;
  int max_iterations = 3000;
  std::uint64_t seed = 12345;
  double tolerance = 1e-8;
};

/// Multistart projected gradient ascent of R_delta under int W^2 <= c1.
CertificationReport maximize_R_delta(double delta, double c1, const MaximizeOptions& opt = {});

/// Largest delta on the ladder whose certification passes, 0 when none does.
double largest_passing_delta(const std::vector<double>& ladder,
                             const std::function<bool(double)>& passes);

// ---------------------------------------------------------------------------
// Identities used by the proposition

struct CubicDecomposition {
  double lhs = 0.0;  ///< int W^3
  double rhs = 0.0;  ///< int (W - m)^3 + 2 m int (W - m)^2 + m int W^2
};
CubicDecomposition cubic_decomposition(const PiecewiseLinear& w);

struct K1Check {
  double lhs = 0.0;  ///< int |W - m|^3
  double rhs = 0.0;  ///< theta Z2 int y(1-y)|W'|^2
};
K1Check k1_check(const PiecewiseLinear& w);

// ---------------------------------------------------------------------------
// Full verification run

struct SuiteOptions {
  double g_step = 1e-5;
  double g_eta = 0.1;
  int poincare_polys = 200;
  int poincare_degree = 8;
  int random_functions = 50;  ///< sup estimate, cubic identity and K1 samples
  size_t function_cells = 256;
  double algebra_delta = 0.01;
  double algebra_delta1 = 0.01;
  double algebra_step = 1e-3;
  AlgebraBox algebra_box;
  double r_delta = 0.01;
  double r_c1 = 10.0;
  MaximizeOptions maximize;
  bool search_delta = true;   ///< informational largest-delta ladders
  std::uint64_t seed = 12345;
};

struct SuiteEntry {
  std::string key;
  bool gating = true;
  CertificationReport report;
};

struct SuiteResult {
  std::vector<SuiteEntry> entries;
  bool passed() const;
};

SuiteResult run_inequality_suite(const SuiteOptions& opt = {});
std::string suite_json(const SuiteResult& r);

}  // namespace shocklab
