#pragma once

#include <string>

namespace shocklab {

/// State of the transformed system: specific volume and effective velocity.
struct VH {
  double v = 0.0;
  double h = 0.0;
};

/// Barotropic gamma-law gas p(v) = v^-gamma with the left reference state.
class GasModel {
 public:
  GasModel(double gamma, double v_minus, double u_minus = 0.0);

  double gamma() const noexcept { return gamma_; }
  double v_minus() const noexcept { return v_minus_; }
  double u_minus() const noexcept { return u_minus_; }
  double p_minus() const noexcept { return p_minus_; }

  double pressure(double v) const;
  double dpressure(double v) const;
  double d2pressure(double v) const;
  double pressure_inverse(double p) const;

  /// Q(v) = v^(1-gamma)/(gamma-1), so that Q' = -p.
  double q_entropy(double v) const;
  /// Q(v|w) = Q(v) - Q(w) - Q'(w)(v-w), evaluated without cancellation near v = w.
  double q_relative(double v, double w) const;
  /// p(v|w) = p(v) - p(w) - p'(w)(v-w), evaluated without cancellation near v = w.
  double p_relative(double v, double w) const;
  /// |h1-h2|^2/2 + Q(v1|v2).
  double eta_relative(VH a, VH b) const;

  /// sqrt(-p'(v_-)).
  double sound_speed_minus() const;
  /// gamma * sqrt(-p'(v_-)) * p(v_-) / (gamma+1).
  double alpha_gamma() const;

  // Unchecked variants for inner loops; callers guarantee positive arguments.
  double p_fast(double v) const noexcept;
  double dp_fast(double v) const noexcept;
  double q_rel_fast(double v, double w) const noexcept;
  double p_rel_fast(double v, double w) const noexcept;

 private:
  double gamma_;
  double v_minus_;
  double u_minus_;
  double p_minus_;
};

/// Constants of the global inequalities, fitted by grid minimization/maximization.
struct BoundConstants {
  double c1 = 0.0;       ///< Q(v|w) >= c1 |v-w|^2 for v <= 3 v_-
  double c2 = 0.0;       ///< Q(v|w) >= c2 |v-w|   for v >= 3 v_-
  double c3 = 0.0;       ///< |p(v)-p(w)| <= c3 |v-w| for v >= v_-/2
  double c_p0 = 0.0;     ///< p(v|w) <= c_p0 |v-w|^2 for v >= v_-/2
  double c_p4 = 0.0;     ///< p(v|w) <= c_p4 (|v-w| + |p(v)-p(w)|) for all v > 0
  double c_relq1 = 0.0;  ///< Q(v|w) - Q(u|w) >= c_relq1 |u-v| under the separation hypothesis
  double delta_star = 0.0;
  double c_pq = 0.0;     ///< |p(v)-p(w)|^2 <= c_pq Q(v|w) near the left state
};

/// Fits every constant on a dense (v, w) grid with n points per axis and applies a
/// 1% safety factor in the conservative direction.
BoundConstants fit_bound_constants(const GasModel& gas, int n = 400);

/// Constants obtained from the explicit mean-value bounds, used as a cross-check.
BoundConstants analytic_bound_constants(const GasModel& gas, double delta_star);

enum class Applicability { applies, not_applicable };

struct InequalityOutcome {
  Applicability applicability = Applicability::not_applicable;
  bool holds = true;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct GlobalBoundsReport {
  bool rejected = false;
  std::string reason;
  bool far_branch = false;  ///< v >= 3 v_-: linear lower bound selected
  InequalityOutcome rel_q;
  InequalityOutcome q_sim;
  InequalityOutcome rel_q1;
  InequalityOutcome pressure2;
  InequalityOutcome pressure0;
  InequalityOutcome pressure4;
  bool all_hold() const;
};

/// Evaluates every global inequality at (v, w). The intermediate state u defaults to
/// the midpoint of v and w. Precondition failures give a rejected report.
GlobalBoundsReport check_global_bounds(const GasModel& gas, const BoundConstants& c, double v,
                                       double w);
GlobalBoundsReport check_global_bounds(const GasModel& gas, const BoundConstants& c, double v,
                                       double w, double u);

/// Ratios of the local expansions to their leading coefficients:
/// p(v|w) / ((gamma+1)/(2 gamma p(w)) |dp|^2) and Q(v|w) / (p(w)^(-1/gamma-1)/(2 gamma) |dp|^2).
struct LocalExpansionRatios {
  double p_ratio = 0.0;
  double q_ratio = 0.0;
  double q_lower_gap = 0.0;  ///< Q(v|w) minus the cubic lower bound; non-negative
};
LocalExpansionRatios local_expansion_ratios(const GasModel& gas, double v, double w);

/// (v-v_-)/(p-p_-) + (v-v_+)/(p_+-p) + p''(v_-)/(2 p'(v_-)^2) (v_- - v_+), with v = p^-1(p).
double pressure_inverse_combination(const GasModel& gas, double p_minus, double p_plus, double p);

/// Default delta_* used by local estimates: 0.01 p(v_-).
double default_delta_star(const GasModel& gas);

}  // namespace shocklab
