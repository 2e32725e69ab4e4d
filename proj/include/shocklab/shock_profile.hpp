#pragma once

#include <vector>

#include "shocklab/gas_model.hpp"

namespace shocklab {

/// End states of a 1-shock of pressure amplitude eps = p(v_+) - p(v_-).
struct ShockEndStates {
  double gamma = 0.0;
  double v_minus = 0.0;
  double u_minus = 0.0;
  double v_plus = 0.0;
  double u_plus = 0.0;
  double sigma = 0.0;  ///< shock speed, negative
  double eps = 0.0;
  double p_minus = 0.0;
  double p_plus = 0.0;
};

ShockEndStates end_states_from_amplitude(const GasModel& gas, double eps);

/// Largest relative residual of the two jump conditions.
double rankine_hugoniot_residual(const ShockEndStates& s);

/// Profile values at one abscissa. y = (p - p_-)/eps and ybar = 1 - y are both carried
/// so that either tail keeps full relative precision.
struct ProfilePoint {
  double xi = 0.0;
  double y = 0.0;
  double ybar = 0.0;
  double p = 0.0;
  double dp = 0.0;
  double d2p = 0.0;
  double v = 0.0;
  double dv = 0.0;
  double h = 0.0;
  double dh = 0.0;
};

/// Travelling-wave profile (v~, h~) sampled on a uniform grid with a cubic Hermite interpolant
/// and exponential tails beyond the sampled window.
class ShockProfile {
 public:
  /// Integrates sigma (p~)' = sigma^2 (v~ - v_+) + p~ - p_+ outward from xi = 0 with an
  /// embedded Runge-Kutta pair. The window is [-span/eps, span/eps]; samples_per_width sets
  /// the node density per 1/eps.
  static ShockProfile solve(const GasModel& gas, const ShockEndStates& s, double span = 40.0,
                            double tol = 1e-10, double samples_per_width = 200.0);

  /// Travelling wave of the second-order central semi-discretization on the nodes
  /// xi_min + i dx, i = 0..n. It is anchored to the continuum profile at the node closest
  /// to xi = 0 and built from the scheme's discrete first integral.
  static ShockProfile lattice(const ShockProfile& continuum, double xi_min, double dx, int n);

  const ShockEndStates& end_states() const noexcept { return s_; }
  double gamma() const noexcept { return s_.gamma; }

  /// Full evaluation; throws EvaluationError beyond the admissible extension.
  ProfilePoint eval(double xi) const;
  /// Only y and ybar (cheapest path).
  void eval_y(double xi, double& y, double& ybar) const;
  /// d/dxi of the Hermite interpolant of y (differs from the ODE slope by interpolation error).
  double interpolant_dy(double xi) const;

  /// Right side of the profile ODE, d y / d xi, evaluated from (y, ybar) without cancellation.
  double dy_of(double y, double ybar) const;
  double v_of(double y, double ybar) const;
  double p_of(double y, double ybar) const;

  double xi_first() const noexcept { return xi0_; }
  double xi_last() const noexcept { return xi0_ + step_ * static_cast<double>(y_.size() - 1); }
  double step() const noexcept { return step_; }
  size_t size() const noexcept { return y_.size(); }
  double node(size_t i) const noexcept { return xi0_ + step_ * static_cast<double>(i); }
  /// Evaluation is allowed on [xi_first - extension, xi_last + extension].
  double extension() const noexcept { return extension_; }
  bool is_lattice() const noexcept { return lattice_; }

  /// sup over nodes and cell midpoints of |sigma p' - sigma^2 (v - v_+) - (p - p_+)|,
  /// with p' taken from the Hermite interpolant.
  double ode_residual() const;

 private:
  ShockProfile() = default;
  void fill_tail_rates();

  ShockEndStates s_;
  double gamma_ = 0.0;
  double xi0_ = 0.0;
  double step_ = 0.0;
  double extension_ = 0.0;
  bool lattice_ = false;
  std::vector<double> y_;
  std::vector<double> ybar_;
  std::vector<double> dy_;
  double rate_left_ = 0.0;
  double rate_right_ = 0.0;
};

struct TailDecayReport {
  double rate_left = 0.0;   ///< fitted slope of log|v~'| against |xi| on the left tail
  double rate_right = 0.0;
  int samples_left = 0;
  int samples_right = 0;
  double kappa = 0.0;       ///< inf over [-1/eps, 1/eps] of |v~'| divided by eps^2
  double dv_at_zero = 0.0;
  double logistic_estimate = 0.0;  ///< -(v_- - v_+) * mean rate / 4
};

/// Least-squares tail fits on the range where y (or ybar) lies in [lo, hi].
TailDecayReport tail_decay_report(const ShockProfile& profile, double lo = 1e-9, double hi = 1e-4);

}  // namespace shocklab
