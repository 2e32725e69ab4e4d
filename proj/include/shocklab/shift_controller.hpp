#pragma once

#include <memory>
#include <vector>

#include "shocklab/functionals.hpp"
#include "shocklab/pde_solver.hpp"

namespace shocklab {

/// 1/eps^2 for y <= -eps^2, -y/eps^4 in between, -1/eps^2 for y >= eps^2.
double phi_eps(double y, double eps);

/// Xdot = phi_eps(Y) (2|B| + 1).
double shift_rhs(double Y, double B, double eps);

/// Evaluates Y and B of the shifted field and returns Xdot.
double shift_rhs(const FunctionalEvaluator& ev, const std::vector<double>& v,
                 const std::vector<double>& h, double X);

struct ShiftRecord {
  double t = 0.0;
  double X = 0.0;
  double Xdot = 0.0;
  double Y = 0.0;
  double B = 0.0;
  double excess = 0.0;  ///< (|Xdot| eps^2 - 1)_+
};

struct ShiftState {
  double X = 0.0;
  double Xdot = 0.0;
  double f_integral = 0.0;   ///< trapezoid integral of the excess
  double b_integral = 0.0;   ///< trapezoid integral of |B|
};

/// Couples the shift ODE to a stepper and accumulates the shift bookkeeping at record times.
class ShiftController {
 public:
  explicit ShiftController(std::shared_ptr<const FunctionalEvaluator> ev);

  /// Installs the shift right side in the stepper's Runge-Kutta stages with X(0) = x0.
  void attach(Stepper& stepper, double x0 = 0.0);

  /// Appends a record for the stepper's current time using already computed Y and B.
  const ShiftRecord& record(const Stepper& stepper, double Y, double B);

  const ShiftState& state() const noexcept { return state_; }
  const std::vector<ShiftRecord>& trace() const noexcept { return trace_; }

 private:
  std::shared_ptr<const FunctionalEvaluator> ev_;
  ShiftState state_;
  std::vector<ShiftRecord> trace_;
};

}  // namespace shocklab
