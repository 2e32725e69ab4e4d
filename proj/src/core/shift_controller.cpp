#include "shocklab/shift_controller.hpp"

#include <cmath>

#include "shocklab/errors.hpp"

namespace shocklab {

double phi_eps(double y, double eps) {
  if (!(eps > 0.0)) throw DomainError("phi_eps needs eps > 0");
  // Scaling by (1/eps)^2 keeps decimal knots exact: eps = 0.1 gives 100, not 1/0.010000000000000002.
  const double e2 = eps * eps;
  const double s = (1.0 / eps) * (1.0 / eps);
  if (y <= -e2) return s;
  if (y >= e2) return -s;
  return -y * s * s;
}

double shift_rhs(double Y, double B, double eps) { return phi_eps(Y, eps) * (2.0 * std::abs(B) + 1.0); }

double shift_rhs(const FunctionalEvaluator& ev, const std::vector<double>& v,
                 const std::vector<double>& h, double X) {
  double Y, B;
  ev.y_and_b(v, h, X, Y, B);
  return shift_rhs(Y, B, ev.profile().end_states().eps);
}

ShiftController::ShiftController(std::shared_ptr<const FunctionalEvaluator> ev) : ev_(std::move(ev)) {
  if (!ev_) throw DomainError("shift controller needs a functional evaluator");
}

void ShiftController::attach(Stepper& stepper, double x0) {
  auto ev = ev_;
  stepper.set_coupled(
      [ev](const std::vector<double>& v, const std::vector<double>& h, double x) {
        return shift_rhs(*ev, v, h, x);
      },
      x0);
  state_.X = x0;
  state_.Xdot = stepper.last_coupled_rate();
}

const ShiftRecord& ShiftController::record(const Stepper& stepper, double Y, double B) {
  const double eps = ev_->profile().end_states().eps;
  ShiftRecord r;
  r.t = stepper.state().t;
  r.X = stepper.coupled_value();
  r.Xdot = shift_rhs(Y, B, eps);
  r.Y = Y;
  r.B = B;
  r.excess = std::max(0.0, std::abs(r.Xdot) * eps * eps - 1.0);
  if (!trace_.empty()) {
    const ShiftRecord& p = trace_.back();
    const double dt = r.t - p.t;
    state_.f_integral += 0.5 * dt * (p.excess + r.excess);
    state_.b_integral += 0.5 * dt * (std::abs(p.B) + std::abs(r.B));
  }
  state_.X = r.X;
  state_.Xdot = r.Xdot;
  trace_.push_back(r);
  return trace_.back();
}

}  // namespace shocklab
