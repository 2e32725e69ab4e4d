#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "shocklab/gas_model.hpp"
#include "shocklab/shock_profile.hpp"

namespace shocklab {

/// Uniform grid with nodes xi_min + i dx, i = 0..n.
struct Grid {
  double xi_min = 0.0;
  double xi_max = 0.0;
  int n = 0;

  Grid() = default;
  Grid(double lo, double hi, int cells);
  double dx() const noexcept { return (xi_max - xi_min) / n; }
  double x(int i) const noexcept { return xi_min + dx() * i; }
  size_t nodes() const noexcept { return static_cast<size_t>(n) + 1; }
};

/// Default grid [-40/eps, 40/eps] with spacing at most 1/(50 eps).
Grid default_grid(double eps, double span = 40.0, double points_per_width = 50.0);

struct FieldState {
  double t = 0.0;
  std::vector<double> v;
  std::vector<double> h;
};

/// Central difference of f at interior nodes and second-order one-sided closures at the ends.
std::vector<double> central_derivative(const std::vector<double>& f, double dx);

/// h = u + D p(v) with the solver's derivative stencil.
std::vector<double> effective_velocity_transform(const GasModel& gas, const std::vector<double>& v,
                                                 const std::vector<double>& u, const Grid& grid);

/// Semi-discrete right side of v_t = sigma v_xi + h_xi - p(v)_xixi, h_t = sigma h_xi - p(v)_xi.
/// Boundary rows are zero (Dirichlet pinning).
void semi_discrete_rhs(const GasModel& gas, double sigma, const Grid& grid, const std::vector<double>& v,
                       const std::vector<double>& h, std::vector<double>& dv, std::vector<double>& dh);

/// sup norm of the right side applied to the profile sampled on the grid.
double steady_residual(const GasModel& gas, const ShockProfile& profile, const Grid& grid);

/// 0.4-type stability bound: safety * min(dx / c_max, dx^2 / (2 max|p'(v)|)).
double stable_dt(const GasModel& gas, double sigma, const Grid& grid, const std::vector<double>& v,
                 double safety = 0.4);

/// Right side of an extra scalar ODE integrated inside the same Runge-Kutta stages.
using CoupledRhs = std::function<double(const std::vector<double>& v, const std::vector<double>& h,
                                        double x)>;

struct StepperOptions {
  double safety = 0.4;
  double v_floor = 0.0;  ///< positivity guard; 0 selects v_+/10
  int max_retries = 5;
};

/// Classical RK4 for the field, optionally coupled to a scalar unknown X.
class Stepper {
 public:
  Stepper(const GasModel& gas, const ShockEndStates& s, const Grid& grid, FieldState init,
          StepperOptions opt = {});

  void set_coupled(CoupledRhs rhs, double x0);

  const FieldState& state() const noexcept { return state_; }
  double coupled_value() const noexcept { return x_; }
  double last_coupled_rate() const noexcept { return xdot_; }
  const Grid& grid() const noexcept { return grid_; }
  double sigma() const noexcept { return sigma_; }
  double v_floor() const noexcept { return opt_.v_floor; }

  /// Stability-limited step for the current state.
  double max_dt() const;
  /// One RK4 step of size dt, with the positivity guard halving dt on failure.
  /// Returns the step actually taken.
  double step(double dt);
  /// Advances to t_target in steps bounded by max_dt().
  void advance_to(double t_target);

  /// Restores a checkpointed state.
  void restore(const FieldState& s, double x);

 private:
  bool try_step(double dt);
  void pin(std::vector<double>& v, std::vector<double>& h) const;

  GasModel gas_;
  ShockEndStates s_;
  Grid grid_;
  double sigma_;
  StepperOptions opt_;
  FieldState state_;
  CoupledRhs coupled_;
  double x_ = 0.0;
  double xdot_ = 0.0;
  std::vector<double> kv_[4], kh_[4], tv_, th_;
};

/// Callback receives the stepper at each record time; returning false stops the run.
using RecordCallback = std::function<bool(const Stepper&)>;

/// Runs until t_end, invoking the callback at t = 0 and every record_step.
void simulate(Stepper& stepper, double t_end, double record_step, const RecordCallback& cb);

/// CSV with columns xi,v,h.
void write_snapshot_csv(const std::string& path, const Grid& grid, const FieldState& s);

/// Binary restart checkpoint, little-endian:
///   bytes 0-7   magic "SHKCKPT1"
///   4-byte uint32 version (1), 4-byte uint32 reserved (0)
///   uint64 node count N, then float64 xi_min, xi_max, t, X
///   N float64 values of v, then N float64 values of h
void write_checkpoint(const std::string& path, const Grid& grid, const FieldState& s, double x);
void read_checkpoint(const std::string& path, Grid& grid, FieldState& s, double& x);

}  // namespace shocklab
