#pragma once

#include <memory>
#include <vector>

#include "shocklab/gas_model.hpp"
#include "shocklab/pde_solver.hpp"
#include "shocklab/weight.hpp"

namespace shocklab {

struct FunctionalBreakdown {
  double Y = 0.0, Y_g = 0.0, Y_b = 0.0, Y_l = 0.0;
  double B1 = 0.0, B2 = 0.0, B = 0.0;
  double G1 = 0.0, G2 = 0.0, D = 0.0, G = 0.0;
  double R = 0.0;
  double weighted_entropy = 0.0;
  double eps = 0.0, lambda = 0.0, margin = 0.0;
};

/// Profile and weight sampled at xi_i - X on the field grid.
struct ReferenceSample {
  double X = 0.0;
  std::vector<double> v, h, p, dp, dv, dh, a, da, d2a, y;
};

/// Evaluates the energy-method functionals of a field on a fixed grid. The profile and weight
/// are shifted by -X (field fixed); all integrals use the trapezoid rule on the grid, and the
/// dissipation uses cell differences with the cell-averaged weight.
class FunctionalEvaluator {
 public:
  /// margin < 0 selects the default 0.1 eps / lambda.
  FunctionalEvaluator(const GasModel& gas, std::shared_ptr<const WeightFn> weight, const Grid& grid,
                      double margin = -1.0);

  const Grid& grid() const noexcept { return grid_; }
  const WeightFn& weight() const noexcept { return *weight_; }
  const ShockProfile& profile() const noexcept { return weight_->profile(); }
  const GasModel& gas() const noexcept { return gas_; }
  double margin() const noexcept { return margin_; }

  /// Throws EvaluationError when the shifted profile leaves its admissible window.
  void sample(double X, ReferenceSample& out) const;
  const ReferenceSample& sample_cached(double X) const;

  FunctionalBreakdown breakdown(const std::vector<double>& v, const std::vector<double>& h,
                                double X) const;
  /// Y and B only (the shift right side).
  void y_and_b(const std::vector<double>& v, const std::vector<double>& h, double X, double& Y,
               double& B) const;
  double weighted_entropy(const std::vector<double>& v, const std::vector<double>& h, double X) const;
  /// Unweighted relative entropy with X = 0.
  double entropy(const std::vector<double>& v, const std::vector<double>& h) const;
  /// D with the weight shifted by X.
  double dissipation(const std::vector<double>& v, double X) const;

 private:
  GasModel gas_;
  std::shared_ptr<const WeightFn> weight_;
  Grid grid_;
  double margin_;
  std::vector<double> wq_;
  mutable ReferenceSample cache_;
  mutable bool cache_valid_ = false;
};

FunctionalBreakdown compute_breakdown(const FunctionalEvaluator& ev, const FieldState& s, double X);

struct YDecomposition {
  double Y_g = 0.0, Y_b = 0.0, Y_l = 0.0;
};
YDecomposition y_decomposition(const FunctionalEvaluator& ev, const FieldState& s, double X);

struct TruncatedState {
  double k = 0.0;
  std::vector<double> v_bar;
  std::vector<double> h;
};
/// p(v_bar) - p(v~) = clamp(p(v) - p(v~), -k, k) with the profile shifted by X.
TruncatedState truncate_state(const FunctionalEvaluator& ev, const FieldState& s, double X, double k);

/// Integral of 1/2 (u + D p(v) - u~ - D p(v~))^2 + Q(v|v~) on the grid (trapezoid).
double bd_relative_functional(const GasModel& gas, const std::vector<double>& v,
                              const std::vector<double>& u, const std::vector<double>& v_ref,
                              const std::vector<double>& u_ref, const Grid& grid);

struct LayerVariables {
  std::vector<double> y;  ///< uniform grid on [0, 1]
  std::vector<double> W;  ///< (lambda/eps)(p(v) - p(v~)) resampled on y
  double alpha_gamma = 0.0;
};
LayerVariables normalized_layer_variables(const FunctionalEvaluator& ev, const FieldState& s, double X,
                                          int n_y = 257);

/// sup over interior y of |(dy/dxi)/(y(1-y)) - eps/(2 alpha_gamma)| from the profile ODE.
double dy_dxi_ratio_residual(const GasModel& gas, const ShockProfile& profile, int n_y = 999);

/// State with p(v) = p(v~) - s 2 eps/lambda and h = h~ + (p(v) - p(v~))/sigma, with s > 0
/// chosen so that Y vanishes. Reports the two quantities whose size is bounded by eps^2/lambda.
struct ConstrainedProbe {
  double s = 0.0;
  double Y = 0.0;
  double weighted_q = 0.0;  ///< integral of |a'| Q(v|v~)
  double weighted_h = 0.0;  ///< integral of |a'| |h - h~|^2
};
ConstrainedProbe y_constrained_probe(const FunctionalEvaluator& ev);

}  // namespace shocklab
