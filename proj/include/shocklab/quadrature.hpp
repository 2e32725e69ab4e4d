#pragma once

#include <functional>
#include <vector>

namespace shocklab {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature on [a, b].
/// Throws QuadratureError when the interval budget is exhausted before the tolerance is met.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol = 1e-13, double rel_tol = 1e-13,
                                    int max_intervals = 4000);

/// Composite trapezoid rule on uniform samples.
double trapezoid(const std::vector<double>& y, double dx);

}  // namespace shocklab
