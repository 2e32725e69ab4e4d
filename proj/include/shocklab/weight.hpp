#pragma once

#include <memory>
#include <string>
#include <vector>

#include "shocklab/shock_profile.hpp"

namespace shocklab {

struct WeightPoint {
  double a = 0.0;
  double da = 0.0;
  double d2a = 0.0;
};

/// a(xi) = 1 - lambda (p(v~(xi)) - p_-)/[p] built on a shared profile.
class WeightFn {
 public:
  WeightFn(std::shared_ptr<const ShockProfile> profile, double lambda);

  double lambda() const noexcept { return lambda_; }
  const ShockProfile& profile() const noexcept { return *profile_; }
  std::shared_ptr<const ShockProfile> profile_ptr() const noexcept { return profile_; }

  WeightPoint eval(double xi) const;
  /// Same values from an already evaluated profile point.
  WeightPoint from_profile(const ProfilePoint& q) const noexcept;

  /// Values on the profile nodes.
  const std::vector<double>& a_nodes() const noexcept { return a_; }
  const std::vector<double>& da_nodes() const noexcept { return da_; }
  const std::vector<double>& d2a_nodes() const noexcept { return d2a_; }

 private:
  std::shared_ptr<const ShockProfile> profile_;
  double lambda_;
  std::vector<double> a_, da_, d2a_;
};

struct WeightRatioReport {
  double d2a_over_eps_da = 0.0;   ///< sup|a''| / (eps sup|a'|)
  double da_over_dv_min = 0.0;    ///< min of |a'| / ((lambda/eps) |v~'|) over the nodes
  double da_over_dv_max = 0.0;
  double total_variation = 0.0;   ///< trapezoid integral of |a'| plus exact tail contributions
  double max_da = 0.0;            ///< largest a' on the nodes; must be <= 0
};

WeightRatioReport weight_derivative_ratios(const WeightFn& w);

/// CSV with columns xi,v,h,p,dp,a,da,d2a on n uniform points of [xi_lo, xi_hi].
void write_profile_csv(const std::string& path, const WeightFn& w, double xi_lo, double xi_hi, size_t n);

}  // namespace shocklab
