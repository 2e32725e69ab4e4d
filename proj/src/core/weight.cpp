#include "shocklab/weight.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "shocklab/errors.hpp"

namespace shocklab {

WeightFn::WeightFn(std::shared_ptr<const ShockProfile> profile, double lambda)
    : profile_(std::move(profile)), lambda_(lambda) {
  if (!profile_) throw DomainError("weight needs a profile");
  if (!(lambda > 0.0 && lambda < 0.5)) {
    std::ostringstream os;
    os << "weight magnitude lambda must lie in (0, 1/2), got " << lambda;
    throw DomainError(os.str());
  }
  const size_t n = profile_->size();
  a_.resize(n);
  da_.resize(n);
  d2a_.resize(n);
  for (size_t i = 0; i < n; ++i) {
    const WeightPoint w = from_profile(profile_->eval(profile_->node(i)));
    a_[i] = w.a;
    da_[i] = w.da;
    d2a_[i] = w.d2a;
  }
}

WeightPoint WeightFn::from_profile(const ProfilePoint& q) const noexcept {
  const double eps = profile_->end_states().eps;
  // (p - p_-)/[p] is y, or 1 - ybar on the right half where ybar is the accurate one.
  const double frac = q.y <= q.ybar ? q.y : 1.0 - q.ybar;
  return {1.0 - lambda_ * frac, -lambda_ * q.dp / eps, -lambda_ * q.d2p / eps};
}

WeightPoint WeightFn::eval(double xi) const { return from_profile(profile_->eval(xi)); }

WeightRatioReport weight_derivative_ratios(const WeightFn& w) {
  const ShockProfile& P = w.profile();
  const double eps = P.end_states().eps;
  const double lam = w.lambda();
  WeightRatioReport r;
  double sup_da = 0.0, sup_d2a = 0.0;
  r.da_over_dv_min = std::numeric_limits<double>::infinity();
  r.da_over_dv_max = 0.0;
  r.max_da = -std::numeric_limits<double>::infinity();
  std::vector<double> absda(P.size());
  for (size_t i = 0; i < P.size(); ++i) {
    const ProfilePoint q = P.eval(P.node(i));
    const double da = w.da_nodes()[i];
    sup_da = std::max(sup_da, std::abs(da));
    sup_d2a = std::max(sup_d2a, std::abs(w.d2a_nodes()[i]));
    r.max_da = std::max(r.max_da, da);
    absda[i] = std::abs(da);
    if (q.dv != 0.0) {
      const double ratio = std::abs(da) / (lam / eps * std::abs(q.dv));
      r.da_over_dv_min = std::min(r.da_over_dv_min, ratio);
      r.da_over_dv_max = std::max(r.da_over_dv_max, ratio);
    }
  }
  r.d2a_over_eps_da = sup_d2a / (eps * sup_da);
  double tv = 0.0;
  for (size_t i = 0; i + 1 < absda.size(); ++i) tv += 0.5 * (absda[i] + absda[i + 1]) * P.step();
  const ProfilePoint first = P.eval(P.xi_first());
  const ProfilePoint last = P.eval(P.xi_last());
  r.total_variation = tv + lam * (first.y + last.ybar);
  return r;
}

void write_profile_csv(const std::string& path, const WeightFn& w, double xi_lo, double xi_hi, size_t n) {
  if (n < 2 || !(xi_hi > xi_lo)) throw DomainError("profile csv needs n >= 2 and xi_lo < xi_hi");
  std::ofstream f(path);
  if (!f) throw IoError("cannot write profile '" + path + "'");
  f << "xi,v,h,p,dp,a,da,d2a\n" << std::setprecision(17);
  const double step = (xi_hi - xi_lo) / static_cast<double>(n - 1);
  for (size_t i = 0; i < n; ++i) {
    const double xi = xi_lo + step * static_cast<double>(i);
    const ProfilePoint q = w.profile().eval(xi);
    const WeightPoint a = w.from_profile(q);
    f << xi << ',' << q.v << ',' << q.h << ',' << q.p << ',' << q.dp << ',' << a.a << ',' << a.da << ',' << a.d2a
      << '\n';
  }
  if (!f) throw IoError("write failed for '" + path + "'");
}

}  // namespace shocklab
