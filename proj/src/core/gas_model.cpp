#include "shocklab/gas_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "shocklab/errors.hpp"

namespace shocklab {

namespace {

// sum_{k>=2} binom(a, k) t^k for small |t|.
double binomial_tail(double a, double t) {
  double b = a * (a - 1.0) / 2.0;
  double tk = t * t;
  double sum = b * tk;
  for (int k = 3; k < 80; ++k) {
    b *= (a - k + 1.0) / k;
    tk *= t;
    const double term = b * tk;
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

constexpr double kSeriesThreshold = 0.05;

void require_positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    std::ostringstream os;
    os << name << " must be positive and finite, got " << x;
    throw DomainError(os.str());
  }
}

}  // namespace

GasModel::GasModel(double gamma, double v_minus, double u_minus)
    : gamma_(gamma), v_minus_(v_minus), u_minus_(u_minus) {
  if (!(gamma > 1.0) || !std::isfinite(gamma)) throw DomainError("gamma must exceed 1");
  require_positive(v_minus, "v_minus");
  if (!std::isfinite(u_minus)) throw DomainError("u_minus must be finite");
  p_minus_ = std::pow(v_minus_, -gamma_);
  if (!(p_minus_ > 0.0) || !std::isfinite(p_minus_)) throw DomainError("p(v_minus) is not finite");
}

double GasModel::p_fast(double v) const noexcept { return std::pow(v, -gamma_); }

double GasModel::dp_fast(double v) const noexcept { return -gamma_ * std::pow(v, -gamma_ - 1.0); }

double GasModel::pressure(double v) const {
  require_positive(v, "v");
  return p_fast(v);
}

double GasModel::dpressure(double v) const {
  require_positive(v, "v");
  return dp_fast(v);
}

double GasModel::d2pressure(double v) const {
  require_positive(v, "v");
  return gamma_ * (gamma_ + 1.0) * std::pow(v, -gamma_ - 2.0);
}

double GasModel::pressure_inverse(double p) const {
  require_positive(p, "p");
  return std::pow(p, -1.0 / gamma_);
}

double GasModel::q_entropy(double v) const {
  require_positive(v, "v");
  return std::pow(v, 1.0 - gamma_) / (gamma_ - 1.0);
}

double GasModel::q_rel_fast(double v, double w) const noexcept {
  const double t = (v - w) / w;
  double f;
  if (std::abs(t) < kSeriesThreshold) {
    f = binomial_tail(1.0 - gamma_, t) / (gamma_ - 1.0);
  } else {
    f = std::expm1((1.0 - gamma_) * std::log1p(t)) / (gamma_ - 1.0) + t;
  }
  return std::pow(w, 1.0 - gamma_) * f;
}

double GasModel::p_rel_fast(double v, double w) const noexcept {
  const double t = (v - w) / w;
  double f;
  if (std::abs(t) < kSeriesThreshold) {
    f = binomial_tail(-gamma_, t);
  } else {
    f = std::expm1(-gamma_ * std::log1p(t)) + gamma_ * t;
  }
  return std::pow(w, -gamma_) * f;
}

double GasModel::q_relative(double v, double w) const {
  require_positive(v, "v");
  require_positive(w, "w");
  return q_rel_fast(v, w);
}

double GasModel::p_relative(double v, double w) const {
  require_positive(v, "v");
  require_positive(w, "w");
  return p_rel_fast(v, w);
}

double GasModel::eta_relative(VH a, VH b) const {
  const double dh = a.h - b.h;
  return 0.5 * dh * dh + q_relative(a.v, b.v);
}

double GasModel::sound_speed_minus() const { return std::sqrt(-dp_fast(v_minus_)); }

double GasModel::alpha_gamma() const {
  return gamma_ * sound_speed_minus() * p_minus_ / (gamma_ + 1.0);
}

double default_delta_star(const GasModel& gas) { return 0.01 * gas.p_minus(); }

namespace {

std::vector<double> open_grid(double lo, double hi, int n) {
  std::vector<double> g(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) g[static_cast<size_t>(i)] = lo + (hi - lo) * (i + 1.0) / (n + 1.0);
  return g;
}

}  // namespace

BoundConstants fit_bound_constants(const GasModel& gas, int n) {
  if (n < 10) throw DomainError("fit_bound_constants needs at least 10 grid points per axis");
  const double vm = gas.v_minus();
  BoundConstants c;
  c.delta_star = default_delta_star(gas);

  double c1 = std::numeric_limits<double>::infinity();
  double c2 = c1;
  double c3 = 0.0, cp0 = 0.0, cp4 = 0.0;
  const auto w_all = open_grid(0.0, vm, n);
  const auto w_quarter = open_grid(vm / 4.0, vm, n);
  const auto v_near = open_grid(0.0, 3.0 * vm, n);
  const auto v_far = open_grid(3.0 * vm, 40.0 * vm, n);
  const auto v_half = open_grid(vm / 2.0, 40.0 * vm, n);
  const auto v_all = open_grid(0.0, 40.0 * vm, 2 * n);

  for (double w : w_all) {
    for (double v : v_near) {
      const double d = v - w;
      if (std::abs(d) < 1e-12) continue;
      c1 = std::min(c1, gas.q_rel_fast(v, w) / (d * d));
    }
    for (double v : v_far) c2 = std::min(c2, gas.q_rel_fast(v, w) / std::abs(v - w));
  }
  for (double w : w_quarter) {
    for (double v : v_half) {
      const double d = v - w;
      if (std::abs(d) < 1e-12) continue;
      c3 = std::max(c3, std::abs(gas.p_fast(v) - gas.p_fast(w)) / std::abs(d));
      cp0 = std::max(cp0, gas.p_rel_fast(v, w) / (d * d));
    }
    for (double v : v_all) {
      const double d = v - w;
      if (std::abs(d) < 1e-12) continue;
      const double denom = std::abs(d) + std::abs(gas.p_fast(v) - gas.p_fast(w));
      cp4 = std::max(cp4, gas.p_rel_fast(v, w) / denom);
    }
  }

  // Convexity of Q(.|w) makes the slope at v = u the worst case, so the constant is
  // the infimum of |Q'(u) - Q'(w)| = |p(w) - p(u)| over the admissible (u, w).
  const double ds = c.delta_star;
  double crq1 = std::numeric_limits<double>::infinity();
  for (double w : open_grid(vm - ds / 2.0, vm, n / 4)) {
    for (double u : open_grid(0.0, 40.0 * vm, 2 * n)) {
      if (std::abs(w - u) <= ds) continue;
      crq1 = std::min(crq1, std::abs(gas.p_fast(w) - gas.p_fast(u)));
    }
    for (double s : {1.0 + 1e-9, -1.0 - 1e-9}) {
      const double u = w + s * ds;
      crq1 = std::min(crq1, std::abs(gas.p_fast(w) - gas.p_fast(u)));
    }
  }

  double cpq = 0.0;
  const double pm = gas.p_minus();
  for (double pw : open_grid(pm - ds, pm + ds, n / 4)) {
    const double w = gas.pressure_inverse(pw);
    for (double pv : open_grid(pw - ds, pw + ds, n / 4)) {
      const double v = gas.pressure_inverse(pv);
      const double q = gas.q_rel_fast(v, w);
      if (q <= 0.0) continue;
      cpq = std::max(cpq, (pv - pw) * (pv - pw) / q);
    }
  }

  c.c1 = 0.99 * c1;
  c.c2 = 0.99 * c2;
  c.c3 = 1.01 * c3;
  c.c_p0 = 1.01 * cp0;
  c.c_p4 = 1.01 * cp4;
  c.c_relq1 = 0.99 * crq1;
  c.c_pq = 1.01 * cpq;
  return c;
}

BoundConstants analytic_bound_constants(const GasModel& gas, double delta_star) {
  const double vm = gas.v_minus();
  const double g = gas.gamma();
  BoundConstants c;
  c.delta_star = delta_star;
  c.c1 = 0.5 * g * std::pow(3.0 * vm, -g - 1.0);
  c.c2 = gas.q_relative(3.0 * vm, vm) / (2.0 * vm);
  c.c3 = std::abs(gas.dpressure(vm / 4.0));
  c.c_p0 = 0.5 * gas.d2pressure(vm / 4.0);
  c.c_p4 = std::max(2.0 * std::abs(gas.dpressure(vm / 4.0)), 2.0);
  c.c_relq1 = std::min(gas.pressure(vm) - gas.pressure(vm + delta_star / 2.0),
                       gas.pressure(vm - delta_star) - gas.pressure(vm - delta_star / 2.0));
  return c;
}

bool GlobalBoundsReport::all_hold() const {
  if (rejected) return false;
  for (const auto* o : {&rel_q, &q_sim, &rel_q1, &pressure2, &pressure0, &pressure4}) {
    if (o->applicability == Applicability::applies && !o->holds) return false;
  }
  return true;
}

GlobalBoundsReport check_global_bounds(const GasModel& gas, const BoundConstants& c, double v,
                                       double w) {
  return check_global_bounds(gas, c, v, w, 0.5 * (v + w));
}

GlobalBoundsReport check_global_bounds(const GasModel& gas, const BoundConstants& c, double v,
                                       double w, double u) {
  GlobalBoundsReport r;
  const double vm = gas.v_minus();
  if (!(v > 0.0) || !(u > 0.0) || !std::isfinite(v) || !std::isfinite(u)) {
    r.rejected = true;
    r.reason = "v and u must be positive";
    return r;
  }
  if (!(w > 0.0 && w < vm)) {
    r.rejected = true;
    r.reason = "w must lie in (0, v_minus)";
    return r;
  }
  const double d = v - w;
  const double q = gas.q_rel_fast(v, w);
  const double dp = gas.p_fast(v) - gas.p_fast(w);
  const double prel = gas.p_rel_fast(v, w);
  constexpr double tiny = 1e-14;

  r.far_branch = v >= 3.0 * vm;
  r.rel_q.applicability = Applicability::applies;
  r.rel_q.lhs = q;
  r.rel_q.rhs = r.far_branch ? c.c2 * std::abs(d) : c.c1 * d * d;
  r.rel_q.holds = q + tiny >= r.rel_q.rhs;

  const bool between = (w <= u && u <= v) || (v <= u && u <= w);
  if (between) {
    r.q_sim.applicability = Applicability::applies;
    r.q_sim.lhs = q;
    r.q_sim.rhs = gas.q_rel_fast(u, w);
    r.q_sim.holds = q + tiny >= r.q_sim.rhs;
    if (w > vm - c.delta_star / 2.0 && std::abs(w - u) > c.delta_star) {
      r.rel_q1.applicability = Applicability::applies;
      r.rel_q1.lhs = q - r.q_sim.rhs;
      r.rel_q1.rhs = c.c_relq1 * std::abs(u - v);
      r.rel_q1.holds = r.rel_q1.lhs + tiny >= r.rel_q1.rhs;
    }
  }

  if (w > vm / 4.0) {
    if (v >= vm / 2.0) {
      r.pressure2.applicability = Applicability::applies;
      r.pressure2.lhs = std::abs(dp);
      r.pressure2.rhs = c.c3 * std::abs(d);
      r.pressure2.holds = r.pressure2.lhs <= r.pressure2.rhs + tiny;
      r.pressure0.applicability = Applicability::applies;
      r.pressure0.lhs = prel;
      r.pressure0.rhs = c.c_p0 * d * d;
      r.pressure0.holds = prel <= r.pressure0.rhs + tiny;
    }
    r.pressure4.applicability = Applicability::applies;
    r.pressure4.lhs = prel;
    r.pressure4.rhs = c.c_p4 * (std::abs(d) + std::abs(dp));
    r.pressure4.holds = prel <= r.pressure4.rhs + tiny;
  }
  return r;
}

LocalExpansionRatios local_expansion_ratios(const GasModel& gas, double v, double w) {
  const double g = gas.gamma();
  const double pw = gas.pressure(w);
  const double dp = gas.pressure(v) - pw;
  if (dp == 0.0) throw DomainError("local expansion ratios need v != w");
  LocalExpansionRatios r;
  const double lead_p = (g + 1.0) / (2.0 * g * pw);
  const double lead_q = std::pow(pw, -1.0 / g - 1.0) / (2.0 * g);
  r.p_ratio = gas.p_relative(v, w) / (lead_p * dp * dp);
  const double q = gas.q_relative(v, w);
  r.q_ratio = q / (lead_q * dp * dp);
  r.q_lower_gap = q - (lead_q * dp * dp - (1.0 + g) / (3.0 * g * g) * std::pow(pw, -1.0 / g - 2.0) * dp * dp * dp);
  return r;
}

double pressure_inverse_combination(const GasModel& gas, double p_minus, double p_plus, double p) {
  if (!(p_minus > 0.0 && p_minus < p && p < p_plus)) {
    throw DomainError("pressure_inverse_combination needs 0 < p_minus < p < p_plus");
  }
  const double v = gas.pressure_inverse(p);
  const double vm = gas.pressure_inverse(p_minus);
  const double vp = gas.pressure_inverse(p_plus);
  const double d1 = gas.dpressure(vm);
  return (v - vm) / (p - p_minus) + (v - vp) / (p_plus - p) +
         0.5 * gas.d2pressure(vm) / (d1 * d1) * (vm - vp);
}

}  // namespace shocklab
