#include "shocklab/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "shocklab/errors.hpp"

namespace shocklab {

FunctionalEvaluator::FunctionalEvaluator(const GasModel& gas, std::shared_ptr<const WeightFn> weight,
                                         const Grid& grid, double margin)
    : gas_(gas), weight_(std::move(weight)), grid_(grid) {
  if (!weight_) throw DomainError("functional evaluator needs a weight");
  const double eps = weight_->profile().end_states().eps;
  margin_ = margin < 0.0 ? 0.1 * eps / weight_->lambda() : margin;
  wq_.assign(grid_.nodes(), grid_.dx());
  wq_.front() *= 0.5;
  wq_.back() *= 0.5;
}

void FunctionalEvaluator::sample(double X, ReferenceSample& r) const {
  const size_t n = grid_.nodes();
  for (auto* a : {&r.v, &r.h, &r.p, &r.dp, &r.dv, &r.dh, &r.a, &r.da, &r.d2a, &r.y}) a->resize(n);
  r.X = X;
  const ShockProfile& P = profile();
  for (size_t i = 0; i < n; ++i) {
    const ProfilePoint q = P.eval(grid_.x(static_cast<int>(i)) - X);
    const WeightPoint w = weight_->from_profile(q);
    r.v[i] = q.v;
    r.h[i] = q.h;
    r.p[i] = q.p;
    r.dp[i] = q.dp;
    r.dv[i] = q.dv;
    r.dh[i] = q.dh;
    r.a[i] = w.a;
    r.da[i] = w.da;
    r.d2a[i] = w.d2a;
    r.y[i] = q.y <= q.ybar ? q.y : 1.0 - q.ybar;
  }
}

const ReferenceSample& FunctionalEvaluator::sample_cached(double X) const {
  if (!cache_valid_ || cache_.X != X) {
    sample(X, cache_);
    cache_valid_ = true;
  }
  return cache_;
}

FunctionalBreakdown FunctionalEvaluator::breakdown(const std::vector<double>& v,
                                                   const std::vector<double>& h, double X) const {
  if (v.size() != grid_.nodes() || h.size() != grid_.nodes()) {
    throw DomainError("field arrays do not match the evaluator grid");
  }
  const ReferenceSample& r = sample_cached(X);
  const ShockEndStates& s = profile().end_states();
  const double sig = s.sigma;
  FunctionalBreakdown b;
  b.eps = s.eps;
  b.lambda = weight_->lambda();
  b.margin = margin_;
  const size_t n = v.size();
  std::vector<double> w(n);
  for (size_t i = 0; i < n; ++i) {
    if (!(v[i] > 0.0)) throw DomainError("non-positive specific volume in functional evaluation");
    const double P = gas_.p_fast(v[i]);
    w[i] = P - r.p[i];
    const double dh = h[i] - r.h[i];
    const double q = gas_.q_rel_fast(v[i], r.v[i]);
    const double eta = 0.5 * dh * dh + q;
    const double z = dh - w[i] / sig;
    const double prel = gas_.p_rel_fast(v[i], r.v[i]);
    const double dvv = v[i] - r.v[i];
    const double wi = wq_[i];
    const double a = r.a[i], da = r.da[i], d2a = r.d2a[i];
    b.Y += wi * (-da * eta + a * (-r.dp[i] * dvv + r.dh[i] * dh));
    b.Y_g += wi * (-da * w[i] * w[i] / (2.0 * sig * sig) - da * q - a * r.dp[i] * dvv +
                   a * r.dh[i] * w[i] / sig);
    b.Y_b += wi * (-0.5 * da * z * z - da * w[i] * z / sig);
    b.Y_l += wi * (a * r.dh[i] * z);
    b.B1 += wi * sig * a * r.dv[i] * prel;
    b.B2 += wi * (da * w[i] * w[i] / (2.0 * sig) + 0.5 * d2a * w[i] * w[i]);
    b.G1 += wi * 0.5 * sig * da * z * z;
    b.G2 += wi * sig * da * q;
    b.weighted_entropy += wi * a * eta;
  }
  const double dx = grid_.dx();
  for (size_t i = 0; i + 1 < n; ++i) {
    const double d = w[i + 1] - w[i];
    b.D += 0.5 * (r.a[i] + r.a[i + 1]) * d * d / dx;
  }
  b.B = b.B1 + b.B2;
  b.G = b.G1 + b.G2 + b.D;
  const double e4 = s.eps * s.eps * s.eps * s.eps;
  b.R = -b.Y * b.Y / e4 + (1.0 + margin_) * std::abs(b.B) - b.G;
  return b;
}

void FunctionalEvaluator::y_and_b(const std::vector<double>& v, const std::vector<double>& h,
                                  double X, double& Y, double& B) const {
  const ReferenceSample& r = sample_cached(X);
  const double sig = profile().end_states().sigma;
  Y = 0.0;
  B = 0.0;
  for (size_t i = 0; i < v.size(); ++i) {
    const double w = gas_.p_fast(v[i]) - r.p[i];
    const double dh = h[i] - r.h[i];
    const double eta = 0.5 * dh * dh + gas_.q_rel_fast(v[i], r.v[i]);
    const double wi = wq_[i];
    Y += wi * (-r.da[i] * eta + r.a[i] * (-r.dp[i] * (v[i] - r.v[i]) + r.dh[i] * dh));
    B += wi * (sig * r.a[i] * r.dv[i] * gas_.p_rel_fast(v[i], r.v[i]) +
               r.da[i] * w * w / (2.0 * sig) + 0.5 * r.d2a[i] * w * w);
  }
}

double FunctionalEvaluator::weighted_entropy(const std::vector<double>& v,
                                             const std::vector<double>& h, double X) const {
  const ReferenceSample& r = sample_cached(X);
  double e = 0.0;
  for (size_t i = 0; i < v.size(); ++i) {
    const double dh = h[i] - r.h[i];
    e += wq_[i] * r.a[i] * (0.5 * dh * dh + gas_.q_rel_fast(v[i], r.v[i]));
  }
  return e;
}

double FunctionalEvaluator::entropy(const std::vector<double>& v, const std::vector<double>& h) const {
  const ReferenceSample& r = sample_cached(0.0);
  double e = 0.0;
  for (size_t i = 0; i < v.size(); ++i) {
    const double dh = h[i] - r.h[i];
    e += wq_[i] * (0.5 * dh * dh + gas_.q_rel_fast(v[i], r.v[i]));
  }
  return e;
}

double FunctionalEvaluator::dissipation(const std::vector<double>& v, double X) const {
  const ReferenceSample& r = sample_cached(X);
  double d = 0.0;
  double wl = gas_.p_fast(v[0]) - r.p[0];
  for (size_t i = 0; i + 1 < v.size(); ++i) {
    const double wr = gas_.p_fast(v[i + 1]) - r.p[i + 1];
    d += 0.5 * (r.a[i] + r.a[i + 1]) * (wr - wl) * (wr - wl) / grid_.dx();
    wl = wr;
  }
  return d;
}

FunctionalBreakdown compute_breakdown(const FunctionalEvaluator& ev, const FieldState& s, double X) {
  return ev.breakdown(s.v, s.h, X);
}

YDecomposition y_decomposition(const FunctionalEvaluator& ev, const FieldState& s, double X) {
  const FunctionalBreakdown b = ev.breakdown(s.v, s.h, X);
  return {b.Y_g, b.Y_b, b.Y_l};
}

TruncatedState truncate_state(const FunctionalEvaluator& ev, const FieldState& s, double X, double k) {
  if (!(k > 0.0)) throw DomainError("truncation level must be positive");
  const ReferenceSample& r = ev.sample_cached(X);
  const GasModel& gas = ev.gas();
  TruncatedState t;
  t.k = k;
  t.h = s.h;
  t.v_bar.resize(s.v.size());
  for (size_t i = 0; i < s.v.size(); ++i) {
    const double w = gas.pressure(s.v[i]) - r.p[i];
    t.v_bar[i] = std::abs(w) <= k ? s.v[i] : gas.pressure_inverse(r.p[i] + std::clamp(w, -k, k));
  }
  return t;
}

double bd_relative_functional(const GasModel& gas, const std::vector<double>& v,
                              const std::vector<double>& u, const std::vector<double>& v_ref,
                              const std::vector<double>& u_ref, const Grid& grid) {
  const size_t n = grid.nodes();
  if (v.size() != n || u.size() != n || v_ref.size() != n || u_ref.size() != n) {
    throw DomainError("arrays do not match the grid");
  }
  std::vector<double> p(n), pr(n);
  for (size_t i = 0; i < n; ++i) {
    p[i] = gas.pressure(v[i]);
    pr[i] = gas.pressure(v_ref[i]);
  }
  const auto dp = central_derivative(p, grid.dx());
  const auto dpr = central_derivative(pr, grid.dx());
  std::vector<double> e(n);
  for (size_t i = 0; i < n; ++i) {
    const double d = u[i] + dp[i] - u_ref[i] - dpr[i];
    e[i] = 0.5 * d * d + gas.q_rel_fast(v[i], v_ref[i]);
  }
  double sum = 0.5 * (e.front() + e.back());
  for (size_t i = 1; i + 1 < n; ++i) sum += e[i];
  return sum * grid.dx();
}

LayerVariables normalized_layer_variables(const FunctionalEvaluator& ev, const FieldState& s, double X,
                                          int n_y) {
  if (n_y < 2) throw DomainError("layer resampling needs at least two points");
  const ReferenceSample& r = ev.sample_cached(X);
  const ShockEndStates& es = ev.profile().end_states();
  const double scale = ev.weight().lambda() / es.eps;
  const size_t n = s.v.size();
  std::vector<double> W(n);
  for (size_t i = 0; i < n; ++i) W[i] = scale * (ev.gas().pressure(s.v[i]) - r.p[i]);
  LayerVariables L;
  L.alpha_gamma = ev.gas().alpha_gamma();
  L.y.resize(static_cast<size_t>(n_y));
  L.W.resize(static_cast<size_t>(n_y));
  for (int j = 0; j < n_y; ++j) {
    const double yt = static_cast<double>(j) / (n_y - 1);
    L.y[static_cast<size_t>(j)] = yt;
    const auto it = std::lower_bound(r.y.begin(), r.y.end(), yt);
    double val;
    if (it == r.y.begin()) {
      val = W.front();
    } else if (it == r.y.end()) {
      val = W.back();
    } else {
      const size_t k = static_cast<size_t>(it - r.y.begin());
      const double y0 = r.y[k - 1], y1 = r.y[k];
      const double t = y1 > y0 ? (yt - y0) / (y1 - y0) : 0.0;
      val = (1.0 - t) * W[k - 1] + t * W[k];
    }
    L.W[static_cast<size_t>(j)] = val;
  }
  return L;
}

double dy_dxi_ratio_residual(const GasModel& gas, const ShockProfile& profile, int n_y) {
  const double eps = profile.end_states().eps;
  const double target = eps / (2.0 * gas.alpha_gamma());
  double worst = 0.0;
  for (int j = 1; j <= n_y; ++j) {
    const double y = static_cast<double>(j) / (n_y + 1);
    const double yb = static_cast<double>(n_y + 1 - j) / (n_y + 1);
    worst = std::max(worst, std::abs(profile.dy_of(y, yb) / (y * yb) - target));
  }
  return worst;
}

ConstrainedProbe y_constrained_probe(const FunctionalEvaluator& ev) {
  const ReferenceSample& r = ev.sample_cached(0.0);
  const ShockEndStates& es = ev.profile().end_states();
  const double unit = 2.0 * es.eps / ev.weight().lambda();
  const GasModel& gas = ev.gas();
  const size_t n = r.v.size();
  std::vector<double> v(n), h(n);
  auto build = [&](double s) {
    for (size_t i = 0; i < n; ++i) {
      const double w = -s * unit;
      v[i] = gas.pressure_inverse(r.p[i] + w);
      h[i] = r.h[i] + w / es.sigma;
    }
  };
  auto Yof = [&](double s) {
    build(s);
    return ev.breakdown(v, h, 0.0).Y;
  };
  const double s_max = 0.95 * es.p_minus / unit;
  const int scan = 200;
  double lo = 0.0, hi = 0.0, ylo = 0.0;
  bool found = false;
  double prev_s = s_max / scan, prev_y = Yof(prev_s);
  for (int k = 2; k <= scan; ++k) {
    const double sk = s_max * k / scan;
    const double yk = Yof(sk);
    if ((prev_y < 0.0) != (yk < 0.0)) {
      lo = prev_s;
      hi = sk;
      ylo = prev_y;
      found = true;
      break;
    }
    prev_s = sk;
    prev_y = yk;
  }
  if (!found) throw DiagnosticsError("no non-trivial root of Y along the constant-offset family");
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double ym = Yof(mid);
    if ((ym < 0.0) == (ylo < 0.0)) {
      lo = mid;
      ylo = ym;
    } else {
      hi = mid;
    }
  }
  ConstrainedProbe p;
  p.s = 0.5 * (lo + hi);
  build(p.s);
  const FunctionalBreakdown b = ev.breakdown(v, h, 0.0);
  p.Y = b.Y;
  const double dx = ev.grid().dx();
  for (size_t i = 0; i < n; ++i) {
    const double wi = (i == 0 || i + 1 == n) ? 0.5 * dx : dx;
    const double dh = h[i] - r.h[i];
    p.weighted_q += wi * std::abs(r.da[i]) * gas.q_rel_fast(v[i], r.v[i]);
    p.weighted_h += wi * std::abs(r.da[i]) * dh * dh;
  }
  return p;
}

}  // namespace shocklab
