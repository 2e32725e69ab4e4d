#include "shocklab/shock_profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "shocklab/errors.hpp"

namespace shocklab {

ShockEndStates end_states_from_amplitude(const GasModel& gas, double eps) {
  const double pm = gas.p_minus();
  if (!(eps > 0.0) || !(eps < pm) || !std::isfinite(eps)) {
    std::ostringstream os;
    os << "shock amplitude must lie in (0, p(v_minus)) = (0, " << pm << "), got " << eps;
    throw DomainError(os.str());
  }
  ShockEndStates s;
  s.gamma = gas.gamma();
  s.v_minus = gas.v_minus();
  s.u_minus = gas.u_minus();
  s.eps = eps;
  s.p_minus = pm;
  s.p_plus = pm + eps;
  // v_+ = (p_- + eps)^(-1/gamma), written as a correction to v_- to keep v_- - v_+ accurate.
  const double dv = s.v_minus * std::expm1(-std::log1p(eps / pm) / s.gamma);
  s.v_plus = s.v_minus + dv;
  s.sigma = -std::sqrt(eps / -dv);
  s.u_plus = s.u_minus + eps / s.sigma;
  return s;
}

double rankine_hugoniot_residual(const ShockEndStates& s) {
  const double du = s.u_plus - s.u_minus;
  const double r1 = -s.sigma * (s.v_plus - s.v_minus) - du;
  const double r2 = -s.sigma * du + s.p_plus - s.p_minus;
  const double scale1 = std::abs(s.sigma * (s.v_plus - s.v_minus)) + std::abs(du);
  const double scale2 = std::abs(s.sigma * du) + s.eps;
  return std::max(std::abs(r1) / scale1, std::abs(r2) / scale2);
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
constexpr double e1 = b1 - 5179.0 / 57600.0, e3 = b3 - 7571.0 / 16695.0,
                 e4 = b4 - 393.0 / 640.0, e5 = b5 + 92097.0 / 339200.0,
                 e6 = b6 - 187.0 / 2100.0, e7 = -1.0 / 40.0;

template <class F>
double dp45_advance(const F& f, double z, double H, double rtol, double& h_try) {
  double done = 0.0;
  double h = std::copysign(std::min(std::abs(h_try), std::abs(H)), H);
  double k1 = f(z);
  int guard = 0;
  while (std::abs(done) < std::abs(H)) {
    const double remaining = H - done;
    if (std::abs(h) > std::abs(remaining)) h = remaining;
    if (std::abs(h) < 1e-12 * std::abs(H) || ++guard > 100000) {
      std::ostringstream os;
      os << "profile integrator step underflow at z = " << z << " (step " << h << ")";
      throw SolverError(os.str());
    }
    const double k2 = f(z + h * a21 * k1);
    const double k3 = f(z + h * (a31 * k1 + a32 * k2));
    const double k4 = f(z + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const double k5 = f(z + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const double k6 = f(z + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const double zn = z + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const double k7 = f(zn);
    const double err =
        std::abs(h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7));
    const double tol = rtol * std::max(std::abs(z), std::abs(zn)) + 1e-300;
    const double fac = err > 0.0 ? 0.9 * std::pow(tol / err, 0.2) : 5.0;
    if (err <= tol && std::isfinite(zn)) {
      done += h;
      z = zn;
      k1 = k7;
      h_try = h * std::clamp(fac, 0.2, 5.0);
      h = h_try;
    } else {
      h *= std::clamp(fac, 0.1, 0.9);
    }
  }
  return z;
}

void hermite(double t, double& h00, double& h10, double& h01, double& h11) {
  const double t2 = t * t, t3 = t2 * t;
  h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  h10 = t3 - 2.0 * t2 + t;
  h01 = -2.0 * t3 + 3.0 * t2;
  h11 = t3 - t2;
}

}  // namespace

double ShockProfile::dy_of(double y, double ybar) const {
  const double eps = s_.eps;
  const double s2 = s_.sigma * s_.sigma;
  double f;
  if (y <= ybar) {
    const double dv = s_.v_minus * std::expm1(-std::log1p(eps * y / s_.p_minus) / gamma_);
    f = s2 * dv + eps * y;
  } else {
    const double dv = s_.v_plus * std::expm1(-std::log1p(-eps * ybar / s_.p_plus) / gamma_);
    f = s2 * dv - eps * ybar;
  }
  return f / (s_.sigma * eps);
}

double ShockProfile::v_of(double y, double ybar) const {
  if (y <= ybar) {
    return s_.v_minus + s_.v_minus * std::expm1(-std::log1p(s_.eps * y / s_.p_minus) / gamma_);
  }
  return s_.v_plus + s_.v_plus * std::expm1(-std::log1p(-s_.eps * ybar / s_.p_plus) / gamma_);
}

double ShockProfile::p_of(double y, double ybar) const {
  return y <= ybar ? s_.p_minus + s_.eps * y : s_.p_plus - s_.eps * ybar;
}

ShockProfile ShockProfile::solve(const GasModel& gas, const ShockEndStates& s, double span,
                                 double tol, double samples_per_width) {
  if (!(span > 0.0) || !(samples_per_width >= 4.0)) {
    throw DomainError("profile window and sampling density must be positive");
  }
  if (!(tol > 0.0)) throw DomainError("profile tolerance must be positive");
  ShockProfile P;
  P.s_ = s;
  P.gamma_ = gas.gamma();
  P.step_ = 1.0 / (s.eps * samples_per_width);
  const long nh = static_cast<long>(std::ceil(span * samples_per_width));
  const size_t n = static_cast<size_t>(2 * nh + 1);
  P.xi0_ = -static_cast<double>(nh) * P.step_;
  P.extension_ = span / s.eps;
  P.y_.assign(n, 0.0);
  P.ybar_.assign(n, 0.0);
  P.dy_.assign(n, 0.0);

  const double p0 = gas.pressure(0.5 * (s.v_minus + s.v_plus));
  const double y0 = (p0 - s.p_minus) / s.eps;
  const double ybar0 = (s.p_plus - p0) / s.eps;
  const size_t c = static_cast<size_t>(nh);
  P.y_[c] = y0;
  P.ybar_[c] = ybar0;
  P.dy_[c] = P.dy_of(y0, ybar0);

  // Integration tolerance well below the requested residual level.
  const double rtol = std::min(1e-12, 1e-2 * tol);
  constexpr double kSplice = 1e-12;

  auto f_left = [&P](double y) { return P.dy_of(y, 1.0 - y); };
  double z = y0, h_try = P.step_;
  bool spliced = false;
  double rate = 0.0;
  for (long j = 1; j <= nh; ++j) {
    const size_t i = c - static_cast<size_t>(j);
    if (!spliced) {
      z = dp45_advance(f_left, z, -P.step_, rtol, h_try);
      if (z < kSplice) {
        spliced = true;
        rate = f_left(z) / z;
      }
    } else {
      z *= std::exp(-rate * P.step_);
    }
    P.y_[i] = z;
    P.ybar_[i] = 1.0 - z;
    P.dy_[i] = P.dy_of(z, 1.0 - z);
  }

  auto f_right = [&P](double yb) { return -P.dy_of(1.0 - yb, yb); };
  z = ybar0;
  h_try = P.step_;
  spliced = false;
  for (long j = 1; j <= nh; ++j) {
    const size_t i = c + static_cast<size_t>(j);
    if (!spliced) {
      z = dp45_advance(f_right, z, P.step_, rtol, h_try);
      if (z < kSplice) {
        spliced = true;
        rate = -f_right(z) / z;
      }
    } else {
      z *= std::exp(-rate * P.step_);
    }
    P.ybar_[i] = z;
    P.y_[i] = 1.0 - z;
    P.dy_[i] = P.dy_of(1.0 - z, z);
  }
  P.fill_tail_rates();
  const double res = P.ode_residual();
  if (!(res <= tol)) {
    std::ostringstream os;
    os << "profile ODE residual " << res << " exceeds tolerance " << tol
       << "; increase samples_per_width";
    throw SolverError(os.str());
  }
  return P;
}

void ShockProfile::fill_tail_rates() {
  rate_left_ = y_.front() > 0.0 ? dy_.front() / y_.front() : 0.0;
  rate_right_ = ybar_.back() > 0.0 ? dy_.back() / ybar_.back() : 0.0;
}

ShockProfile ShockProfile::lattice(const ShockProfile& cont, double xi_min, double dx, int n) {
  if (n < 4 || !(dx > 0.0)) throw DomainError("lattice profile needs n >= 4 and dx > 0");
  const ShockEndStates& s = cont.s_;
  ShockProfile P;
  P.s_ = s;
  P.gamma_ = cont.gamma_;
  P.xi0_ = xi_min;
  P.step_ = dx;
  P.lattice_ = true;
  P.extension_ = 0.5 * dx * n;
  const size_t N = static_cast<size_t>(n) + 1;
  std::vector<double> v(N, 0.0);

  const double g = P.gamma_;
  const double sig = s.sigma;
  auto pres = [g](double x) { return std::pow(x, -g); };
  auto dpres = [g](double x) { return -g * std::pow(x, -g - 1.0); };
  auto S = [&](double x) { return sig * x + pres(x) / sig; };
  const double K = 2.0 * S(s.v_minus);

  long m0 = std::lround(-xi_min / dx);
  m0 = std::clamp(m0, 1L, static_cast<long>(n) - 1);
  v[static_cast<size_t>(m0)] = cont.eval(xi_min + dx * static_cast<double>(m0)).v;

  // Discrete first integral of the scheme: S_{m+1} + S_m - (2/dx)(P_{m+1} - P_m) = K.
  auto solve_next = [&](double vm, double sign) {
    const double target = K - S(vm) - sign * (2.0 / dx) * pres(vm);
    double x = vm;
    for (int it = 0; it < 60; ++it) {
      const double G = S(x) - sign * (2.0 / dx) * pres(x) - target;
      const double dG = sig + dpres(x) * (1.0 / sig - sign * 2.0 / dx);
      double xn = x - G / dG;
      if (!(xn > 0.0)) xn = 0.5 * x;
      const bool done = std::abs(xn - x) <= 1e-16 * x;
      x = xn;
      if (done) break;
    }
    return x;
  };
  for (size_t i = static_cast<size_t>(m0) + 1; i < N; ++i) v[i] = solve_next(v[i - 1], 1.0);
  for (long i = m0 - 1; i >= 0; --i) {
    v[static_cast<size_t>(i)] = solve_next(v[static_cast<size_t>(i) + 1], -1.0);
  }

  P.y_.resize(N);
  P.ybar_.resize(N);
  P.dy_.resize(N);
  for (size_t i = 0; i < N; ++i) {
    const double p = pres(v[i]);
    double y = (p - s.p_minus) / s.eps;
    double yb = (s.p_plus - p) / s.eps;
    y = std::clamp(y, 0.0, 1.0);
    yb = std::clamp(yb, 0.0, 1.0);
    P.y_[i] = y;
    P.ybar_[i] = yb;
    P.dy_[i] = P.dy_of(y, yb);
  }
  P.fill_tail_rates();
  return P;
}

void ShockProfile::eval_y(double xi, double& y, double& ybar) const {
  const double first = xi_first(), last = xi_last();
  if (xi < first) {
    if (xi < first - extension_) {
      std::ostringstream os;
      os << "profile evaluated at xi = " << xi << ", beyond the admissible window";
      throw EvaluationError(os.str());
    }
    y = y_.front() * std::exp(rate_left_ * (xi - first));
    ybar = 1.0 - y;
    return;
  }
  if (xi > last) {
    if (xi > last + extension_) {
      std::ostringstream os;
      os << "profile evaluated at xi = " << xi << ", beyond the admissible window";
      throw EvaluationError(os.str());
    }
    ybar = ybar_.back() * std::exp(-rate_right_ * (xi - last));
    y = 1.0 - ybar;
    return;
  }
  const double u = (xi - xi0_) / step_;
  size_t j = static_cast<size_t>(u);
  if (j >= y_.size() - 1) j = y_.size() - 2;
  const double t = u - static_cast<double>(j);
  double h00, h10, h01, h11;
  hermite(t, h00, h10, h01, h11);
  if (y_[j] <= ybar_[j]) {
    y = h00 * y_[j] + h10 * step_ * dy_[j] + h01 * y_[j + 1] + h11 * step_ * dy_[j + 1];
    ybar = 1.0 - y;
  } else {
    ybar = h00 * ybar_[j] - h10 * step_ * dy_[j] + h01 * ybar_[j + 1] - h11 * step_ * dy_[j + 1];
    y = 1.0 - ybar;
  }
}

double ShockProfile::interpolant_dy(double xi) const {
  if (xi < xi_first() || xi > xi_last()) {
    double y, yb;
    eval_y(xi, y, yb);
    return dy_of(y, yb);
  }
  const double u = (xi - xi0_) / step_;
  size_t j = static_cast<size_t>(u);
  if (j >= y_.size() - 1) j = y_.size() - 2;
  const double t = u - static_cast<double>(j);
  const double t2 = t * t;
  const double d00 = 6.0 * t2 - 6.0 * t, d10 = 3.0 * t2 - 4.0 * t + 1.0;
  const double d01 = -6.0 * t2 + 6.0 * t, d11 = 3.0 * t2 - 2.0 * t;
  return (d00 * y_[j] + d01 * y_[j + 1]) / step_ + d10 * dy_[j] + d11 * dy_[j + 1];
}

ProfilePoint ShockProfile::eval(double xi) const {
  ProfilePoint q;
  q.xi = xi;
  eval_y(xi, q.y, q.ybar);
  const double eps = s_.eps;
  q.p = p_of(q.y, q.ybar);
  q.v = v_of(q.y, q.ybar);
  q.dp = eps * dy_of(q.y, q.ybar);
  const double dpv = -gamma_ * q.p / q.v;
  q.dv = q.dp / dpv;
  q.d2p = (s_.sigma * s_.sigma / dpv + 1.0) * q.dp / s_.sigma;
  q.h = s_.u_minus + eps * q.y / s_.sigma;
  q.dh = q.dp / s_.sigma;
  return q;
}

double ShockProfile::ode_residual() const {
  double worst = 0.0;
  const double scale = std::abs(s_.sigma) * s_.eps;
  for (size_t i = 0; i + 1 < y_.size(); ++i) {
    for (double frac : {0.0, 0.5}) {
      const double xi = node(i) + frac * step_;
      double y, yb;
      eval_y(xi, y, yb);
      worst = std::max(worst, scale * std::abs(interpolant_dy(xi) - dy_of(y, yb)));
    }
  }
  return worst;
}

namespace {

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TailDecayReport tail_decay_report(const ShockProfile& prof, double lo, double hi) {
  TailDecayReport r;
  const ShockEndStates& s = prof.end_states();
  std::vector<double> xl, yl, xr, yr;
  double inf_dv = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < prof.size(); ++i) {
    const double xi = prof.node(i);
    const ProfilePoint q = prof.eval(xi);
    const double a = std::abs(q.dv);
    if (xi < 0.0 && q.y >= lo && q.y <= hi) {
      xl.push_back(-xi);
      yl.push_back(std::log(a));
    }
    if (xi > 0.0 && q.ybar >= lo && q.ybar <= hi) {
      xr.push_back(xi);
      yr.push_back(std::log(a));
    }
    if (std::abs(xi) <= 1.0 / s.eps) inf_dv = std::min(inf_dv, a);
  }
  r.samples_left = static_cast<int>(xl.size());
  r.samples_right = static_cast<int>(xr.size());
  if (r.samples_left < 10 || r.samples_right < 10) {
    std::ostringstream os;
    os << "tail fit needs at least 10 samples per tail, found " << r.samples_left << " and "
       << r.samples_right;
    throw DiagnosticsError(os.str());
  }
  r.rate_left = -ls_slope(xl, yl);
  r.rate_right = -ls_slope(xr, yr);
  r.kappa = inf_dv / (s.eps * s.eps);
  r.dv_at_zero = prof.eval(0.0).dv;
  r.logistic_estimate = -(s.v_minus - s.v_plus) * 0.5 * (r.rate_left + r.rate_right) / 4.0;
  return r;
}

}  // namespace shocklab
