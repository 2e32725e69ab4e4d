#include "shocklab/pde_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "shocklab/errors.hpp"

namespace shocklab {

Grid::Grid(double lo, double hi, int cells) : xi_min(lo), xi_max(hi), n(cells) {
  if (!(lo < 0.0 && 0.0 < hi)) throw ConfigError("grid must satisfy xi_min < 0 < xi_max");
  if (cells < 4) throw ConfigError("grid needs at least 4 cells");
}

Grid default_grid(double eps, double span, double points_per_width) {
  const double half = span / eps;
  const double dx_max = 1.0 / (points_per_width * eps);
  const int n = static_cast<int>(std::ceil(2.0 * half / dx_max - 1e-9));
  return Grid(-half, half, n);
}

std::vector<double> central_derivative(const std::vector<double>& f, double dx) {
  const size_t n = f.size();
  std::vector<double> d(n, 0.0);
  if (n < 3) return d;
  for (size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * dx);
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dx);
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dx);
  return d;
}

std::vector<double> effective_velocity_transform(const GasModel& gas, const std::vector<double>& v,
                                                 const std::vector<double>& u, const Grid& grid) {
  if (v.size() != grid.nodes() || u.size() != grid.nodes()) {
    throw DomainError("transform arrays must match the grid");
  }
  std::vector<double> p(v.size());
  for (size_t i = 0; i < v.size(); ++i) p[i] = gas.pressure(v[i]);
  std::vector<double> h = central_derivative(p, grid.dx());
  for (size_t i = 0; i < h.size(); ++i) h[i] += u[i];
  return h;
}

void semi_discrete_rhs(const GasModel& gas, double sigma, const Grid& grid, const std::vector<double>& v,
                       const std::vector<double>& h, std::vector<double>& dv, std::vector<double>& dh) {
  const size_t n = v.size();
  dv.assign(n, 0.0);
  dh.assign(n, 0.0);
  const double dx = grid.dx();
  const double r1 = 1.0 / (2.0 * dx);
  const double r2 = 1.0 / (dx * dx);
  const double g = gas.gamma();
  double pm = std::pow(v[0], -g);
  double pc = std::pow(v[1], -g);
  for (size_t i = 1; i + 1 < n; ++i) {
    const double pp = std::pow(v[i + 1], -g);
    dv[i] = (sigma * (v[i + 1] - v[i - 1]) + (h[i + 1] - h[i - 1])) * r1 - (pp - 2.0 * pc + pm) * r2;
    dh[i] = (sigma * (h[i + 1] - h[i - 1]) - (pp - pm)) * r1;
    pm = pc;
    pc = pp;
  }
}

double steady_residual(const GasModel& gas, const ShockProfile& profile, const Grid& grid) {
  const size_t n = grid.nodes();
  std::vector<double> v(n), h(n), dv, dh;
  for (size_t i = 0; i < n; ++i) {
    const ProfilePoint q = profile.eval(grid.x(static_cast<int>(i)));
    v[i] = q.v;
    h[i] = q.h;
  }
  semi_discrete_rhs(gas, profile.end_states().sigma, grid, v, h, dv, dh);
  double r = 0.0;
  for (size_t i = 1; i + 1 < n; ++i) r = std::max({r, std::abs(dv[i]), std::abs(dh[i])});
  return r;
}

double stable_dt(const GasModel& gas, double sigma, const Grid& grid, const std::vector<double>& v,
                 double safety) {
  double vmin = v[0];
  for (double x : v) vmin = std::min(vmin, x);
  if (!(vmin > 0.0)) throw DomainError("non-positive specific volume in stability estimate");
  const double dpmax = std::abs(gas.dp_fast(vmin));
  const double cmax = std::abs(sigma) + std::sqrt(dpmax);
  const double dx = grid.dx();
  return safety * std::min(dx / cmax, dx * dx / (2.0 * dpmax));
}

Stepper::Stepper(const GasModel& gas, const ShockEndStates& s, const Grid& grid, FieldState init,
                 StepperOptions opt)
    : gas_(gas), s_(s), grid_(grid), sigma_(s.sigma), opt_(opt), state_(std::move(init)) {
  if (state_.v.size() != grid_.nodes() || state_.h.size() != grid_.nodes()) {
    throw ConfigError("initial state does not match the grid");
  }
  if (opt_.v_floor <= 0.0) opt_.v_floor = s_.v_plus / 10.0;
  for (double x : state_.v) {
    if (!(x > opt_.v_floor)) throw DomainError("initial specific volume violates the positivity floor");
  }
  pin(state_.v, state_.h);
  for (auto* a : {&kv_[0], &kv_[1], &kv_[2], &kv_[3], &kh_[0], &kh_[1], &kh_[2], &kh_[3], &tv_, &th_}) {
    a->assign(grid_.nodes(), 0.0);
  }
}

void Stepper::set_coupled(CoupledRhs rhs, double x0) {
  coupled_ = std::move(rhs);
  x_ = x0;
  xdot_ = coupled_ ? coupled_(state_.v, state_.h, x_) : 0.0;
}

void Stepper::restore(const FieldState& s, double x) {
  if (s.v.size() != grid_.nodes() || s.h.size() != grid_.nodes()) {
    throw ConfigError("restored state does not match the grid");
  }
  state_ = s;
  x_ = x;
  xdot_ = coupled_ ? coupled_(state_.v, state_.h, x_) : 0.0;
}

void Stepper::pin(std::vector<double>& v, std::vector<double>& h) const {
  v.front() = s_.v_minus;
  h.front() = s_.u_minus;
  v.back() = s_.v_plus;
  h.back() = s_.u_plus;
}

double Stepper::max_dt() const { return stable_dt(gas_, sigma_, grid_, state_.v, opt_.safety); }

bool Stepper::try_step(double dt) {
  const size_t n = grid_.nodes();
  const auto& v0 = state_.v;
  const auto& h0 = state_.h;
  double kx[4] = {0, 0, 0, 0};
  static constexpr double c[4] = {0.0, 0.5, 0.5, 1.0};
  for (int st = 0; st < 4; ++st) {
    const std::vector<double>* sv = &v0;
    const std::vector<double>* sh = &h0;
    double sx = x_;
    if (st > 0) {
      const double a = c[st] * dt;
      for (size_t i = 0; i < n; ++i) {
        tv_[i] = v0[i] + a * kv_[st - 1][i];
        th_[i] = h0[i] + a * kh_[st - 1][i];
        if (!(tv_[i] > opt_.v_floor)) return false;
      }
      sx = x_ + a * kx[st - 1];
      sv = &tv_;
      sh = &th_;
    }
    semi_discrete_rhs(gas_, sigma_, grid_, *sv, *sh, kv_[st], kh_[st]);
    if (coupled_) kx[st] = (st == 0) ? xdot_ : coupled_(*sv, *sh, sx);
  }
  for (size_t i = 0; i < n; ++i) {
    tv_[i] = v0[i] + dt / 6.0 * (kv_[0][i] + 2.0 * kv_[1][i] + 2.0 * kv_[2][i] + kv_[3][i]);
    th_[i] = h0[i] + dt / 6.0 * (kh_[0][i] + 2.0 * kh_[1][i] + 2.0 * kh_[2][i] + kh_[3][i]);
    if (!(tv_[i] > opt_.v_floor)) return false;
  }
  std::swap(state_.v, tv_);
  std::swap(state_.h, th_);
  pin(state_.v, state_.h);
  if (coupled_) {
    x_ += dt / 6.0 * (kx[0] + 2.0 * kx[1] + 2.0 * kx[2] + kx[3]);
    xdot_ = coupled_(state_.v, state_.h, x_);
  }
  state_.t += dt;
  return true;
}

double Stepper::step(double dt) {
  const double limit = max_dt();
  if (!(dt > 0.0) || dt > limit * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "time step " << dt << " violates the stability limit " << limit;
    throw ConfigError(os.str());
  }
  double h = dt;
  for (int attempt = 0; attempt <= opt_.max_retries; ++attempt) {
    if (try_step(h)) return h;
    h *= 0.5;
  }
  double vmin = state_.v[0];
  for (double x : state_.v) vmin = std::min(vmin, x);
  std::ostringstream os;
  os << "positivity guard failed at t = " << state_.t << " after " << opt_.max_retries
     << " halvings (min v = " << vmin << ", floor " << opt_.v_floor << ")";
  throw SolverError(os.str());
}

void Stepper::advance_to(double t_target) {
  while (state_.t < t_target) {
    const double remaining = t_target - state_.t;
    if (remaining <= 1e-12 * std::max(1.0, t_target)) {
      state_.t = t_target;
      break;
    }
    step(std::min(max_dt(), remaining));
  }
}

void simulate(Stepper& stepper, double t_end, double record_step, const RecordCallback& cb) {
  if (!(record_step > 0.0)) throw ConfigError("record step must be positive");
  if (cb && !cb(stepper)) return;
  const double t0 = stepper.state().t;
  if (!(t_end > t0)) return;
  const long count = std::max(1L, static_cast<long>(std::ceil((t_end - t0) / record_step - 1e-9)));
  for (long k = 1; k <= count; ++k) {
    const double target = k == count ? t_end : t0 + record_step * static_cast<double>(k);
    stepper.advance_to(target);
    if (cb && !cb(stepper)) return;
  }
}

void write_snapshot_csv(const std::string& path, const Grid& grid, const FieldState& s) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open snapshot file " + path);
  out << "xi,v,h\n" << std::setprecision(17);
  for (size_t i = 0; i < s.v.size(); ++i) {
    out << grid.x(static_cast<int>(i)) << ',' << s.v[i] << ',' << s.h[i] << '\n';
  }
  if (!out) throw IoError("failed writing snapshot file " + path);
}

namespace {

constexpr char kMagic[8] = {'S', 'H', 'K', 'C', 'K', 'P', 'T', '1'};

void put_u32(std::ostream& o, uint32_t x) {
  for (int b = 0; b < 4; ++b) o.put(static_cast<char>((x >> (8 * b)) & 0xffu));
}
void put_u64(std::ostream& o, uint64_t x) {
  for (int b = 0; b < 8; ++b) o.put(static_cast<char>((x >> (8 * b)) & 0xffu));
}
void put_f64(std::ostream& o, double d) {
  uint64_t x;
  std::memcpy(&x, &d, sizeof x);
  put_u64(o, x);
}
uint64_t get_u(std::istream& in, int bytes) {
  uint64_t x = 0;
  for (int b = 0; b < bytes; ++b) {
    const int c = in.get();
    if (c == EOF) throw IoError("truncated checkpoint");
    x |= static_cast<uint64_t>(static_cast<unsigned char>(c)) << (8 * b);
  }
  return x;
}
double get_f64(std::istream& in) {
  const uint64_t x = get_u(in, 8);
  double d;
  std::memcpy(&d, &x, sizeof d);
  return d;
}

}  // namespace

void write_checkpoint(const std::string& path, const Grid& grid, const FieldState& s, double x) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open checkpoint file " + path);
  out.write(kMagic, 8);
  put_u32(out, 1);
  put_u32(out, 0);
  put_u64(out, s.v.size());
  put_f64(out, grid.xi_min);
  put_f64(out, grid.xi_max);
  put_f64(out, s.t);
  put_f64(out, x);
  for (double d : s.v) put_f64(out, d);
  for (double d : s.h) put_f64(out, d);
  if (!out) throw IoError("failed writing checkpoint file " + path);
}

void read_checkpoint(const std::string& path, Grid& grid, FieldState& s, double& x) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint file " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0) throw IoError("not a checkpoint file: " + path);
  const uint64_t version = get_u(in, 4);
  if (version != 1) throw IoError("unsupported checkpoint version");
  get_u(in, 4);
  const uint64_t n = get_u(in, 8);
  if (n < 5 || n > (1ull << 32)) throw IoError("implausible node count in checkpoint");
  const double lo = get_f64(in);
  const double hi = get_f64(in);
  s.t = get_f64(in);
  x = get_f64(in);
  grid = Grid(lo, hi, static_cast<int>(n - 1));
  s.v.resize(n);
  s.h.resize(n);
  for (auto& d : s.v) d = get_f64(in);
  for (auto& d : s.h) d = get_f64(in);
}

}  // namespace shocklab
