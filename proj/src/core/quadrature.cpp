#include "shocklab/quadrature.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <sstream>

#include "shocklab/errors.hpp"

namespace shocklab {

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5 and the centre.
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[static_cast<size_t>(j)];
    const double fsum = f(c - dx) + f(c + dx);
    kronrod += kWgk[static_cast<size_t>(j)] * fsum;
    if (j % 2 == 1) gauss += kWg[static_cast<size_t>(j / 2)] * fsum;
  }
  return {a, b, kronrod * h, std::abs((kronrod - gauss) * h)};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol, double rel_tol, int max_intervals) {
  if (!(b > a)) throw QuadratureError("integration bounds must satisfy a < b");
  std::priority_queue<Segment> heap;
  heap.push(gk15(f, a, b));
  double total = heap.top().value;
  double err = heap.top().error;
  int count = 1;
  while (err > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (count >= max_intervals) {
      std::ostringstream os;
      os << "adaptive quadrature did not converge on [" << a << ", " << b << "], error estimate "
         << err;
      throw QuadratureError(os.str());
    }
    const Segment s = heap.top();
    heap.pop();
    const double m = 0.5 * (s.a + s.b);
    const Segment l = gk15(f, s.a, m);
    const Segment r = gk15(f, m, s.b);
    total += l.value + r.value - s.value;
    err += l.error + r.error - s.error;
    heap.push(l);
    heap.push(r);
    ++count;
    if (!std::isfinite(total)) throw QuadratureError("integrand produced a non-finite value");
  }
  // Re-sum to shed the drift from incremental updates.
  total = 0.0;
  err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  return {total, err, count};
}

double trapezoid(const std::vector<double>& y, double dx) {
  if (y.size() < 2) return 0.0;
  double s = 0.5 * (y.front() + y.back());
  for (size_t i = 1; i + 1 < y.size(); ++i) s += y[i];
  return s * dx;
}

}  // namespace shocklab
