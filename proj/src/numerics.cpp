#include "fharm/numerics.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "fharm/errors.hpp"

namespace fharm::num {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

// The library error estimate carries a pessimism floor of roughly 1e-8
// relative even when the result is exact to machine precision, so the
// post-hoc check can only flag gross non-convergence; the per-module tests
// pin the actual accuracy against closed forms.
void check_quadrature(double val, double error, double l1, double abs_tol,
                      const char* what, double a, double b) {
  const double floor = std::max(abs_tol, 1e-7 * (std::abs(val) + l1));
  if (std::isfinite(val) && error <= floor) return;
  throw Error(ErrorKind::numeric,
              std::string(what) + " did not converge: achieved error " +
                  sci(error) + " over [" + sci(a) + ", " + sci(b) + "]");
}

}  // namespace

double integrate(const Fn& f, double a, double b, QuadratureOpts opts) {
  if (a == b) return 0.0;
  double error = 0.0, l1 = 0.0;
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  const double val =
      GK::integrate(f, a, b, opts.max_depth, 1e-13, &error, &l1);
  check_quadrature(val, error, l1, opts.abs_tol, "quadrature", a, b);
  return val;
}

double integrate_sqrt_lower(const Fn& f, double a, double b,
                            QuadratureOpts opts) {
  if (b <= a) return 0.0;
  const double w = std::sqrt(b - a);
  auto g = [&](double v) { return 2.0 * v * f(a + v * v); };
  // The substitution leaves a bounded integrand; the residual endpoint
  // behavior is handled by tanh_sinh.
  boost::math::quadrature::tanh_sinh<double> ts;
  double error = 0.0, l1 = 0.0;
  std::size_t levels = 0;
  const double val = ts.integrate(g, 0.0, w, 1e-13, &error, &l1, &levels);
  check_quadrature(val, error * l1, l1, opts.abs_tol,
                   "singular-edge quadrature", a, b);
  return val;
}

double integrate_to_inf(const Fn& f, double a, double tol) {
  boost::math::quadrature::exp_sinh<double> es;
  double error = 0.0, l1 = 0.0;
  const double val = es.integrate(f, a,
                                  std::numeric_limits<double>::infinity(),
                                  1e-12, &error, &l1);
  check_quadrature(val, error * l1, l1, tol, "tail quadrature", a,
                   std::numeric_limits<double>::infinity());
  return val;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n)
    throw Error(ErrorKind::parameter, "line fit needs >= 2 matching samples");
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxx > 0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  double rss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    rss += r * r;
  }
  fit.residual = std::sqrt(rss / n);
  return fit;
}

std::optional<double> root_of_increasing(const Fn& g, double target,
                                         double cap) {
  if (target <= 0.0)
    throw Error(ErrorKind::parameter, "root_of_increasing expects target > 0");
  double lo = 0.0, hi = 1.0;
  double ghi = g(hi);
  // Expand until the bracket straddles the target, shrinking back when the
  // evaluation overflows.
  int guard = 0;
  while (std::isfinite(ghi) && ghi < target && hi < cap) {
    lo = hi;
    hi *= 2.0;
    ghi = g(hi);
    if (++guard > 2000) return std::nullopt;
  }
  if (!std::isfinite(ghi)) {
    double bad = hi;
    for (int i = 0; i < 400; ++i) {
      const double mid = 0.5 * (lo + bad);
      const double gm = g(mid);
      if (!std::isfinite(gm)) {
        bad = mid;
      } else if (gm < target) {
        lo = mid;
      } else {
        hi = mid;
        ghi = gm;
        break;
      }
    }
    if (!std::isfinite(ghi)) return std::nullopt;
  }
  if (ghi < target) {
    // Plateau: g stayed below target up to the cap.
    return std::nullopt;
  }
  auto h = [&](double s) { return g(s) - target; };
  std::uintmax_t iters = 200;
  const auto span = boost::math::tools::toms748_solve(
      h, lo, hi, boost::math::tools::eps_tolerance<double>(), iters);
  return 0.5 * (span.first + span.second);
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0) || !(hi > lo) || n < 2)
    throw Error(ErrorKind::parameter, "log_grid needs 0 < lo < hi, n >= 2");
  std::vector<double> g(n);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < n; ++i)
    g[i] = std::exp(llo + (lhi - llo) * i / (n - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<double> linear_grid(double lo, double hi, int n) {
  if (!(hi > lo) || n < 2)
    throw Error(ErrorKind::parameter, "linear_grid needs lo < hi, n >= 2");
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1);
  g.front() = lo;
  g.back() = hi;
  return g;
}

}  // namespace fharm::num
