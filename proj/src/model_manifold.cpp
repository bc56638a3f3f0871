#include "fharm/model_manifold.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>

#include "fharm/errors.hpp"
#include "fharm/numerics.hpp"

namespace fharm {

double unit_sphere_area(int m) {
  if (m < 1) throw Error(ErrorKind::parameter, "unit_sphere_area needs m >= 1");
  return 2.0 * std::pow(M_PI, 0.5 * m) / std::tgamma(0.5 * m);
}

// ---------------------------------------------------------------------------
// ConformalFactor

ConformalFactor ConformalFactor::one() {
  ConformalFactor f;
  f.name_ = "one";
  f.value_ = [](double) { return 1.0; };
  f.dlog_ = [](double) { return 0.0; };
  f.sign_ = FactorSign::nonneg;
  f.is_one_ = true;
  return f;
}

ConformalFactor ConformalFactor::from_expression(const std::string& src,
                                                 FactorSign sign) {
  auto e = expr::Expression::parse(src, "r");
  auto value = [e](double r) { return e(r); };
  auto dlog = [e](double r) {
    const auto d = e.eval2(r);
    return d.d1 / d.v;
  };
  return make("expr:" + src, value, dlog, sign);
}

ConformalFactor ConformalFactor::exp_expression(const std::string& g_src,
                                                FactorSign sign) {
  auto g = expr::Expression::parse(g_src, "r");
  ConformalFactor out;
  out.name_ = "exp_expr:" + g_src;
  out.value_ = [g](double r) { return std::exp(g(r)); };
  out.log_value_ = [g](double r) { return g(r); };
  out.dlog_ = [g](double r) { return g.eval2(r).d1; };
  out.sign_ = sign;
  for (double r : num::log_grid(1e-8, 1e6, 64)) {
    const double d = out.dlog_(r);
    const bool ok = sign == FactorSign::nonneg ? d >= -1e-12 : d <= 1e-12;
    if (!ok)
      throw Error(ErrorKind::parameter,
                  "conformal factor violates its declared sign class at r = " +
                      std::to_string(r));
  }
  return out;
}

ConformalFactor ConformalFactor::make(std::string name, Fn f, Fn dlog,
                                      FactorSign sign) {
  if (!f || !dlog)
    throw Error(ErrorKind::parameter, "conformal factor needs f and dlog f/dr");
  ConformalFactor out;
  out.name_ = std::move(name);
  out.value_ = std::move(f);
  out.dlog_ = std::move(dlog);
  out.sign_ = sign;

  for (double r : num::log_grid(1e-8, 1e6, 64)) {
    const double v = out.value_(r);
    if (!(v > 0.0) || !std::isfinite(v))
      throw Error(ErrorKind::parameter,
                  "conformal factor must be positive, violated at r = " +
                      std::to_string(r));
    const double d = out.dlog_(r);
    const bool ok = sign == FactorSign::nonneg ? d >= -1e-12 : d <= 1e-12;
    if (!ok)
      throw Error(ErrorKind::parameter,
                  "conformal factor violates its declared sign class at r = " +
                      std::to_string(r));
  }
  return out;
}

double ConformalFactor::value(double r) const { return value_(r); }

double ConformalFactor::log_value(double r) const {
  if (is_one_) return 0.0;
  if (log_value_) return log_value_(r);
  return std::log(value_(r));
}

double ConformalFactor::dlog_dr(double r) const { return dlog_(r); }

// ---------------------------------------------------------------------------
// ModelManifold: dense ODE interpolant for the pinched kind.
//
// Nodes carry (psi, psi') from an adaptive eighth-order integration of
// psi'' = -K psi; between nodes a two-point quintic Hermite in
// (psi, psi', psi'') reproduces the solution to O(h^6), which keeps
// psi'/psi accurate to ~1e-12 at the node spacing used here.

struct ModelManifold::OdeData {
  std::vector<double> r;     // nodes, r.front() == r_start
  std::vector<double> psi;
  std::vector<double> dpsi;
  std::function<double(double)> K;

  double d2(std::size_t i) const { return -K(r[i]) * psi[i]; }

  // Quintic Hermite value and derivative on [r_i, r_{i+1}].
  std::pair<double, double> eval(double x) const {
    const auto it = std::upper_bound(r.begin(), r.end(), x);
    std::size_t i = it == r.begin() ? 0 : static_cast<std::size_t>(it - r.begin()) - 1;
    if (i + 1 >= r.size()) i = r.size() - 2;
    const double h = r[i + 1] - r[i];
    const double t = (x - r[i]) / h;
    const double y0 = psi[i], m0 = dpsi[i] * h, c0 = d2(i) * h * h;
    const double y1 = psi[i + 1], m1 = dpsi[i + 1] * h, c1 = d2(i + 1) * h * h;
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    const double H0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
    const double H1 = t - 6 * t3 + 8 * t4 - 3 * t5;
    const double H2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
    const double H3 = 10 * t3 - 15 * t4 + 6 * t5;
    const double H4 = -4 * t3 + 7 * t4 - 3 * t5;
    const double H5 = 0.5 * t3 - t4 + 0.5 * t5;
    const double val = y0 * H0 + m0 * H1 + c0 * H2 + y1 * H3 + m1 * H4 + c1 * H5;
    const double dH0 = -30 * t2 + 60 * t3 - 30 * t4;
    const double dH1 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
    const double dH2 = t - 4.5 * t2 + 6 * t3 - 2.5 * t4;
    const double dH3 = 30 * t2 - 60 * t3 + 30 * t4;
    const double dH4 = -12 * t2 + 28 * t3 - 15 * t4;
    const double dH5 = 1.5 * t2 - 4 * t3 + 2.5 * t4;
    const double der =
        (y0 * dH0 + m0 * dH1 + c0 * dH2 + y1 * dH3 + m1 * dH4 + c1 * dH5) / h;
    return {val, der};
  }
};

namespace {

constexpr double kPoleEps = 1e-8;

void validate_dim(int m) {
  if (m < 3)
    throw Error(ErrorKind::parameter,
                "model manifold dimension must satisfy m >= 3, got " +
                    std::to_string(m));
}

void validate_rmax(double r_max) {
  if (!(r_max > kPoleEps))
    throw Error(ErrorKind::parameter, "r_max must exceed the pole neighborhood");
}

}  // namespace

ModelManifold ModelManifold::euclidean(int m, double r_max) {
  validate_dim(m);
  validate_rmax(r_max);
  ModelManifold g;
  g.m_ = m;
  g.kind_ = ManifoldKind::euclidean;
  g.label_ = "euclidean";
  g.r_max_ = r_max;
  return g;
}

ModelManifold ModelManifold::hyperbolic(int m, double alpha, double r_max) {
  validate_dim(m);
  validate_rmax(r_max);
  if (!(alpha > 0.0))
    throw Error(ErrorKind::parameter, "hyperbolic kind requires alpha > 0");
  ModelManifold g;
  g.m_ = m;
  g.kind_ = ManifoldKind::hyperbolic;
  g.label_ = "hyperbolic(alpha=" + std::to_string(alpha) + ")";
  g.r_max_ = r_max;
  g.alpha_ = alpha;
  return g;
}

ModelManifold ModelManifold::pinched(int m, Fn curvature, double r_max,
                                     std::string label) {
  validate_dim(m);
  validate_rmax(r_max);
  if (!curvature) throw Error(ErrorKind::parameter, "curvature profile missing");

  auto data = std::make_shared<OdeData>();
  data->K = curvature;

  const double r0 = kPoleEps;
  const int segments =
      std::clamp(static_cast<int>(std::ceil((r_max - r0) / 0.005)), 512, 400000);
  const double h = (r_max - r0) / segments;

  using State = std::array<double, 2>;
  auto rhs = [&curvature](const State& y, State& dydr, double r) {
    dydr[0] = y[1];
    dydr[1] = -curvature(r) * y[0];
  };

  namespace ode = boost::numeric::odeint;
  auto stepper = ode::make_controlled(1e-13, 1e-13,
                                      ode::runge_kutta_fehlberg78<State>());

  // Series start: psi ~ r - K(0) r^3 / 6 near the pole.
  State y{r0 - curvature(0.0) * r0 * r0 * r0 / 6.0,
          1.0 - curvature(0.0) * r0 * r0 / 2.0};

  data->r.reserve(segments + 1);
  data->psi.reserve(segments + 1);
  data->dpsi.reserve(segments + 1);
  data->r.push_back(r0);
  data->psi.push_back(y[0]);
  data->dpsi.push_back(y[1]);

  for (int k = 0; k < segments; ++k) {
    const double ra = r0 + k * h;
    const double rb = k + 1 == segments ? r_max : r0 + (k + 1) * h;
    try {
      ode::integrate_adaptive(stepper, rhs, y, ra, rb, h / 4.0);
    } catch (const std::exception& e) {
      throw Error(ErrorKind::numeric,
                  "warping-function integration failed near r = " +
                      std::to_string(ra) + ": " + e.what());
    }
    if (!std::isfinite(y[0]) || !std::isfinite(y[1]))
      throw Error(ErrorKind::numeric,
                  "warping-function integration blew up near r = " +
                      std::to_string(rb));
    data->r.push_back(rb);
    data->psi.push_back(y[0]);
    data->dpsi.push_back(y[1]);
    const bool mid_dip = y[1] < 0.0 && data->eval(0.5 * (ra + rb)).first <= 0.0;
    if (y[0] <= 0.0 || mid_dip) {
      // Conjugate point inside (ra, rb]; refine by bisection on the
      // interpolant for the error message.
      double lo = ra, hi = rb;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (data->eval(mid).first > 0.0 ? lo : hi) = mid;
      }
      throw Error(ErrorKind::no_pole,
                  "warping function vanishes near r = " + std::to_string(hi) +
                      "; no pole on the requested interval");
    }
  }

  ModelManifold g;
  g.m_ = m;
  g.kind_ = ManifoldKind::pinched;
  g.label_ = std::move(label);
  g.r_max_ = r_max;
  g.curvature_ = curvature;
  g.ode_ = std::move(data);
  return g;
}

ModelManifold ModelManifold::pinched_expression(int m, const std::string& K_src,
                                                double r_max) {
  auto e = expr::Expression::parse(K_src, "r");
  return pinched(m, [e](double r) { return e(r); }, r_max, "pinched:" + K_src);
}

ModelManifold ModelManifold::pinched_table(
    int m, std::vector<std::pair<double, double>> table, double r_max) {
  if (table.size() < 2)
    throw Error(ErrorKind::parameter, "curvature table needs >= 2 rows");
  std::sort(table.begin(), table.end());
  auto K = [table = std::move(table)](double r) {
    if (r <= table.front().first) return table.front().second;
    if (r >= table.back().first) return table.back().second;
    auto it = std::upper_bound(table.begin(), table.end(),
                               std::make_pair(r, -1e308));
    const auto [r1, k1] = *it;
    const auto [r0, k0] = *(it - 1);
    return k0 + (k1 - k0) * (r - r0) / (r1 - r0);
  };
  return pinched(m, K, r_max, "pinched:table");
}

ModelManifold ModelManifold::custom(int m, const std::string& psi_src,
                                    double r_max) {
  validate_dim(m);
  validate_rmax(r_max);
  auto e = expr::Expression::parse(psi_src, "r");
  const double probe = 1e-6;
  const auto near_pole = e.eval2(probe);
  if (std::abs(near_pole.v / probe - 1.0) > 1e-4 ||
      std::abs(near_pole.d1 - 1.0) > 1e-4)
    throw Error(ErrorKind::parameter,
                "custom warping function must satisfy psi(0)=0, psi'(0)=1");
  ModelManifold g;
  g.m_ = m;
  g.kind_ = ManifoldKind::custom;
  g.label_ = "custom:" + psi_src;
  g.r_max_ = r_max;
  g.psi_expr_ = std::move(e);
  for (double r : num::log_grid(kPoleEps, r_max, 128))
    if (!(g.psi(r) > 0.0))
      throw Error(ErrorKind::no_pole,
                  "custom warping function not positive at r = " +
                      std::to_string(r));
  return g;
}

void ModelManifold::check_working(double r) const {
  if (!(r >= 0.0) || (!analytic() && r > r_max_ * (1.0 + 1e-12)))
    throw Error(ErrorKind::domain,
                "radius " + std::to_string(r) +
                    " outside working interval [0, " + std::to_string(r_max_) +
                    "]");
}

double ModelManifold::psi(double r) const {
  check_working(r);
  switch (kind_) {
    case ManifoldKind::euclidean:
      return r;
    case ManifoldKind::hyperbolic:
      return std::sinh(alpha_ * r) / alpha_;
    case ManifoldKind::custom:
      return (*psi_expr_)(r);
    case ManifoldKind::pinched:
      if (r <= ode_->r.front()) return r;  // series region: psi ~ r
      return ode_->eval(r).first;
  }
  return r;
}

double ModelManifold::psi_prime(double r) const {
  check_working(r);
  switch (kind_) {
    case ManifoldKind::euclidean:
      return 1.0;
    case ManifoldKind::hyperbolic:
      return std::cosh(alpha_ * r);
    case ManifoldKind::custom:
      return psi_expr_->eval2(r).d1;
    case ManifoldKind::pinched:
      if (r <= ode_->r.front()) return 1.0;
      return ode_->eval(r).second;
  }
  return 1.0;
}

double ModelManifold::log_psi(double r) const {
  check_working(r);
  if (kind_ == ManifoldKind::hyperbolic) {
    // log(sinh(a r)/a), stable for large arguments.
    const double x = alpha_ * r;
    if (x > 1e-3)
      return x + std::log1p(-std::exp(-2.0 * x)) - std::log(2.0 * alpha_);
  }
  return std::log(psi(r));
}

double ModelManifold::radial_curvature(double r) const {
  check_working(r);
  if (!(r > 0.0))
    throw Error(ErrorKind::domain, "radial curvature needs r > 0");
  switch (kind_) {
    case ManifoldKind::euclidean:
      return 0.0;
    case ManifoldKind::hyperbolic:
      return -alpha_ * alpha_;
    case ManifoldKind::pinched:
      return curvature_(r);
    case ManifoldKind::custom: {
      const auto d = psi_expr_->eval2(r);
      return -d.d2 / d.v;
    }
  }
  return 0.0;
}

HessianData ModelManifold::hessian_eigs(double r) const {
  if (!(r > 0.0))
    throw Error(ErrorKind::domain,
                "Hessian eigenvalues are singular at the pole; use "
                "hessian_pole_limit() for the r -> 0 limit");
  check_working(r);
  double v;
  if (kind_ == ManifoldKind::hyperbolic) {
    // 2 r coth(alpha r) * alpha, stable for large arguments.
    const double x = alpha_ * r;
    const double coth = x > 350.0 ? 1.0 : std::cosh(x) / std::sinh(x);
    v = 2.0 * alpha_ * r * coth;
  } else {
    v = 2.0 * r * psi_prime(r) / psi(r);
  }
  return {v, v};
}

// ---------------------------------------------------------------------------
// Hessian comparison

namespace {

struct Envelopes {
  std::function<double(double)> lower, upper;     // bounds on psi'/psi
  std::function<double(double)> K_lo, K_hi;       // admissible curvature band
};

Envelopes case_envelopes(CurvatureCase c, const CurvatureCaseParams& p) {
  switch (c) {
    case CurvatureCase::two_sided_negative: {
      if (!(p.alpha > 0.0) || !(p.beta > 0.0) || p.beta > p.alpha)
        throw Error(ErrorKind::parameter,
                    "two_sided_negative needs alpha >= beta > 0");
      const double a = p.alpha, b = p.beta;
      return {[b](double r) { return b / std::tanh(b * r); },
              [a](double r) { return a / std::tanh(a * r); },
              [a](double) { return -a * a; },
              [b](double) { return -b * b; }};
    }
    case CurvatureCase::polynomial_decay: {
      if (!(p.epsilon > 0.0) || p.A < 0.0 || p.B < 0.0 || p.B >= 2.0 * p.epsilon)
        throw Error(ErrorKind::parameter,
                    "polynomial_decay needs eps > 0, A >= 0, 0 <= B < 2 eps");
      const double lo_c = 1.0 - p.B / (2.0 * p.epsilon);
      const double hi_c = std::exp(p.A / (2.0 * p.epsilon));
      const double A = p.A, B = p.B, eps = p.epsilon;
      return {[lo_c](double r) { return lo_c / r; },
              [hi_c](double r) { return hi_c / r; },
              [A, eps](double r) { return -A / std::pow(1.0 + r * r, 1.0 + eps); },
              [B, eps](double r) { return B / std::pow(1.0 + r * r, 1.0 + eps); }};
    }
    case CurvatureCase::inverse_square: {
      if (p.a < 0.0 || p.b * p.b > 0.25 + 1e-15)
        throw Error(ErrorKind::parameter,
                    "inverse_square needs a >= 0 and b^2 in [0, 1/4]");
      const double lo_c = 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - 4.0 * p.b * p.b)));
      const double hi_c = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * p.a * p.a));
      const double a = p.a, b = p.b;
      return {[lo_c](double r) { return lo_c / r; },
              [hi_c](double r) { return hi_c / r; },
              [a](double r) { return -a * a / (1.0 + r * r); },
              [b](double r) { return b * b / (1.0 + r * r); }};
    }
  }
  throw Error(ErrorKind::parameter, "unknown curvature case");
}

}  // namespace

HessianComparisonReport check_hessian_comparison(const ModelManifold& manifold,
                                                 CurvatureCase c,
                                                 const CurvatureCaseParams& p,
                                                 std::span<const double> r_grid) {
  const auto env = case_envelopes(c, p);

  // Certify the declared pinching before trusting the envelopes.
  for (double r : r_grid) {
    const double K = manifold.radial_curvature(r);
    const double slack = 1e-9 * (1.0 + std::abs(K));
    if (K < env.K_lo(r) - slack || K > env.K_hi(r) + slack)
      throw Error(ErrorKind::precondition,
                  "radial curvature leaves the declared pinching band at r = " +
                      std::to_string(r) + " (K = " + std::to_string(K) + ")");
  }

  HessianComparisonReport report;
  report.rows.reserve(r_grid.size());
  report.worst_margin = std::numeric_limits<double>::infinity();
  for (double r : r_grid) {
    const double v = manifold.psi_prime(r) / manifold.psi(r);
    const double lo = env.lower(r), hi = env.upper(r);
    const double tol = 1e-11 * (std::abs(lo) + std::abs(hi)) + 1e-13;
    const bool pass = v >= lo - tol && v <= hi + tol;
    const double margin = std::min(v - lo, hi - v);
    if (margin < report.worst_margin) {
      report.worst_margin = margin;
      report.worst_r = r;
    }
    report.all_pass = report.all_pass && pass;
    report.rows.push_back({r, lo, v, hi, pass});
  }
  return report;
}

double log_boundary_area(const ModelManifold& manifold,
                         const ConformalFactor& f, double R) {
  if (!(R > 0.0)) throw Error(ErrorKind::domain, "boundary area needs R > 0");
  const int m = manifold.dim();
  return std::log(unit_sphere_area(m)) + (m - 1) * manifold.log_psi(R) +
         (m - 2) * f.log_value(R);
}

double boundary_area(const ModelManifold& manifold, const ConformalFactor& f,
                     double R) {
  if (!(R > 0.0)) throw Error(ErrorKind::domain, "boundary area needs R > 0");
  const int m = manifold.dim();
  return unit_sphere_area(m) * std::pow(manifold.psi(R), m - 1) *
         std::pow(f.value(R), m - 2);
}

}  // namespace fharm
