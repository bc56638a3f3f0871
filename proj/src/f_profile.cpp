#include "fharm/f_profile.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "fharm/errors.hpp"
#include "fharm/numerics.hpp"

namespace fharm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_nonnegative(double t) {
  if (!(t >= 0.0))
    throw Error(ErrorKind::domain,
                "profile argument must satisfy t >= 0, got " + std::to_string(t));
}

}  // namespace

FProfile FProfile::harmonic() {
  FProfile f;
  f.name_ = "harmonic";
  f.value_ = [](double t) { return 2.0 * t; };
  f.deriv_ = [](double) { return 2.0; };
  f.deriv2_ = [](double) { return 0.0; };
  f.degrees_ = {1.0, 1.0};
  f.degrees_exact_ = true;
  f.limits_ = {1.0, 1.0};
  f.unique_continuation_ = true;
  return f;
}

FProfile FProfile::p_harmonic(double p) {
  if (!(p > 1.0))
    throw Error(ErrorKind::parameter,
                "p_harmonic requires p > 1, got " + std::to_string(p));
  FProfile f;
  f.name_ = "p_harmonic(p=" + std::to_string(p) + ")";
  f.value_ = [p](double t) { return std::pow(2.0 * t, p / 2.0) / p; };
  f.deriv_ = [p](double t) { return std::pow(2.0 * t, p / 2.0 - 1.0); };
  f.deriv2_ = [p](double t) {
    return (p - 2.0) * std::pow(2.0 * t, p / 2.0 - 2.0);
  };
  f.degrees_ = {p / 2.0, p / 2.0};
  f.degrees_exact_ = true;
  f.limits_ = {p / 2.0, p / 2.0};
  return f;
}

FProfile FProfile::minimal_graph() {
  FProfile f;
  f.name_ = "minimal_graph";
  // 2t / (sqrt(1+2t) + 1) == sqrt(1+2t) - 1 without cancellation near 0.
  f.value_ = [](double t) { return 2.0 * t / (std::sqrt(1.0 + 2.0 * t) + 1.0); };
  f.deriv_ = [](double t) { return 1.0 / std::sqrt(1.0 + 2.0 * t); };
  f.deriv2_ = [](double t) { return -std::pow(1.0 + 2.0 * t, -1.5); };
  f.degrees_ = {1.0, 0.5};
  f.degrees_exact_ = true;
  f.limits_ = {1.0, 0.5};
  f.unique_continuation_ = true;
  return f;
}

FProfile FProfile::alpha_harmonic(double a) {
  if (!(a > 1.0))
    throw Error(ErrorKind::parameter,
                "alpha_harmonic requires alpha > 1, got " + std::to_string(a));
  FProfile f;
  f.name_ = "alpha_harmonic(alpha=" + std::to_string(a) + ")";
  // Stored with the constant removed so that F(0) = 0; the shift changes
  // neither F' nor the criticality of the energy.
  f.value_ = [a](double t) { return std::expm1(a * std::log1p(2.0 * t)); };
  f.deriv_ = [a](double t) { return 2.0 * a * std::pow(1.0 + 2.0 * t, a - 1.0); };
  f.deriv2_ = [a](double t) {
    return 4.0 * a * (a - 1.0) * std::pow(1.0 + 2.0 * t, a - 2.0);
  };
  f.degrees_ = {a, 1.0};
  f.degrees_exact_ = true;
  f.limits_ = {1.0, a};
  return f;
}

FProfile FProfile::exponential() {
  FProfile f;
  f.name_ = "exponential";
  // Normalized to vanish at 0, matching the standing F(0) = 0 assumption.
  f.value_ = [](double t) { return std::expm1(2.0 * t); };
  f.deriv_ = [](double t) { return 2.0 * std::exp(2.0 * t); };
  f.deriv2_ = [](double t) { return 4.0 * std::exp(2.0 * t); };
  f.degrees_ = {kInf, 1.0};
  f.degrees_exact_ = true;
  f.limits_ = {1.0, kInf};
  return f;
}

FProfile FProfile::custom(CustomSpec spec) {
  if (!spec.value || !spec.deriv)
    throw Error(ErrorKind::parameter, "custom profile needs F and F'");
  FProfile f;
  f.name_ = std::move(spec.name);
  f.value_ = std::move(spec.value);
  f.deriv_ = std::move(spec.deriv);
  if (spec.deriv2) {
    f.deriv2_ = std::move(spec.deriv2);
  } else {
    auto d = f.deriv_;
    f.deriv2_ = [d](double t) {
      const double h = 1e-6 * (1.0 + t);
      const double lo = t > h ? t - h : 0.0;
      return (d(t + h) - d(lo)) / (t + h - lo);
    };
  }
  f.limits_ = spec.limits;
  f.unique_continuation_ = spec.unique_continuation;

  if (std::abs(f.value_(0.0)) > 1e-12)
    throw Error(ErrorKind::parameter, "custom profile must have F(0) = 0");
  for (double t : {1e-6, 1e-3, 1.0, 1e3, 1e6})
    if (!(f.deriv_(t) > 0.0))
      throw Error(ErrorKind::parameter,
                  "custom profile must have F' > 0, violated at t = " +
                      std::to_string(t));

  const auto grid = default_degree_grid();
  f.degrees_ = estimate_degrees(f, grid);
  f.degrees_exact_ = false;
  return f;
}

FProfile FProfile::make_builtin(const std::string& name,
                                std::span<const double> params) {
  auto want = [&](std::size_t n) {
    if (params.size() != n)
      throw Error(ErrorKind::parameter,
                  "profile '" + name + "' expects " + std::to_string(n) +
                      " parameter(s), got " + std::to_string(params.size()));
  };
  if (name == "harmonic") { want(0); return harmonic(); }
  if (name == "p_harmonic") { want(1); return p_harmonic(params[0]); }
  if (name == "minimal_graph") { want(0); return minimal_graph(); }
  if (name == "alpha_harmonic") { want(1); return alpha_harmonic(params[0]); }
  if (name == "exponential") { want(0); return exponential(); }
  throw Error(ErrorKind::parameter, "unknown profile '" + name + "'");
}

double FProfile::value(double t) const {
  check_nonnegative(t);
  return value_(t);
}

double FProfile::deriv(double t) const {
  check_nonnegative(t);
  return deriv_(t);
}

double FProfile::deriv2(double t) const {
  check_nonnegative(t);
  return deriv2_(t);
}

std::pair<double, double> FProfile::evaluate(double t) const {
  check_nonnegative(t);
  return {value_(t), deriv_(t)};
}

double FProfile::degree_ratio(double t) const {
  check_nonnegative(t);
  if (t == 0.0) {
    if (limits_.at_zero) return *limits_.at_zero;
    t = 1e-12;
  }
  const double F = value_(t);
  if (!(F > 0.0))
    throw Error(ErrorKind::numeric,
                "degree ratio undefined: F(t) <= 0 at t = " + std::to_string(t));
  return t * deriv_(t) / F;
}

std::vector<double> default_degree_grid() {
  return num::log_grid(1e-6, 1e6, 512);
}

namespace {

// One-sided extrapolation of the ratio along a geometric sequence; used for
// custom profiles that do not declare analytic endpoints.
double extrapolate_ratio(const FProfile& p, double start, double factor) {
  double t = start;
  double prev = p.degree_ratio(t);
  for (int i = 0; i < 24; ++i) {
    t *= factor;
    if (!(t > 0.0) || !std::isfinite(t)) break;
    double cur;
    try {
      cur = p.degree_ratio(t);
    } catch (const Error&) {
      break;
    }
    if (!std::isfinite(cur)) return cur > 0 ? kInf : prev;
    if (std::abs(cur - prev) <= 1e-10 * (1.0 + std::abs(cur))) return cur;
    prev = cur;
  }
  return prev;
}

}  // namespace

Degrees estimate_degrees(const FProfile& profile, std::span<const double> grid) {
  if (grid.size() < 64)
    throw Error(ErrorKind::config,
                "degree estimation grid too small: " +
                    std::to_string(grid.size()) + " < 64 points");
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    if (!(grid[i] > 0.0) || !(grid[i] < grid[i + 1]))
      throw Error(ErrorKind::config,
                  "degree grid must be strictly increasing and positive");
  if (std::log10(grid.back() / grid.front()) < 8.0 - 1e-9)
    throw Error(ErrorKind::config,
                "degree grid must span at least 8 decades");

  double sup = -kInf, inf = kInf;
  for (double t : grid) {
    const double r = profile.degree_ratio(t);
    sup = std::max(sup, r);
    inf = std::min(inf, r);
  }
  const auto& lim = profile.ratio_limits();
  const double at0 = lim.at_zero ? *lim.at_zero
                                 : extrapolate_ratio(profile, grid.front(), 0.25);
  const double atinf = lim.at_infinity
                           ? *lim.at_infinity
                           : extrapolate_ratio(profile, grid.back(), 4.0);
  sup = std::max({sup, at0, atinf});
  inf = std::min({inf, at0, atinf});
  return {sup, inf};
}

bool degree_gate(const FProfile& profile, int m) {
  if (m < 1) throw Error(ErrorKind::parameter, "degree_gate requires m >= 1");
  const double d = profile.degrees().upper;
  if (!std::isfinite(d)) return false;
  return static_cast<double>(m) > std::max(2.0, 2.0 * d);
}

}  // namespace fharm
