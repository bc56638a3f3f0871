#include "fharm/stress_energy.hpp"

#include <cmath>
#include <limits>

#include "fharm/errors.hpp"
#include "fharm/numerics.hpp"

namespace fharm {

namespace {

struct Local {
  double f, dlogf, psi, dpsi, up, e, F, Fp, du2;
};

Local local_data(const RadialMap& map, double r) {
  Local d;
  d.f = map.factor().value(r);
  d.dlogf = map.factor().dlog_dr(r);
  d.psi = map.manifold().psi(r);
  d.dpsi = map.manifold().psi_prime(r);
  d.up = map.u_prime(r);
  d.du2 = d.up * d.up / (d.f * d.f);
  d.e = 0.5 * d.du2;
  d.F = map.profile().value(d.e);
  d.Fp = map.profile().deriv(d.e);
  return d;
}

}  // namespace

StressEnergySample stress_energy_sample(const RadialMap& map, double r) {
  const int m = map.manifold().dim();
  const Local d = local_data(map, r);
  StressEnergySample s;
  s.r = r;
  s.F_val = d.F;
  s.Fp_val = d.Fp;
  s.trace_term = m * d.F - d.Fp * d.du2;
  s.boundary_density = r * d.f * (d.F - d.Fp * d.du2);
  s.interior_density = r * d.dlogf * s.trace_term +
                       d.F * (1.0 + (m - 1) * r * d.dpsi / d.psi) -
                       d.Fp * d.du2;
  return s;
}

double boundary_flux(const RadialMap& map, double R) {
  if (!map.domain().contains(R))
    throw Error(ErrorKind::domain,
                "boundary flux radius outside the map domain");
  const int m = map.manifold().dim();
  const Local d = local_data(map, R);
  const double area_g = unit_sphere_area(m) * std::pow(d.psi, m - 1) *
                        std::pow(d.f, m - 1);
  return area_g * R * d.f * (d.F - d.Fp * d.du2);
}

double interior_integral(const RadialMap& map, double R0, double R) {
  if (!map.domain().contains(R0) || !map.domain().contains(R) || R0 > R)
    throw Error(ErrorKind::domain, "annulus outside the map domain");
  const int m = map.manifold().dim();
  auto integrand = [&map, m](double r) {
    const Local d = local_data(map, r);
    const double pairing = r * d.dlogf * (m * d.F - d.Fp * d.du2) +
                           d.F * (1.0 + (m - 1) * r * d.dpsi / d.psi) -
                           d.Fp * d.du2;
    return pairing * std::pow(d.f, m) * std::pow(d.psi, m - 1);
  };
  return unit_sphere_area(m) *
         num::integrate(integrand, R0, R, {1e-11, 1e-13});
}

double annulus_identity_residual(const RadialMap& map, double R0, double R) {
  const double lhs = boundary_flux(map, R) - boundary_flux(map, R0);
  const double rhs = interior_integral(map, R0, R);
  return std::abs(lhs - rhs) / (1.0 + std::abs(lhs));
}

TraceBoundsReport trace_bounds_check(const RadialMap& map,
                                     std::span<const double> r_grid) {
  const int m = map.manifold().dim();
  const Degrees deg = map.profile().degrees();
  TraceBoundsReport report;
  report.rows.reserve(r_grid.size());
  report.worst_lower_margin = std::numeric_limits<double>::infinity();
  report.worst_upper_margin = std::numeric_limits<double>::infinity();
  for (double r : r_grid) {
    const Local d = local_data(map, r);
    TraceBoundsRow row;
    row.r = r;
    row.trace = m * d.F - d.Fp * d.du2;
    row.lower = (m - 2.0 * deg.upper) * d.F;
    row.upper = (m - 2.0 * deg.lower) * d.F;
    const double tol = 1e-12 * (1.0 + std::abs(row.trace) + std::abs(d.F) * m);
    const bool pass = row.trace >= row.lower - tol && row.trace <= row.upper + tol;
    report.all_pass = report.all_pass && pass;
    if (row.trace - row.lower < report.worst_lower_margin) {
      report.worst_lower_margin = row.trace - row.lower;
      report.worst_r = r;
    }
    report.worst_upper_margin =
        std::min(report.worst_upper_margin, row.upper - row.trace);
    report.rows.push_back(row);
  }
  return report;
}

EigenIneqReport eigen_inequality_check(const RadialMap& map,
                                       std::span<const double> r_grid) {
  const int m = map.manifold().dim();
  const double dF = map.profile().degrees().upper;
  EigenIneqReport report;
  report.rows.reserve(r_grid.size());
  report.worst_margin = std::numeric_limits<double>::infinity();
  for (double r : r_grid) {
    const Local d = local_data(map, r);
    const auto eig = map.manifold().hessian_eigs(r);
    EigenIneqRow row;
    row.r = r;
    row.lhs = d.F * (2.0 + (m - 1) * eig.lambda_min) - 2.0 * d.Fp * d.du2;
    row.rhs = ((m - 1) * eig.lambda_min + 2.0 -
               2.0 * dF * std::max(2.0, eig.lambda_max)) *
              d.F;
    const double tol = 1e-12 * (1.0 + std::abs(row.lhs) + std::abs(row.rhs));
    report.all_pass = report.all_pass && row.lhs >= row.rhs - tol;
    if (row.lhs - row.rhs < report.worst_margin) {
      report.worst_margin = row.lhs - row.rhs;
      report.worst_r = r;
    }
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace fharm
