#pragma once

#include <span>
#include <vector>

#include "fharm/radial_solver.hpp"

namespace fharm {

// Radial reductions of the stress-energy tensor
//
//   S = F(|du|^2/2) g - F'(|du|^2/2) du (x) du
//
// paired with the position field X = r d/dr on (M, g = f^2 g0). For a
// radial scalar map, with e := f^{-2} u'^2 / 2 and A = unit_sphere_area(m):
//
//   trace          <S, g>              = m F(e) - F'(e) f^{-2} u'^2
//   boundary term  S(X, nu) density    = r f [ F(e) - F'(e) f^{-2} u'^2 ]
//                  (per unit g-area of the sphere; total g-area is
//                   A psi^{m-1} f^{m-1})
//   interior term  <S, (1/2) L_X g>    = r (dlog f/dr)(m F - F' f^{-2} u'^2)
//                                        + F (1 + (m-1) r psi'/psi)
//                                        - F' f^{-2} u'^2
//
// The interior term uses the eigenvalues of Hess(r^2): 2 on d/dr and
// 2 r psi'/psi on sphere directions, with du vanishing on the sphere
// directions. Differentiating the total boundary flux in R reproduces
// the interior density times the volume weight f^m psi^{m-1}, which is
// the divergence identity these functions audit.

struct StressEnergySample {
  double r;
  double F_val;              // F(e)
  double Fp_val;             // F'(e)
  double trace_term;         // m F - F' |du|^2
  double boundary_density;   // S(X, nu) per unit g-area
  double interior_density;   // <S, (1/2) L_X g>
};

StressEnergySample stress_energy_sample(const RadialMap& map, double r);

/// Total boundary term over the g-sphere of radius R:
/// A R psi^{m-1} f^m [ F - F' f^{-2} u'^2 ].
double boundary_flux(const RadialMap& map, double R);

/// Interior pairing integrated over the annulus [R0, R] with the g-volume
/// weight, by adaptive quadrature at 1e-11 absolute tolerance.
double interior_integral(const RadialMap& map, double R0, double R);

/// |(flux(R) - flux(R0)) - interior| / (1 + |flux(R) - flux(R0)|).
double annulus_identity_residual(const RadialMap& map, double R0, double R);

struct TraceBoundsRow {
  double r;
  double lower;   // (m - 2 d_F) F
  double trace;   // m F - F' |du|^2
  double upper;   // (m - 2 l_F) F
};

struct TraceBoundsReport {
  std::vector<TraceBoundsRow> rows;
  bool all_pass = true;
  double worst_lower_margin = 0.0;  // min(trace - lower)
  double worst_upper_margin = 0.0;  // min(upper - trace)
  double worst_r = 0.0;
};

/// Per-point check of (m - 2 l_F) F >= m F - F' |du|^2 >= (m - 2 d_F) F.
/// Violations are report content, not errors.
TraceBoundsReport trace_bounds_check(const RadialMap& map,
                                     std::span<const double> r_grid);

struct EigenIneqRow {
  double r;
  double lhs;   // f^2 <S, Hess(r^2)> = F (2 + 2(m-1) r psi'/psi) - 2 F' |du|^2
  double rhs;   // [(m-1) lambda_min + 2 - 2 d_F max(2, lambda_max)] F
};

struct EigenIneqReport {
  std::vector<EigenIneqRow> rows;
  bool all_pass = true;
  double worst_margin = 0.0;  // min(lhs - rhs)
  double worst_r = 0.0;
};

/// Per-point check of the Hessian-pairing lower bound driven by the upper
/// degree.
EigenIneqReport eigen_inequality_check(const RadialMap& map,
                                       std::span<const double> r_grid);

}  // namespace fharm
