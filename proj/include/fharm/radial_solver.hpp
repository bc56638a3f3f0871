#pragma once

#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "fharm/f_profile.hpp"
#include "fharm/model_manifold.hpp"

namespace fharm {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double r) const { return r >= lo && r <= hi; }
};

/// Radial solution u(r) of the rescaled-metric problem, represented through
/// its conserved flux
///
///   F'(f^{-2} u'^2 / 2) u' f^{m-2} psi^{m-1} = Q.
///
/// u' is recovered pointwise by solving the flux equation for the radial
/// derivative; u is the integral of u' from the domain edge with
/// u(r_lo) = 0. Values are pure functions of r, so a map can be shared
/// freely across threads.
class RadialMap {
 public:
  double flux() const { return Q_; }
  Interval domain() const { return domain_; }
  bool is_constant() const { return Q_ == 0.0; }
  bool truncated_lo() const { return truncated_lo_; }
  const std::string& truncation_reason() const { return truncation_reason_; }

  double u(double r) const;
  double u_prime(double r) const;

  /// F applied to the energy density argument f^{-2} u'^2 / 2.
  double energy_density(double r) const;

  /// |phi(u'(r)) - Q| / |Q|, the pointwise flux-conservation residual.
  double flux_residual(double r) const;

  const FProfile& profile() const { return *profile_; }
  const ModelManifold& manifold() const { return *manifold_; }
  const ConformalFactor& factor() const { return *factor_; }

  /// Columns: r, u, u_prime, energy_density.
  void write_csv(std::ostream& out, std::span<const double> rs) const;

 private:
  friend RadialMap solve_flux(std::shared_ptr<const FProfile>,
                              std::shared_ptr<const ModelManifold>,
                              std::shared_ptr<const ConformalFactor>, double,
                              Interval);

  double solve_uprime(double r) const;

  std::shared_ptr<const FProfile> profile_;
  std::shared_ptr<const ModelManifold> manifold_;
  std::shared_ptr<const ConformalFactor> factor_;
  double Q_ = 0.0;
  Interval domain_{};
  bool truncated_lo_ = false;
  bool singular_lo_ = false;
  std::string truncation_reason_;
  std::vector<double> checkpoint_r_;  // cumulative integral anchors for u
  std::vector<double> checkpoint_u_;
};

/// Solves the flux equation on r_interval. The domain is truncated to the
/// largest contiguous block on which a root exists; an interval with no
/// solvable radius raises ErrorKind::empty_domain, and a flux equation that
/// is not strictly increasing in the derivative raises
/// ErrorKind::ambiguous_root listing the root brackets found.
RadialMap solve_flux(std::shared_ptr<const FProfile> profile,
                     std::shared_ptr<const ModelManifold> manifold,
                     std::shared_ptr<const ConformalFactor> factor, double Q,
                     Interval r_interval);

/// Convenience overload copying the inputs into shared state.
RadialMap solve_flux(const FProfile& profile, const ModelManifold& manifold,
                     const ConformalFactor& factor, double Q,
                     Interval r_interval);

enum class LimitStatus { finite, divergent, undetermined };

struct LimitResult {
  LimitStatus status = LimitStatus::undetermined;
  double value = 0.0;        // u(inf) when finite
  double tail = 0.0;         // contribution beyond the map's upper edge
  double tail_bound = 0.0;   // bound estimate when undetermined
  double decay_exponent = 0.0;  // fitted -d log u' / d log r at the edge
};

/// Limit of u at infinity, decided from the fitted decay rate of u' at the
/// upper edge plus direct quadrature of the tail where the manifold is
/// evaluable beyond the sampled range.
LimitResult limit_at_infinity(const RadialMap& map);

struct PoleWitness {
  double r;
  bool has_root;
  double u_prime;  // meaningful when has_root
};

struct PoleClassification {
  bool only_constant_smooth = true;
  std::vector<PoleWitness> witnesses;
  double blowup_exponent = 0.0;  // fitted u' ~ r^{-kappa} when roots exist
  std::string note;
};

/// Shows that a nonzero flux is incompatible with smoothness at the pole:
/// approaching r = 0 the flux equation either loses its root or forces
/// u' to blow up. Q = 0 gives the constant map.
PoleClassification smooth_pole_classification(const FProfile& profile,
                                              const ModelManifold& manifold,
                                              const ConformalFactor& factor,
                                              double Q = 1.0);

}  // namespace fharm
