#include "fharm/radial_solver.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "fharm/errors.hpp"
#include "fharm/numerics.hpp"

namespace fharm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// The flux equation is solved in the scale-free form
//   phi0(s) := F'(s^2 / (2 f^2)) s = q,   q = Q / (f^{m-2} psi^{m-1}),
// with the geometric weight applied through logarithms so that manifolds
// with exponential area growth stay evaluable.
struct FluxEq {
  const FProfile* profile;
  const ModelManifold* manifold;
  const ConformalFactor* factor;
  int m;

  double log_weight(double r) const {
    return (m - 2) * factor->log_value(r) + (m - 1) * manifold->log_psi(r);
  }

  double phi0(double r, double s) const {
    const double f = factor->value(r);
    const double t = s * s / (2.0 * f * f);
    return profile->deriv(t) * s;
  }

  double dphi0_ds(double r, double s) const {
    const double f = factor->value(r);
    const double t = s * s / (2.0 * f * f);
    return profile->deriv2(t) * s * s / (f * f) + profile->deriv(t);
  }

  // Reduced target; 0 signals an unresolvable (vanishing) right-hand side,
  // which only happens when the weight overflowed, i.e. u' -> 0.
  double reduced_target(double r, double Q) const {
    return std::abs(Q) * std::exp(-log_weight(r));
  }
};

void check_monotone(const FluxEq& eq, double r, double root, double Q) {
  // F'' pathologies would make phi0 non-monotone; sample the slope along
  // the bracket and refuse silently ambiguous configurations.
  bool ok = true;
  double bad_s = 0.0;
  for (double s : num::log_grid(std::max(root * 1e-6, 1e-300), root, 16)) {
    if (eq.dphi0_ds(r, s) < 0.0) {
      ok = false;
      bad_s = s;
      break;
    }
  }
  if (ok) return;
  // Report every bracket of phi0(s) = q found by a dense scan.
  const double q = eq.reduced_target(r, Q);
  std::string brackets;
  double prev_s = root * 1e-6;
  double prev = eq.phi0(r, prev_s) - q;
  for (double s : num::log_grid(root * 1e-6, root * 1e6, 1024)) {
    const double cur = eq.phi0(r, s) - q;
    if (std::isfinite(cur) && prev * cur < 0.0)
      brackets += " [" + std::to_string(prev_s) + ", " + std::to_string(s) + "]";
    prev = cur;
    prev_s = s;
  }
  throw Error(ErrorKind::ambiguous_root,
              "flux equation not increasing in the derivative (slope < 0 at s = " +
                  std::to_string(bad_s) + ", r = " + std::to_string(r) +
                  "); root brackets:" + brackets);
}

// Root of phi0(r, s) = q for q > 0, or nullopt when phi0 plateaus below q.
std::optional<double> solve_reduced(const FluxEq& eq, double r, double q) {
  if (q == 0.0) return 0.0;
  auto g = [&](double s) { return eq.phi0(r, s); };
  return num::root_of_increasing(g, q, 1e120);
}

}  // namespace

RadialMap solve_flux(std::shared_ptr<const FProfile> profile,
                     std::shared_ptr<const ModelManifold> manifold,
                     std::shared_ptr<const ConformalFactor> factor, double Q,
                     Interval r_interval) {
  if (!profile || !manifold || !factor)
    throw Error(ErrorKind::parameter, "solve_flux needs profile/manifold/factor");
  if (!std::isfinite(Q))
    throw Error(ErrorKind::parameter, "flux constant must be finite");
  if (!(r_interval.lo >= 0.0) || !(r_interval.hi > r_interval.lo))
    throw Error(ErrorKind::parameter, "invalid solve interval");
  if (r_interval.hi > manifold->r_max() * (1.0 + 1e-12))
    throw Error(ErrorKind::domain,
                "solve interval exceeds the manifold working interval");

  RadialMap map;
  map.profile_ = std::move(profile);
  map.manifold_ = std::move(manifold);
  map.factor_ = std::move(factor);
  map.Q_ = Q;

  const double lo = std::max(r_interval.lo, map.manifold_->r_min());
  const double hi = r_interval.hi;

  if (Q == 0.0) {
    map.domain_ = {lo, hi};
    return map;
  }

  FluxEq eq{map.profile_.get(), map.manifold_.get(), map.factor_.get(),
            map.manifold_->dim()};

  auto solvable = [&](double r) {
    return solve_reduced(eq, r, eq.reduced_target(r, Q)).has_value();
  };

  // Scan for the largest contiguous solvable block, then refine its edges.
  const auto probes = num::log_grid(lo, hi, 256);
  std::vector<char> ok(probes.size());
  std::size_t n_ok = 0;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    ok[i] = solvable(probes[i]) ? 1 : 0;
    n_ok += ok[i];
  }
  if (n_ok == 0)
    throw Error(ErrorKind::empty_domain,
                "flux equation has no solution anywhere on [" +
                    std::to_string(lo) + ", " + std::to_string(hi) +
                    "] for Q = " + std::to_string(Q));

  std::size_t best_begin = 0, best_len = 0;
  for (std::size_t i = 0; i < probes.size();) {
    if (!ok[i]) { ++i; continue; }
    std::size_t j = i;
    while (j < probes.size() && ok[j]) ++j;
    if (j - i > best_len) { best_len = j - i; best_begin = i; }
    i = j;
  }
  double dom_lo = probes[best_begin];
  double dom_hi = probes[best_begin + best_len - 1];

  if (best_begin > 0 && !ok[best_begin - 1]) {
    double bad = probes[best_begin - 1], good = dom_lo;
    for (int it = 0; it < 100 && (good - bad) > 1e-13 * (1.0 + good); ++it) {
      const double mid = 0.5 * (bad + good);
      (solvable(mid) ? good : bad) = mid;
    }
    dom_lo = good;
    map.truncated_lo_ = true;
    map.singular_lo_ = true;
    map.truncation_reason_ =
        "flux equation unsolvable below r = " + std::to_string(dom_lo) +
        " (geometric weight stays under |Q|)";
  } else {
    dom_lo = lo;
  }
  if (best_begin + best_len < probes.size()) {
    double good = dom_hi, bad = probes[best_begin + best_len];
    for (int it = 0; it < 100 && (bad - good) > 1e-13 * (1.0 + good); ++it) {
      const double mid = 0.5 * (bad + good);
      (solvable(mid) ? good : bad) = mid;
    }
    dom_hi = good;
    map.truncation_reason_ +=
        std::string(map.truncation_reason_.empty() ? "" : "; ") +
        "flux equation unsolvable above r = " + std::to_string(dom_hi);
  } else {
    dom_hi = hi;
  }
  map.domain_ = {dom_lo, dom_hi};

  // Monotonicity guard at a representative radius.
  const double r_mid = std::sqrt(dom_lo * dom_hi);
  if (auto root = solve_reduced(eq, r_mid, eq.reduced_target(r_mid, Q)); root && *root > 0.0)
    check_monotone(eq, r_mid, *root, Q);

  // Cumulative checkpoints for u. The first panel may carry an integrable
  // inverse-square-root singularity when the domain was truncated.
  const int n_cp = 256;
  map.checkpoint_r_ = num::log_grid(dom_lo, dom_hi, n_cp);
  map.checkpoint_u_.assign(n_cp, 0.0);
  auto uprime = [&map](double r) { return map.u_prime(r); };
  for (int i = 1; i < n_cp; ++i) {
    const double a = map.checkpoint_r_[i - 1], b = map.checkpoint_r_[i];
    double seg;
    if (i == 1 && map.singular_lo_)
      seg = num::integrate_sqrt_lower(uprime, a, b, {1e-13, 1e-13});
    else
      seg = num::integrate(uprime, a, b, {1e-13, 1e-13});
    map.checkpoint_u_[i] = map.checkpoint_u_[i - 1] + seg;
  }
  return map;
}

RadialMap solve_flux(const FProfile& profile, const ModelManifold& manifold,
                     const ConformalFactor& factor, double Q,
                     Interval r_interval) {
  return solve_flux(std::make_shared<FProfile>(profile),
                    std::make_shared<ModelManifold>(manifold),
                    std::make_shared<ConformalFactor>(factor), Q, r_interval);
}

double RadialMap::solve_uprime(double r) const {
  FluxEq eq{profile_.get(), manifold_.get(), factor_.get(), manifold_->dim()};
  const double q = eq.reduced_target(r, Q_);
  const auto root = solve_reduced(eq, r, q);
  if (!root)
    throw Error(ErrorKind::domain,
                "flux equation unsolvable at r = " + std::to_string(r));
  return Q_ >= 0.0 ? *root : -*root;
}

double RadialMap::u_prime(double r) const {
  if (Q_ == 0.0) return 0.0;
  if (r < domain_.lo * (1.0 - 1e-12) || r > domain_.hi * (1.0 + 1e-12)) {
    if (manifold_->analytic() && r > domain_.hi) {
      // The flux equation extends past the sampled range on closed-form
      // manifolds; used by the tail quadrature in limit_at_infinity.
    } else {
      throw Error(ErrorKind::domain,
                  "r = " + std::to_string(r) + " outside map domain [" +
                      std::to_string(domain_.lo) + ", " +
                      std::to_string(domain_.hi) + "]");
    }
  }
  return solve_uprime(std::max(r, domain_.lo));
}

double RadialMap::u(double r) const {
  if (Q_ == 0.0) return 0.0;
  if (!domain_.contains(r) &&
      !(r >= domain_.lo && r <= domain_.hi * (1.0 + 1e-12)))
    throw Error(ErrorKind::domain,
                "r = " + std::to_string(r) + " outside map domain");
  const auto it = std::upper_bound(checkpoint_r_.begin(), checkpoint_r_.end(), r);
  std::size_t i = it == checkpoint_r_.begin()
                      ? 0
                      : static_cast<std::size_t>(it - checkpoint_r_.begin()) - 1;
  const double a = checkpoint_r_[i];
  auto uprime = [this](double x) { return u_prime(x); };
  double seg;
  if (i == 0 && singular_lo_)
    seg = num::integrate_sqrt_lower(uprime, a, r, {1e-13, 1e-13});
  else
    seg = num::integrate(uprime, a, r, {1e-13, 1e-13});
  return checkpoint_u_[i] + seg;
}

double RadialMap::energy_density(double r) const {
  const double f = factor_->value(r);
  const double up = u_prime(r);
  return profile_->value(up * up / (2.0 * f * f));
}

double RadialMap::flux_residual(double r) const {
  if (Q_ == 0.0) return 0.0;
  FluxEq eq{profile_.get(), manifold_.get(), factor_.get(), manifold_->dim()};
  const double q = eq.reduced_target(r, Q_);
  if (q == 0.0) return 0.0;
  return std::abs(eq.phi0(r, std::abs(u_prime(r))) - q) / q;
}

void RadialMap::write_csv(std::ostream& out, std::span<const double> rs) const {
  auto field = [&out](double v) {
    char buf[40];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    out.write(buf, p - buf);
  };
  out << "r,u,u_prime,energy_density\n";
  for (double r : rs) {
    field(r);
    out.put(',');
    field(u(r));
    out.put(',');
    field(u_prime(r));
    out.put(',');
    field(energy_density(r));
    out.put('\n');
  }
}

LimitResult limit_at_infinity(const RadialMap& map) {
  LimitResult res;
  if (map.is_constant()) {
    res.status = LimitStatus::finite;
    res.value = 0.0;
    res.decay_exponent = kInf;
    return res;
  }
  const double r_hi = map.domain().hi;

  // Fitted decay exponent of |u'| near the upper edge.
  std::vector<double> lx, ly;
  for (double r : num::log_grid(0.5 * r_hi, r_hi, 16)) {
    lx.push_back(std::log(r));
    ly.push_back(std::log(std::abs(map.u_prime(r))));
  }
  const auto fit = num::fit_line(lx, ly);
  res.decay_exponent = -fit.slope;

  const double u_edge = map.u(r_hi);
  if (res.decay_exponent > 1.05) {
    if (map.manifold().analytic()) {
      res.tail = num::integrate_to_inf([&map](double r) { return map.u_prime(r); },
                                       r_hi, 1e-12);
      res.value = u_edge + res.tail;
      res.status = LimitStatus::finite;
    } else {
      // Only certified to r_max; bound the remainder by the fitted power.
      res.tail_bound = std::abs(map.u_prime(r_hi)) * r_hi /
                       (res.decay_exponent - 1.0);
      res.value = u_edge;
      res.status =
          res.tail_bound < 1e-8 * (1.0 + std::abs(u_edge)) ? LimitStatus::finite
                                                           : LimitStatus::undetermined;
    }
  } else if (res.decay_exponent < 0.95) {
    res.status = LimitStatus::divergent;
  } else {
    res.status = LimitStatus::undetermined;
    res.tail_bound = std::abs(map.u_prime(r_hi)) * r_hi;
  }
  return res;
}

PoleClassification smooth_pole_classification(const FProfile& profile,
                                              const ModelManifold& manifold,
                                              const ConformalFactor& factor,
                                              double Q) {
  PoleClassification out;
  if (Q == 0.0) {
    out.note = "zero flux: the constant map, smooth at the pole";
    return out;
  }
  FluxEq eq{&profile, &manifold, &factor, manifold.dim()};
  std::vector<double> lx, ly;
  for (double r : {1e-2, 3e-3, 1e-3, 3e-4, 1e-4, 1e-5, 1e-6}) {
    const double q = eq.reduced_target(r, Q);
    const auto root = solve_reduced(eq, r, q);
    PoleWitness w{r, root.has_value(), root ? *root : 0.0};
    out.witnesses.push_back(w);
    if (root) {
      lx.push_back(std::log(r));
      ly.push_back(std::log(*root));
    }
  }
  const std::size_t roots = lx.size();
  if (roots == 0) {
    out.note = "no solution of the flux equation near the pole: the domain "
               "of any nonzero-flux solution excludes it";
  } else {
    if (roots >= 2) out.blowup_exponent = -num::fit_line(lx, ly).slope;
    out.note = "derivative grows like r^(-" + std::to_string(out.blowup_exponent) +
               ") toward the pole: nonzero flux is incompatible with smoothness";
  }
  return out;
}

}  // namespace fharm
