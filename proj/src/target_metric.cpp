#include "fharm/target_metric.hpp"

#include <cmath>

#include "fharm/errors.hpp"

namespace fharm {

TargetMetric::TargetMetric(int n, double k1, double k, std::string name)
    : n_(n), k1_(k1), k_(k), name_(std::move(name)) {
  if (n < 1) throw Error(ErrorKind::parameter, "target dimension must be >= 1");
  if (!(k1 > 0.0)) throw Error(ErrorKind::parameter, "power family needs k1 > 0");
}

TargetMetric TargetMetric::flat(int n) { return TargetMetric(n, 1.0, 1.0, "flat"); }

TargetMetric TargetMetric::power(double k1, double k, int n) {
  return TargetMetric(n, k1, k, "power(k1=" + std::to_string(k1) +
                                    ", k=" + std::to_string(k) + ")");
}

TargetMetric TargetMetric::scalar() { return TargetMetric(1, 1.0, 1.0, "scalar"); }

double TargetMetric::lambda(double rho) const {
  if (k_ == 1.0) return k1_;
  return k1_ * std::pow(rho, k_ - 1.0);
}

double TargetMetric::matrix_condition_margin(double rho) const {
  if (!(rho > 0.0))
    throw Error(ErrorKind::domain, "condition margin needs rho > 0");
  const double l = lambda(rho);
  if (!(l > 0.0) || !std::isfinite(l))
    throw Error(ErrorKind::degenerate_metric,
                "conformal factor degenerates at rho = " + std::to_string(rho));
  // 2 rho lambda'/lambda + 1; for the power family this is 2k - 1.
  return 2.0 * (k_ - 1.0) + 1.0;
}

TargetMetric::FamilyCheck TargetMetric::check_family() const {
  const double margin = 2.0 * k_ - 1.0;
  return {margin >= 0.0, k_ >= 1.0, margin};
}

double TargetMetric::norm_sq(std::span<const double> y) const {
  double r2 = 0.0;
  for (double c : y) r2 += c * c;
  return norm_sq(std::sqrt(r2));
}

double TargetMetric::norm_sq(double y) const {
  const double rho = std::abs(y);
  if (rho == 0.0) return 0.0;
  // lambda^2 rho^2 = k1^2 rho^{2k}, written to stay finite as rho -> 0 for
  // every k > 0.
  return k1_ * k1_ * std::pow(rho, 2.0 * k_);
}

}  // namespace fharm
