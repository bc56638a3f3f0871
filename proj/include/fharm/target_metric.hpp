#pragma once

#include <span>
#include <string>

namespace fharm {

/// Conformally Euclidean target metric h = lambda(rho)^2 h0 on R^n.
/// The builtin family is lambda(rho) = k1 rho^{k-1}; "flat" is the k = 1
/// member and "scalar" its one-dimensional version.
class TargetMetric {
 public:
  static TargetMetric flat(int n);
  static TargetMetric power(double k1, double k, int n);
  static TargetMetric scalar();  // n = 1, flat

  int n() const { return n_; }
  double k1() const { return k1_; }
  double k() const { return k_; }
  const std::string& name() const { return name_; }

  double lambda(double rho) const;

  /// Scalar reduction of the chart condition dh/dy . y + 2h >= h for a
  /// conformal metric: 2 rho lambda'/lambda + 1, constant 2k - 1 on the
  /// power family. The condition holds iff the margin is >= 0.
  double matrix_condition_margin(double rho) const;

  struct FamilyCheck {
    bool holds;         // 2k - 1 >= 0
    bool paper_regime;  // the stricter published range k >= 1
    double margin;      // 2k - 1
  };
  FamilyCheck check_family() const;

  /// h_{ab}(y) y^a y^b = lambda(|y|)^2 |y|^2.
  double norm_sq(std::span<const double> y) const;
  double norm_sq(double y) const;  // scalar convenience

 private:
  TargetMetric(int n, double k1, double k, std::string name);

  int n_;
  double k1_, k_;
  std::string name_;
};

}  // namespace fharm
