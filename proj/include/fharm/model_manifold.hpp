#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fharm/expr.hpp"

namespace fharm {

/// Surface measure of the unit (m-1)-sphere, 2 pi^{m/2} / Gamma(m/2).
/// This normalization is used for every sphere integral in the library.
double unit_sphere_area(int m);

/// Sign class of d(log f)/dr, declared by the caller and spot-checked.
enum class FactorSign { nonneg, nonpos };

/// Radial conformal rescaling g = f^2 g0 with f > 0 and a single-signed
/// radial logarithmic derivative.
class ConformalFactor {
 public:
  using Fn = std::function<double(double)>;

  static ConformalFactor one();
  static ConformalFactor from_expression(const std::string& src, FactorSign sign);
  /// f = exp(g(r)) with g given as an expression; keeps log f exactly
  /// representable for factors that underflow or overflow the direct form.
  static ConformalFactor exp_expression(const std::string& g_src, FactorSign sign);
  static ConformalFactor make(std::string name, Fn f, Fn dlog, FactorSign sign);

  double value(double r) const;
  double log_value(double r) const;
  double dlog_dr(double r) const;

  FactorSign sign() const { return sign_; }
  bool is_one() const { return is_one_; }
  const std::string& name() const { return name_; }

 private:
  ConformalFactor() = default;

  std::string name_;
  Fn value_, dlog_;
  Fn log_value_;  // optional exact log form
  FactorSign sign_ = FactorSign::nonneg;
  bool is_one_ = false;
};

/// Eigenvalues of Hess(r^2) - 2 dr (x) dr restricted to the directions
/// orthogonal to d/dr. On a model manifold both equal 2 r psi'/psi.
struct HessianData {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

enum class ManifoldKind { euclidean, hyperbolic, pinched, custom };

/// Rotationally symmetric manifold dr^2 + psi(r)^2 g_{sphere} with a smooth
/// pole: psi(0) = 0, psi'(0) = 1, psi > 0 on the working interval
/// [r_min, r_max]. The pinched kind integrates psi'' + K psi = 0 from a
/// prescribed radial curvature profile and keeps a dense interpolant, so
/// all queries after construction are read-only.
class ModelManifold {
 public:
  using Fn = std::function<double(double)>;

  static ModelManifold euclidean(int m, double r_max = 1e12);
  static ModelManifold hyperbolic(int m, double alpha, double r_max = 1e12);

  /// Integrates the warping function from a continuous curvature profile.
  /// Relative tolerance 1e-10 or better; a zero of psi before r_max is a
  /// conjugate point and raises ErrorKind::no_pole.
  static ModelManifold pinched(int m, Fn curvature, double r_max,
                               std::string label = "pinched");
  static ModelManifold pinched_expression(int m, const std::string& K_src,
                                          double r_max);
  /// Curvature given as sampled (r, K) rows, linearly interpolated.
  static ModelManifold pinched_table(int m,
                                     std::vector<std::pair<double, double>> table,
                                     double r_max);

  /// Warping function from an explicit expression in r. psi(0) = 0 and
  /// psi'(0) = 1 are validated near the pole.
  static ModelManifold custom(int m, const std::string& psi_src, double r_max);

  int dim() const { return m_; }
  ManifoldKind kind() const { return kind_; }
  const std::string& label() const { return label_; }

  double r_min() const { return r_min_; }
  double r_max() const { return r_max_; }

  double psi(double r) const;
  double psi_prime(double r) const;
  double log_psi(double r) const;

  /// Radial curvature -psi''/psi. Analytic for builtins, profile readback
  /// for pinched kinds, exact second derivatives for expression kinds.
  double radial_curvature(double r) const;

  /// Requires r > 0; the pole value 2 is only available through
  /// hessian_pole_limit().
  HessianData hessian_eigs(double r) const;
  static constexpr double hessian_pole_limit() { return 2.0; }

  /// True when psi stays evaluable for arbitrarily large r (closed-form
  /// builtin kinds). Pinched kinds carry dense data only up to r_max, and
  /// custom expressions are validated only up to r_max; for both, r_max is
  /// a hard evaluation cap. For the closed-form kinds r_max is just the
  /// default audit horizon.
  bool analytic() const {
    return kind_ == ManifoldKind::euclidean || kind_ == ManifoldKind::hyperbolic;
  }

 private:
  ModelManifold() = default;
  void check_working(double r) const;

  struct OdeData;  // dense interpolant for the pinched kind

  int m_ = 0;
  ManifoldKind kind_ = ManifoldKind::euclidean;
  std::string label_;
  double r_min_ = 1e-8;
  double r_max_ = 0.0;
  double alpha_ = 0.0;  // hyperbolic curvature scale
  Fn curvature_;        // pinched profile readback
  std::optional<expr::Expression> psi_expr_;  // custom kind
  std::shared_ptr<const OdeData> ode_;
};

/// Pinching cases for the Hessian comparison checker.
enum class CurvatureCase {
  two_sided_negative,   // -alpha^2 <= K <= -beta^2
  polynomial_decay,     // |K| <= const / (1+r^2)^{1+eps}
  inverse_square,       // |K| <= const / (1+r^2)
};

struct CurvatureCaseParams {
  // two_sided_negative
  double alpha = 0.0, beta = 0.0;
  // polynomial_decay
  double A = 0.0, B = 0.0, epsilon = 0.0;
  // inverse_square
  double a = 0.0, b = 0.0;
};

struct HessianComparisonRow {
  double r;
  double lower;   // h_low(r)
  double value;   // psi'/psi
  double upper;   // h_high(r)
  bool pass;
};

struct HessianComparisonReport {
  std::vector<HessianComparisonRow> rows;
  bool all_pass = true;
  double worst_margin = 0.0;  // min over rows of min(value-lower, upper-value)
  double worst_r = 0.0;
};

/// Verifies h_low <= psi'/psi <= h_high on the grid for the envelopes of
/// the selected pinching case. The manifold's curvature is certified
/// against the case bounds first; a violation raises
/// ErrorKind::precondition with the first offending radius.
HessianComparisonReport check_hessian_comparison(const ModelManifold& manifold,
                                                 CurvatureCase c,
                                                 const CurvatureCaseParams& p,
                                                 std::span<const double> r_grid);

/// Weighted sphere area A_{m-1} psi(R)^{m-1} f(R)^{m-2} and its logarithm.
double boundary_area(const ModelManifold& manifold, const ConformalFactor& f,
                     double R);
double log_boundary_area(const ModelManifold& manifold,
                         const ConformalFactor& f, double R);

}  // namespace fharm
