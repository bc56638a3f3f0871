#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>

namespace fharm {

/// Upper and lower degree of a density profile: the supremum and infimum of
/// t F'(t) / F(t) over t > 0. The upper degree may be +infinity.
struct Degrees {
  double upper = 0.0;
  double lower = 0.0;
};

/// Density profile F: [0, inf) -> [0, inf) with F(0) = 0 and F' > 0.
///
/// The degree ratio t F'/F controls every growth condition in the audit
/// machinery, so builtins carry exact degrees and analytic ratio limits at
/// both ends of the t-axis. Immutable after construction.
class FProfile {
 public:
  using Fn = std::function<double(double)>;

  struct RatioLimits {
    std::optional<double> at_zero;
    std::optional<double> at_infinity;  // +inf allowed
  };

  struct CustomSpec {
    std::string name = "custom";
    Fn value;                 // F
    Fn deriv;                 // F'
    Fn deriv2;                // F'' (optional; finite differences otherwise)
    RatioLimits limits;       // optional analytic ratio endpoints
    bool unique_continuation = false;
  };

  // Builtins. Parameter ranges: p > 1, alpha > 1.
  static FProfile harmonic();                 // F(t) = 2t
  static FProfile p_harmonic(double p);       // F(t) = (2t)^{p/2} / p
  static FProfile minimal_graph();            // F(t) = sqrt(1+2t) - 1
  static FProfile alpha_harmonic(double a);   // F(t) = (1+2t)^a - 1
  static FProfile exponential();              // F(t) = e^{2t} - 1
  static FProfile custom(CustomSpec spec);

  /// Builtin lookup by identifier, e.g. "p_harmonic" with params {p}.
  static FProfile make_builtin(const std::string& name,
                               std::span<const double> params = {});

  double value(double t) const;   // F(t); t < 0 is a domain error
  double deriv(double t) const;   // F'(t)
  double deriv2(double t) const;  // F''(t)

  /// (F(t), F'(t)) in one call.
  std::pair<double, double> evaluate(double t) const;

  /// t F'(t) / F(t); at t == 0 returns the analytic limit when known.
  double degree_ratio(double t) const;

  /// Exact degrees for builtins; estimated on the default grid for customs.
  Degrees degrees() const { return degrees_; }
  bool degrees_exact() const { return degrees_exact_; }

  const RatioLimits& ratio_limits() const { return limits_; }
  bool has_unique_continuation() const { return unique_continuation_; }
  const std::string& name() const { return name_; }

 private:
  FProfile() = default;

  std::string name_;
  Fn value_, deriv_, deriv2_;
  Degrees degrees_{};
  bool degrees_exact_ = false;
  RatioLimits limits_;
  bool unique_continuation_ = false;
};

/// Default log grid for degree estimation: [1e-6, 1e6], 512 points.
std::vector<double> default_degree_grid();

/// Sup/inf of the degree ratio over the grid combined with the ratio limits
/// (analytic for builtins, one-sided geometric extrapolation otherwise).
/// The grid must be strictly increasing, positive, hold at least 64 points
/// and span at least 8 decades.
Degrees estimate_degrees(const FProfile& profile, std::span<const double> grid);

/// True iff the upper degree is finite and m > max(2, 2 d_F).
bool degree_gate(const FProfile& profile, int m);

}  // namespace fharm
