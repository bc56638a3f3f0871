#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fharm/model_manifold.hpp"
#include "fharm/radial_solver.hpp"
#include "fharm/stress_energy.hpp"
#include "fharm/target_metric.hpp"

namespace fharm {

// ---------------------------------------------------------------------------
// Condition checkers

enum class ConditionId {
  f1, f1_tilde, f2, f3,
  thm53_i, thm53_ii, thm53_iii,
  cor52_i, cor52_ii, cor53,
  thm61,
};

const char* to_string(ConditionId id);

struct ConditionVerdict {
  ConditionId id;
  bool holds = false;
  double margin = 0.0;   // margin >= 0 iff holds
  double witness_r = 0.0;
  std::string detail;
};

enum class SigmaMode { f1, f1_tilde };

struct SigmaResult {
  double sigma = 0.0;
  bool holds = false;
  double witness_r = 0.0;          // where the infimum is attained
  std::optional<double> R0;        // split radius for the f1_tilde mode
  bool nonneg_everywhere = true;   // f1_tilde side condition
};

/// Default log grid for the growth-rate infimum: [1e-3, 1e3], 2048 points.
std::vector<double> default_sigma_grid();

/// Infimum over the grid (plus near-pole and far-tail samples) of
///
///   L(r) = c_f r dlog f/dr + (m-1)/2 lambda_min + 1 - d_F max(2, lambda_max)
///
/// with c_f = m - 2 d_F for a nondecreasing factor and m - 2 l_F for a
/// nonincreasing one. Mode f1 asks for a uniform positive bound; f1_tilde
/// asks for nonnegativity everywhere plus a positive bound beyond some R0.
/// Infima below 1e-9 are reported as vanishing.
SigmaResult compute_sigma(const FProfile& profile, const ModelManifold& manifold,
                          const ConformalFactor& factor,
                          std::span<const double> r_grid, SigmaMode mode);

struct F2Result {
  ConditionVerdict verdict;
  std::vector<double> R;  // probes
  std::vector<double> I;  // inverse of the inverse-area tail integral
  double C = 0.0;         // max I(R)/R^sigma over the probes
  double area_exponent = 0.0;   // fitted power of the weighted area
  bool exponential_growth = false;
};

/// Checks I(R) := (integral_R^inf dr / weighted_area(r))^{-1} <= C R^sigma
/// over the probes. Exponential area growth makes I outgrow every power and
/// fails the bound for any sigma; a divergent inverse-area integral makes
/// the bound hold trivially.
F2Result check_f2(const ModelManifold& manifold, const ConformalFactor& factor,
                  double sigma, std::span<const double> R_probe, double R0);

struct F3Result {
  ConditionVerdict verdict;
  std::vector<double> R;
  std::vector<double> ratio;  // weighted_area(R) / (R log R)
  double C = 0.0;
};

/// Checks weighted_area(R) <= C R log R over the probes (trend fit on the
/// tail). Probes must exceed e.
F3Result check_f3(const ModelManifold& manifold, const ConformalFactor& factor,
                  std::span<const double> R_probe);

/// Closed-form growth-rate bounds for the pinched-curvature cases. The
/// remark_monotone variant replaces the two-sided-negative bound by
/// m - 2 d_F alpha/beta, valid when (m-1) beta - 2 d_F alpha >= 0.
enum class PinchedVariant { case_i, case_ii, case_iii, remark_monotone };

ConditionVerdict check_pinched_theorem(const FProfile& profile,
                                       const ModelManifold& manifold,
                                       const ConformalFactor& factor,
                                       PinchedVariant variant,
                                       const CurvatureCaseParams& params,
                                       std::span<const double> r_grid);

// ---------------------------------------------------------------------------
// Growth machinery

struct GrowthReport {
  std::vector<double> R_samples;
  std::vector<double> E_samples;   // energy of the ball/annulus up to R
  double sigma = 0.0;
  double fitted_exponent = 0.0;    // log-log slope over the tail half
  double fit_residual = 0.0;
  bool monotone_ratio_ok = true;
  double worst_monotone_margin = 0.0;
  double R0 = 0.0;                 // inner radius (annulus case)
  double H_R0 = 0.0;               // boundary flux at R0, 0 for pole-smooth
  bool pole_smooth_domain = false;
};

/// Energy growth audit. Pole-smooth domains check that E(R)/R^sigma is
/// nondecreasing; annulus domains check the flux-corrected differential
/// inequality R E'(R) >= H(R0) + sigma (E(R) - E(R0)) per sample.
GrowthReport energy_profile(const RadialMap& map,
                            std::span<const double> R_samples, double sigma);

struct UpperBoundReport {
  std::vector<double> R;
  std::vector<double> Z;    // annulus integral of F' h(v) u'^2 weight
  std::vector<double> Zp;   // its derivative (the sphere integrand)
  std::vector<double> M;    // sphere integral of F' h(v) v^2 weight
  std::vector<double> K;    // F'(e) h(v) v^2 at R
  std::vector<double> eta;  // right-monotone envelope of h(v) v^2
  std::vector<double> cs_margin;  // 4 Zp M - Z^2
  bool cauchy_schwarz_all_pass = true;
  double worst_cs_margin = 0.0;
  double worst_cs_r = 0.0;
  double pairing_identity_residual = 0.0;
  double condition_margin_min = 0.0;
  double offset = 0.0;
};

/// The boundary-pairing machinery for a map into a conformally flat target,
/// audited with the explicit Cauchy-Schwarz factor 4: Z(R)^2 <= 4 Z'(R) M(R).
/// `offset` translates the map before applying target norms (v = u + offset).
/// The target chart condition must have nonnegative margin along the image.
UpperBoundReport upper_bound_machinery(const RadialMap& map,
                                       const TargetMetric& target, double R2,
                                       std::span<const double> R_samples,
                                       double offset = 0.0);

/// Running maximum from the right; nonincreasing and pointwise >= input.
std::vector<double> right_monotone_envelope(std::span<const double> samples);

// ---------------------------------------------------------------------------
// Liouville verdict

enum class TheoremId {
  thm51, thm52, thm53_i, thm53_ii, thm53_iii, thm54, thm61, cor61, cor62,
};

const char* to_string(TheoremId id);
std::optional<TheoremId> theorem_from_string(const std::string& name);

/// certify: do the geometric/profile hypotheses force every admissible
///          entire map to be constant? The flux family is solved as a
///          cross-check that nonconstant solutions stay away from the pole.
/// witness: audit one concrete solved map against the hypotheses,
///          including entireness of its domain and its computed asymptotics.
enum class AuditMode { certify, witness };

struct AuditScenario {
  std::shared_ptr<const FProfile> profile;
  std::shared_ptr<const ModelManifold> manifold;
  std::shared_ptr<const ConformalFactor> factor;
  std::shared_ptr<const TargetMetric> target;
  TheoremId theorem = TheoremId::thm51;
  AuditMode mode = AuditMode::certify;
  std::vector<double> flux_values;
  Interval r_interval{};
  std::vector<double> sigma_grid;  // default_sigma_grid() when empty
  std::vector<double> R_samples;   // derived from r_interval when empty
  CurvatureCaseParams pinch_params{};
  bool decay_granted = true;       // asymptotic class granted in certify mode
  double f2_R0 = 1.0;
};

struct HypothesisResult {
  std::string name;
  bool holds = false;
  double margin = 0.0;
  std::string detail;
};

struct MapSummary {
  double Q = 0.0;
  bool solved = false;
  Interval domain{};
  bool reaches_pole = false;
  bool pole_smooth = false;
  LimitStatus limit_status = LimitStatus::undetermined;
  double limit_value = 0.0;
  double max_flux_residual = 0.0;
  std::string note;
};

enum class VerdictKind { constant_forced, hypothesis_fails, inconsistent };

const char* to_string(VerdictKind v);

struct LiouvilleOutcome {
  VerdictKind verdict = VerdictKind::hypothesis_fails;
  std::vector<HypothesisResult> hypotheses;
  std::vector<std::string> failing;
  std::vector<MapSummary> maps;
  double sigma = 0.0;
  std::string detail;
};

LiouvilleOutcome liouville_verdict(const AuditScenario& scenario);

/// Final classification given the hypothesis outcome and the solver
/// cross-check; the inconsistent branch is the bug trap that must never
/// fire for genuine scenarios.
VerdictKind classify_outcome(bool all_hypotheses_hold,
                             bool nonconstant_pole_smooth_exists);

}  // namespace fharm
