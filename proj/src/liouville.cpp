#include "fharm/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fharm/errors.hpp"
#include "fharm/numerics.hpp"

namespace fharm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSigmaFloor = 1e-9;  // infima below this count as vanishing

double x_coth_x(double x) { return x == 0.0 ? 1.0 : x / std::tanh(x); }

}  // namespace

const char* to_string(ConditionId id) {
  switch (id) {
    case ConditionId::f1: return "f1";
    case ConditionId::f1_tilde: return "f1_tilde";
    case ConditionId::f2: return "f2";
    case ConditionId::f3: return "f3";
    case ConditionId::thm53_i: return "thm53_i";
    case ConditionId::thm53_ii: return "thm53_ii";
    case ConditionId::thm53_iii: return "thm53_iii";
    case ConditionId::cor52_i: return "cor52_i";
    case ConditionId::cor52_ii: return "cor52_ii";
    case ConditionId::cor53: return "cor53";
    case ConditionId::thm61: return "thm61";
  }
  return "unknown";
}

std::vector<double> default_sigma_grid() { return num::log_grid(1e-3, 1e3, 2048); }

SigmaResult compute_sigma(const FProfile& profile, const ModelManifold& manifold,
                          const ConformalFactor& factor,
                          std::span<const double> r_grid, SigmaMode mode) {
  const int m = manifold.dim();
  const Degrees deg = profile.degrees();
  const double c_f = factor.sign() == FactorSign::nonneg ? m - 2.0 * deg.upper
                                                         : m - 2.0 * deg.lower;

  std::vector<double> samples(r_grid.begin(), r_grid.end());
  for (double s : samples)
    if (!(s > 0.0) || s > manifold.r_max())
      throw Error(ErrorKind::domain,
                  "sigma grid point outside the working interval: " +
                      std::to_string(s));
  // Endpoint samples: the growth bound typically attains its infimum at one
  // of the ends of the r-axis.
  samples.insert(samples.begin(), manifold.r_min());
  samples.push_back(std::min(manifold.r_max(), 1e9));
  std::sort(samples.begin(), samples.end());

  auto L = [&](double r) {
    if (!std::isfinite(deg.upper)) return -kInf;
    const auto eig = manifold.hessian_eigs(r);
    double v = 0.5 * (m - 1) * eig.lambda_min + 1.0 -
               deg.upper * std::max(2.0, eig.lambda_max);
    if (!factor.is_one()) v += c_f * r * factor.dlog_dr(r);
    return v;
  };

  SigmaResult res;
  double inf = kInf;
  double witness = samples.front();
  std::vector<double> values(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    values[i] = L(samples[i]);
    if (values[i] < inf) {
      inf = values[i];
      witness = samples[i];
    }
  }
  res.witness_r = witness;

  if (mode == SigmaMode::f1) {
    res.sigma = inf;
    res.holds = inf >= kSigmaFloor;
    return res;
  }

  // f1_tilde: nonnegative everywhere, uniformly positive beyond some R0.
  res.nonneg_everywhere = inf >= -1e-13;
  double suffix = kInf;
  std::optional<std::size_t> split;
  std::vector<double> suffix_inf(samples.size());
  for (std::size_t i = samples.size(); i-- > 0;) {
    suffix = std::min(suffix, values[i]);
    suffix_inf[i] = suffix;
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (suffix_inf[i] >= kSigmaFloor) {
      split = i;
      break;
    }
  }
  if (split) {
    res.R0 = samples[*split];
    res.sigma = suffix_inf[*split];
  } else {
    res.sigma = suffix_inf.back();
  }
  res.holds = res.nonneg_everywhere && split.has_value();
  return res;
}

F2Result check_f2(const ModelManifold& manifold, const ConformalFactor& factor,
                  double sigma, std::span<const double> R_probe, double R0) {
  if (!(sigma > 0.0))
    throw Error(ErrorKind::parameter, "check_f2 requires sigma > 0");
  F2Result out;
  out.verdict.id = ConditionId::f2;
  for (double R : R_probe)
    if (R > R0) out.R.push_back(R);
  if (out.R.empty())
    throw Error(ErrorKind::parameter, "check_f2 needs probes beyond R0");
  std::sort(out.R.begin(), out.R.end());

  auto logA = [&](double r) { return log_boundary_area(manifold, factor, r); };
  auto invA = [&](double r) { return std::exp(-logA(r)); };

  const double R_big =
      std::min(manifold.r_max() * 0.999999,
               std::max(1e4, 100.0 * out.R.back()));

  // Classify the far tail of the weighted area: power-like or exponential.
  std::vector<double> lr, la, rr;
  for (double r : num::log_grid(0.7 * R_big, R_big, 32)) {
    lr.push_back(std::log(r));
    rr.push_back(r);
    la.push_back(logA(r));
  }
  const auto power_fit = num::fit_line(lr, la);
  const auto exp_fit = num::fit_line(rr, la);
  out.area_exponent = power_fit.slope;
  if (exp_fit.slope > 1e-3 && exp_fit.residual < power_fit.residual) {
    out.exponential_growth = true;
    out.verdict.holds = false;
    out.verdict.margin = -exp_fit.slope;
    out.verdict.witness_r = R_big;
    out.verdict.detail =
        "weighted sphere area grows exponentially (rate " +
        std::to_string(exp_fit.slope) +
        " per unit radius); the inverse-area tail integral is dominated by "
        "its lower end and its inverse outgrows every power of R, so the "
        "bound fails for every sigma > 0";
    return out;
  }

  const double q = power_fit.slope;
  const double tail =
      q > 1.02 ? invA(R_big) * R_big / (q - 1.0) : kInf;

  double C = 0.0;
  double witness = out.R.front();
  std::vector<double> lR, lratio;
  for (double R : out.R) {
    const double partial = num::integrate(invA, R, R_big, {1e-300, 1e-13});
    const double T = partial + tail;
    const double I = std::isfinite(T) ? 1.0 / T : 0.0;
    out.I.push_back(I);
    const double ratio = I / std::pow(R, sigma);
    if (ratio > C) {
      C = ratio;
      witness = R;
    }
    lR.push_back(std::log(R));
    lratio.push_back(std::log(std::max(ratio, 1e-300)));
  }
  out.C = C;
  out.verdict.witness_r = witness;

  if (C < 1e-280) {
    out.verdict.holds = true;
    out.verdict.margin = 1.0;
    out.verdict.detail =
        "inverse-area integral diverges; the bound holds trivially (I = 0)";
    return out;
  }

  const double slope = num::fit_line(lR, lratio).slope;
  out.verdict.margin = 0.01 - slope;
  out.verdict.holds = out.verdict.margin >= 0.0;
  out.verdict.detail = "C = " + std::to_string(C) + ", trend slope of I/R^sigma = " +
                       std::to_string(slope) + ", area exponent = " +
                       std::to_string(q);
  return out;
}

F3Result check_f3(const ModelManifold& manifold, const ConformalFactor& factor,
                  std::span<const double> R_probe) {
  F3Result out;
  out.verdict.id = ConditionId::f3;
  if (R_probe.empty() || *std::min_element(R_probe.begin(), R_probe.end()) <=
                             std::exp(1.0))
    throw Error(ErrorKind::precondition, "check_f3 probes must exceed e");
  out.R.assign(R_probe.begin(), R_probe.end());
  std::sort(out.R.begin(), out.R.end());

  std::vector<double> lR, lratio;
  for (double R : out.R) {
    const double ratio =
        std::exp(log_boundary_area(manifold, factor, R)) / (R * std::log(R));
    out.ratio.push_back(ratio);
    out.C = std::max(out.C, ratio);
    lR.push_back(std::log(R));
    lratio.push_back(std::log(std::max(ratio, 1e-300)));
  }
  const std::size_t half = out.R.size() / 2;
  const std::vector<double> tx(lR.begin() + half, lR.end());
  const std::vector<double> ty(lratio.begin() + half, lratio.end());
  const double slope = tx.size() >= 2 ? num::fit_line(tx, ty).slope : 0.0;
  out.verdict.margin = 1e-3 - slope;
  out.verdict.holds = out.verdict.margin >= 0.0;
  out.verdict.witness_r = out.R.back();
  out.verdict.detail = "C = " + std::to_string(out.C) +
                       ", tail trend slope = " + std::to_string(slope);
  return out;
}

ConditionVerdict check_pinched_theorem(const FProfile& profile,
                                       const ModelManifold& manifold,
                                       const ConformalFactor& factor,
                                       PinchedVariant variant,
                                       const CurvatureCaseParams& params,
                                       std::span<const double> r_grid) {
  const int m = manifold.dim();
  const Degrees deg = profile.degrees();
  const double c_f = factor.sign() == FactorSign::nonneg ? m - 2.0 * deg.upper
                                                         : m - 2.0 * deg.lower;

  // Certify the declared pinching band first (reusing the comparison
  // checker's precondition path).
  const CurvatureCase cc = variant == PinchedVariant::case_i ||
                                   variant == PinchedVariant::remark_monotone
                               ? CurvatureCase::two_sided_negative
                               : variant == PinchedVariant::case_ii
                                     ? CurvatureCase::polynomial_decay
                                     : CurvatureCase::inverse_square;
  check_hessian_comparison(manifold, cc, params, r_grid);

  ConditionVerdict v;
  v.id = variant == PinchedVariant::case_ii
             ? ConditionId::thm53_ii
             : variant == PinchedVariant::case_iii ? ConditionId::thm53_iii
                                                   : ConditionId::thm53_i;

  std::string note;
  auto bound = [&](double r) -> double {
    if (!std::isfinite(deg.upper)) return -kInf;
    const double fterm = factor.is_one() ? 0.0 : c_f * r * factor.dlog_dr(r);
    switch (variant) {
      case PinchedVariant::case_i:
        return fterm + 1.0 + (m - 1) * x_coth_x(params.beta * r) * 1.0 -
               2.0 * deg.upper * x_coth_x(params.alpha * r);
      case PinchedVariant::remark_monotone:
        return fterm + m - 2.0 * deg.upper * params.alpha / params.beta;
      case PinchedVariant::case_ii:
        return fterm + 1.0 + (m - 1) * (1.0 - params.B / (2.0 * params.epsilon)) -
               2.0 * deg.upper * std::exp(params.A / (2.0 * params.epsilon));
      case PinchedVariant::case_iii:
        return fterm + 1.0 +
               (m - 1) * 0.5 *
                   (1.0 + std::sqrt(std::max(0.0, 1.0 - 4.0 * params.b * params.b))) -
               deg.upper * (1.0 + std::sqrt(1.0 + 4.0 * params.a * params.a));
    }
    return -kInf;
  };

  if (variant == PinchedVariant::remark_monotone) {
    const double premise = (m - 1) * params.beta - 2.0 * deg.upper * params.alpha;
    if (premise < 0.0)
      note = "monotone-bound premise (m-1) beta - 2 d_F alpha >= 0 violated "
             "(value " + std::to_string(premise) + "); ";
  }

  std::vector<double> samples(r_grid.begin(), r_grid.end());
  samples.insert(samples.begin(), manifold.r_min());
  samples.push_back(std::min(manifold.r_max(), 1e9));

  double inf = kInf;
  double witness = samples.front();
  for (double r : samples) {
    const double b = bound(r);
    if (b < inf) {
      inf = b;
      witness = r;
    }
  }
  v.margin = inf;
  v.witness_r = witness;
  v.holds = inf >= kSigmaFloor && note.empty();
  const char* sign_note = factor.sign() == FactorSign::nonpos
                              ? " (nonincreasing factor: lower-degree form)"
                              : "";
  v.detail = note + "closed-form growth bound infimum = " + std::to_string(inf) +
             sign_note;
  return v;
}

// ---------------------------------------------------------------------------
// Growth machinery

GrowthReport energy_profile(const RadialMap& map,
                            std::span<const double> R_samples, double sigma) {
  if (R_samples.size() < 2)
    throw Error(ErrorKind::parameter, "energy profile needs >= 2 radii");
  GrowthReport rep;
  rep.sigma = sigma;
  rep.R_samples.assign(R_samples.begin(), R_samples.end());
  std::sort(rep.R_samples.begin(), rep.R_samples.end());
  const Interval dom = map.domain();
  for (double R : rep.R_samples)
    if (!dom.contains(R))
      throw Error(ErrorKind::domain, "energy sample outside the map domain");

  const int m = map.manifold().dim();
  const double A = unit_sphere_area(m);
  auto integrand = [&map, m](double r) {
    return map.energy_density(r) * std::pow(map.factor().value(r), m) *
           std::pow(map.manifold().psi(r), m - 1);
  };

  rep.pole_smooth_domain = dom.lo <= 4.0 * map.manifold().r_min();
  rep.R0 = rep.pole_smooth_domain ? dom.lo : rep.R_samples.front();
  rep.H_R0 = rep.pole_smooth_domain ? 0.0 : boundary_flux(map, rep.R0);

  // Cumulative energy from R0 (from the domain edge in the pole-smooth
  // case; the difference structure of the audits is unaffected).
  double E = 0.0;
  double prev = rep.pole_smooth_domain ? dom.lo : rep.R0;
  const bool singular_edge = map.truncated_lo() && prev <= dom.lo * (1 + 1e-12);
  bool first = true;
  rep.E_samples.reserve(rep.R_samples.size());
  for (double R : rep.R_samples) {
    if (R > prev) {
      if (first && singular_edge)
        E += num::integrate_sqrt_lower(integrand, prev, R, {1e-12, 1e-12});
      else
        E += num::integrate(integrand, prev, R, {1e-12, 1e-12});
    }
    first = false;
    prev = R;
    rep.E_samples.push_back(A * E);
  }

  // Monotonicity audit.
  rep.worst_monotone_margin = kInf;
  if (map.is_constant()) {
    rep.worst_monotone_margin = 0.0;
  } else if (rep.pole_smooth_domain) {
    for (std::size_t i = 0; i + 1 < rep.R_samples.size(); ++i) {
      const double a = rep.E_samples[i] / std::pow(rep.R_samples[i], sigma);
      const double b = rep.E_samples[i + 1] / std::pow(rep.R_samples[i + 1], sigma);
      const double margin = b - a;
      rep.worst_monotone_margin = std::min(rep.worst_monotone_margin, margin);
      if (margin < -1e-10 * (1.0 + std::abs(a))) rep.monotone_ratio_ok = false;
    }
  } else {
    for (std::size_t i = 0; i < rep.R_samples.size(); ++i) {
      const double R = rep.R_samples[i];
      const double Eprime = A * integrand(R);
      const double gap = R * Eprime - rep.H_R0 - sigma * rep.E_samples[i];
      rep.worst_monotone_margin = std::min(rep.worst_monotone_margin, gap);
      if (gap < -1e-9 * (1.0 + std::abs(R * Eprime))) rep.monotone_ratio_ok = false;
    }
  }

  // Fitted growth exponent over the top half of the samples.
  std::vector<double> lx, ly;
  const std::size_t n = rep.R_samples.size();
  for (std::size_t i = n / 2; i < n; ++i) {
    if (rep.E_samples[i] > 0.0) {
      lx.push_back(std::log(rep.R_samples[i]));
      ly.push_back(std::log(rep.E_samples[i]));
    }
  }
  if (lx.size() >= 2) {
    const auto fit = num::fit_line(lx, ly);
    rep.fitted_exponent = fit.slope;
    rep.fit_residual = fit.residual;
  }
  return rep;
}

std::vector<double> right_monotone_envelope(std::span<const double> samples) {
  std::vector<double> env(samples.begin(), samples.end());
  for (std::size_t i = env.size(); i-- > 1;)
    env[i - 1] = std::max(env[i - 1], env[i]);
  return env;
}

UpperBoundReport upper_bound_machinery(const RadialMap& map,
                                       const TargetMetric& target, double R2,
                                       std::span<const double> R_samples,
                                       double offset) {
  if (!map.domain().contains(R2))
    throw Error(ErrorKind::domain, "base radius outside the map domain");
  UpperBoundReport rep;
  rep.offset = offset;
  rep.R.assign(R_samples.begin(), R_samples.end());
  std::sort(rep.R.begin(), rep.R.end());
  for (double R : rep.R)
    if (!map.domain().contains(R) || R < R2)
      throw Error(ErrorKind::domain,
                  "machinery sample outside [R2, domain end]");

  const int m = map.manifold().dim();
  const double A = unit_sphere_area(m);

  auto v_of = [&](double r) { return map.u(r) + offset; };
  auto weight = [&](double r) {
    return std::pow(map.factor().value(r), m - 2) *
           std::pow(map.manifold().psi(r), m - 1);
  };
  auto lambda2 = [&](double v) {
    const double l = target.lambda(std::max(std::abs(v), 1e-300));
    return l * l;
  };
  auto fprime = [&](double r) {
    const double f = map.factor().value(r);
    const double up = map.u_prime(r);
    return map.profile().deriv(up * up / (2.0 * f * f));
  };
  auto z_integrand = [&](double r) {
    const double up = map.u_prime(r);
    return fprime(r) * lambda2(v_of(r)) * up * up * weight(r);
  };

  // Target chart condition along the image.
  rep.condition_margin_min = kInf;
  for (double R : rep.R) {
    const double rho = std::max(std::abs(v_of(R)), 1e-12);
    rep.condition_margin_min =
        std::min(rep.condition_margin_min, target.matrix_condition_margin(rho));
  }
  if (rep.condition_margin_min < 0.0)
    throw Error(ErrorKind::precondition,
                "target chart condition fails along the image (margin " +
                    std::to_string(rep.condition_margin_min) + ")");

  rep.worst_cs_margin = kInf;
  std::vector<double> nsq;
  double Z = 0.0, prev = R2;
  for (double R : rep.R) {
    if (R > prev) Z += A * num::integrate(z_integrand, prev, R, {1e-12, 1e-12});
    prev = R;
    const double up = map.u_prime(R);
    const double v = v_of(R);
    const double Fp = fprime(R);
    const double w = weight(R);
    const double n2 = target.norm_sq(v);
    const double Zp = A * Fp * lambda2(v) * up * up * w;
    const double M = A * Fp * n2 * w;
    const double Kv = Fp * n2;
    rep.Z.push_back(Z);
    rep.Zp.push_back(Zp);
    rep.M.push_back(M);
    rep.K.push_back(Kv);
    nsq.push_back(n2);

    const double margin = 4.0 * Zp * M - Z * Z;
    rep.cs_margin.push_back(margin);
    const double tol = 1e-9 * (1.0 + Z * Z);
    if (margin < -tol) rep.cauchy_schwarz_all_pass = false;
    if (margin < rep.worst_cs_margin) {
      rep.worst_cs_margin = margin;
      rep.worst_cs_r = R;
    }

    // Sharp pairing identity: the sphere pairing squared equals Zp * M for
    // radial maps; deviations measure internal inconsistency only.
    const double outer = A * Fp * lambda2(v) * up * v * w;
    const double res = std::abs(outer * outer - Zp * M) / (1.0 + outer * outer);
    rep.pairing_identity_residual = std::max(rep.pairing_identity_residual, res);
  }
  rep.eta = right_monotone_envelope(nsq);
  return rep;
}

// ---------------------------------------------------------------------------
// Liouville verdict

const char* to_string(TheoremId id) {
  switch (id) {
    case TheoremId::thm51: return "thm51";
    case TheoremId::thm52: return "thm52";
    case TheoremId::thm53_i: return "thm53_i";
    case TheoremId::thm53_ii: return "thm53_ii";
    case TheoremId::thm53_iii: return "thm53_iii";
    case TheoremId::thm54: return "thm54";
    case TheoremId::thm61: return "thm61";
    case TheoremId::cor61: return "cor61";
    case TheoremId::cor62: return "cor62";
  }
  return "unknown";
}

std::optional<TheoremId> theorem_from_string(const std::string& name) {
  for (TheoremId id : {TheoremId::thm51, TheoremId::thm52, TheoremId::thm53_i,
                       TheoremId::thm53_iii, TheoremId::thm53_ii, TheoremId::thm54,
                       TheoremId::thm61, TheoremId::cor61, TheoremId::cor62})
    if (name == to_string(id)) return id;
  return std::nullopt;
}

const char* to_string(VerdictKind v) {
  switch (v) {
    case VerdictKind::constant_forced: return "CONSTANT_FORCED";
    case VerdictKind::hypothesis_fails: return "HYPOTHESIS_FAILS";
    case VerdictKind::inconsistent: return "INCONSISTENT";
  }
  return "unknown";
}

VerdictKind classify_outcome(bool all_hypotheses_hold,
                             bool nonconstant_pole_smooth_exists) {
  if (!all_hypotheses_hold) return VerdictKind::hypothesis_fails;
  return nonconstant_pole_smooth_exists ? VerdictKind::inconsistent
                                        : VerdictKind::constant_forced;
}

namespace {

bool uses_k_decay(TheoremId t) {
  return t == TheoremId::thm61 || t == TheoremId::cor61 || t == TheoremId::cor62;
}

// Bounded F' along candidate maps: the derivative must stay finite both in
// the vanishing-gradient tail and at the gradient sizes actually attained.
HypothesisResult f_prime_bounded(const FProfile& profile,
                                 const std::vector<double>& e_probes) {
  HypothesisResult h;
  h.name = "f_prime_bounded";
  double sup = 0.0;
  std::vector<double> probes = {1e-200, 1e-100, 1e-30, 1e-12};
  for (double t : num::log_grid(1e-9, 1e3, 32)) probes.push_back(t);
  probes.insert(probes.end(), e_probes.begin(), e_probes.end());
  for (double t : probes) sup = std::max(sup, profile.deriv(t));
  h.holds = sup <= 1e12;
  h.margin = h.holds ? 1.0 : -1.0;
  h.detail = "sup F' over probed energies = " + std::to_string(sup);
  return h;
}

double pole_proximity(const ModelManifold& manifold) {
  return 4.0 * manifold.r_min();
}

}  // namespace

LiouvilleOutcome liouville_verdict(const AuditScenario& sc) {
  if (!sc.profile || !sc.manifold || !sc.factor || !sc.target)
    throw Error(ErrorKind::config,
                "scenario incomplete: profile, manifold, factor and target "
                "must all be set");
  if (sc.mode == AuditMode::witness && sc.flux_values.empty())
    throw Error(ErrorKind::config, "witness scenario needs a flux value");
  if (!(sc.r_interval.hi > sc.r_interval.lo))
    throw Error(ErrorKind::config, "scenario needs a valid r interval");

  const FProfile& profile = *sc.profile;
  const ModelManifold& manifold = *sc.manifold;
  const ConformalFactor& factor = *sc.factor;
  const TargetMetric& target = *sc.target;
  const int m = manifold.dim();
  const Degrees deg = profile.degrees();

  LiouvilleOutcome out;
  auto& hyp = out.hypotheses;

  // Degree gate and positive lower degree are standing hypotheses.
  {
    HypothesisResult h;
    h.name = "degree_gate";
    h.margin = std::isfinite(deg.upper) ? m - std::max(2.0, 2.0 * deg.upper)
                                        : -kInf;
    h.holds = h.margin > 0.0;
    h.detail = "d_F = " + std::to_string(deg.upper) + ", m = " + std::to_string(m);
    hyp.push_back(h);
  }
  {
    HypothesisResult h;
    h.name = "lower_degree_positive";
    h.margin = deg.lower;
    h.holds = deg.lower > 0.0;
    hyp.push_back(h);
  }

  // Solve the flux family up front; map data feeds several hypotheses.
  std::vector<RadialMap> maps;
  for (double Q : sc.flux_values) {
    MapSummary s;
    s.Q = Q;
    try {
      RadialMap map = solve_flux(sc.profile, sc.manifold, sc.factor, Q,
                                 sc.r_interval);
      s.solved = true;
      s.domain = map.domain();
      s.reaches_pole = map.domain().lo <= pole_proximity(manifold);
      if (Q == 0.0) {
        s.pole_smooth = true;
        s.limit_status = LimitStatus::finite;
      } else {
        // A nonzero-flux map reaching the pole has an unbounded derivative
        // there; bounded u' near the edge would be the smoothness signal.
        if (s.reaches_pole)
          s.pole_smooth =
              std::abs(map.u_prime(2.0 * map.domain().lo)) <= 1e3;
        const auto lim = limit_at_infinity(map);
        s.limit_status = lim.status;
        s.limit_value = lim.value;
        for (double r : num::log_grid(map.domain().lo * 1.01,
                                      map.domain().hi * 0.99, 16))
          s.max_flux_residual = std::max(s.max_flux_residual, map.flux_residual(r));
      }
      maps.push_back(std::move(map));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::empty_domain) throw;
      s.note = e.what();
    }
    out.maps.push_back(s);
  }

  // Gradient-energy probes attained by the solved maps.
  std::vector<double> e_probes;
  for (const RadialMap& map : maps) {
    if (map.is_constant()) continue;
    for (double r : num::log_grid(map.domain().lo * 1.0001,
                                  map.domain().hi * 0.9999, 8)) {
      const double f = map.factor().value(r);
      const double up = map.u_prime(r);
      e_probes.push_back(up * up / (2.0 * f * f));
    }
  }

  // sigma route
  const auto sigma_grid =
      sc.sigma_grid.empty() ? default_sigma_grid() : sc.sigma_grid;
  std::vector<double> grid_in_range;
  for (double r : sigma_grid)
    if (r <= manifold.r_max()) grid_in_range.push_back(r);

  double sigma_for_f2 = kSigmaFloor;
  switch (sc.theorem) {
    case TheoremId::thm52: {
      const auto s = compute_sigma(profile, manifold, factor, grid_in_range,
                                   SigmaMode::f1_tilde);
      out.sigma = s.sigma;
      sigma_for_f2 = std::max(s.sigma, kSigmaFloor);
      HypothesisResult h;
      h.name = "f1_tilde";
      h.holds = s.holds;
      h.margin = s.sigma;
      h.detail = s.R0 ? "sigma = " + std::to_string(s.sigma) + " beyond R0 = " +
                            std::to_string(*s.R0)
                      : "no radius with a uniformly positive tail bound";
      if (!s.nonneg_everywhere) h.detail += "; bound negative somewhere";
      hyp.push_back(h);
      HypothesisResult uc;
      uc.name = "unique_continuation";
      uc.holds = profile.has_unique_continuation();
      uc.margin = uc.holds ? 1.0 : -1.0;
      uc.detail = "declared attribute of the profile";
      hyp.push_back(uc);
      break;
    }
    case TheoremId::thm53_i:
    case TheoremId::thm53_ii:
    case TheoremId::thm53_iii: {
      const PinchedVariant variant =
          sc.theorem == TheoremId::thm53_i
              ? PinchedVariant::case_i
              : sc.theorem == TheoremId::thm53_ii ? PinchedVariant::case_ii
                                                  : PinchedVariant::case_iii;
      // Certification grid: within the working interval, away from the pole.
      const auto cert_grid =
          num::log_grid(0.05, std::min(manifold.r_max() * 0.9, 50.0), 256);
      const auto v = check_pinched_theorem(profile, manifold, factor, variant,
                                           sc.pinch_params, cert_grid);
      out.sigma = v.margin;
      sigma_for_f2 = std::max(v.margin, kSigmaFloor);
      HypothesisResult h;
      h.name = to_string(v.id);
      h.holds = v.holds;
      h.margin = v.margin;
      h.detail = v.detail;
      hyp.push_back(h);
      break;
    }
    default: {
      const auto s = compute_sigma(profile, manifold, factor, grid_in_range,
                                   SigmaMode::f1);
      out.sigma = s.sigma;
      sigma_for_f2 = std::max(s.sigma, kSigmaFloor);
      HypothesisResult h;
      h.name = "f1";
      h.holds = s.holds;
      h.margin = s.sigma;
      h.detail = "growth-bound infimum attained near r = " +
                 std::to_string(s.witness_r);
      hyp.push_back(h);
      break;
    }
  }

  // Area conditions.
  if (sc.theorem == TheoremId::thm54) {
    const double lo = std::max(3.0, sc.r_interval.lo * 2.0);
    const double hi = std::min(manifold.r_max() * 0.5, 1e6);
    const auto probes = num::log_grid(lo, hi, 24);
    const auto f3 = check_f3(manifold, factor, probes);
    HypothesisResult h;
    h.name = "f3";
    h.holds = f3.verdict.holds;
    h.margin = f3.verdict.margin;
    h.detail = f3.verdict.detail;
    hyp.push_back(h);

    HypothesisResult ib;
    ib.name = "image_bounded";
    ib.holds = true;
    double cp = 0.0;
    for (const RadialMap& map : maps) {
      if (map.is_constant()) continue;
      for (double r : num::log_grid(map.domain().lo * 1.001,
                                    map.domain().hi * 0.999, 8))
        cp = std::max(cp, target.norm_sq(map.u(r)));
      if (!std::isfinite(cp)) ib.holds = false;
    }
    ib.margin = ib.holds ? 1.0 : -1.0;
    ib.detail = "max target norm along solved maps = " + std::to_string(cp) +
                "; the log-area bound makes the inverse-pairing integral "
                "diverge, which is the contradiction engine";
    hyp.push_back(ib);
  } else {
    const double lo = std::max(2.0, sc.f2_R0 * 1.5);
    const double hi = std::min(manifold.r_max() * 0.5,
                               std::max(1e3, 20.0 * sc.r_interval.hi));
    const auto probes = num::log_grid(lo, hi, 16);
    const auto f2 = check_f2(manifold, factor, sigma_for_f2, probes, sc.f2_R0);
    HypothesisResult h;
    h.name = "f2";
    h.holds = f2.verdict.holds;
    h.margin = f2.verdict.margin;
    h.detail = f2.verdict.detail;
    hyp.push_back(h);
  }

  // F' boundedness (not part of the special-target routes).
  if (!uses_k_decay(sc.theorem)) hyp.push_back(f_prime_bounded(profile, e_probes));

  // Target chart condition for the special-target routes.
  if (uses_k_decay(sc.theorem)) {
    HypothesisResult h;
    h.name = "target_condition";
    h.margin = target.matrix_condition_margin(1.0);
    h.holds = h.margin >= 0.0;
    h.detail = "conformal chart margin 2 rho lambda'/lambda + 1";
    hyp.push_back(h);
    if (sc.theorem == TheoremId::cor61 || sc.theorem == TheoremId::cor62) {
      HypothesisResult s;
      s.name = "scalar_target";
      s.holds = target.n() == 1;
      s.margin = s.holds ? 1.0 : -1.0;
      hyp.push_back(s);
    }
    if (sc.theorem == TheoremId::cor62) {
      HypothesisResult g;
      g.name = "minimal_graph_on_flat";
      g.holds = profile.name() == "minimal_graph" &&
                manifold.kind() == ManifoldKind::euclidean && factor.is_one();
      g.margin = g.holds ? 1.0 : -1.0;
      g.detail = "graph density on a flat background with trivial rescaling";
      hyp.push_back(g);
    }
  }

  // Asymptotic hypothesis.
  {
    HypothesisResult h;
    h.name = uses_k_decay(sc.theorem) ? "k_decay" : "decay_to_point";
    if (sc.mode == AuditMode::certify) {
      h.holds = sc.decay_granted;
      h.detail = sc.decay_granted
                     ? "granted: quantifies over candidate maps with the "
                       "stated asymptotics"
                     : "not granted";
      h.margin = h.holds ? 1.0 : -1.0;
    } else {
      // Witness mode: computed on the audited map.
      const MapSummary& s = out.maps.front();
      if (!s.solved) {
        h.holds = false;
        h.detail = "map could not be solved";
      } else if (uses_k_decay(sc.theorem)) {
        const RadialMap& map = maps.front();
        const double off =
            s.limit_status == LimitStatus::finite ? -s.limit_value : 0.0;
        const auto Rs = num::log_grid(map.domain().lo * 1.05,
                                      map.domain().hi * 0.95, 12);
        std::vector<double> Ks;
        for (double R : Rs) {
          const double f = map.factor().value(R);
          const double up = map.u_prime(R);
          Ks.push_back(map.profile().deriv(up * up / (2 * f * f)) *
                       target.norm_sq(map.u(R) + off));
        }
        const double first = Ks.front(), last = Ks.back();
        h.holds = last <= 0.2 * (first + 1e-300) || last < 1e-12;
        h.margin = first > 0 ? 1.0 - last / first : 1.0;
        h.detail = "translated decay qty falls from " + std::to_string(first) +
                   " to " + std::to_string(last);
      } else {
        h.holds = s.solved && s.limit_status == LimitStatus::finite;
        h.margin = h.holds ? 1.0 : -1.0;
        h.detail = "limit at infinity computed on the audited map";
      }
    }
    hyp.push_back(h);
  }

  // Witness mode audits one concrete map, which must also be entire for the
  // constancy conclusion to apply to it.
  if (sc.mode == AuditMode::witness) {
    const MapSummary& s = out.maps.front();
    HypothesisResult h;
    h.name = "map_entire";
    // An entire map must be defined across the pole and smooth there.
    h.holds = s.solved && s.reaches_pole && s.pole_smooth;
    h.margin = h.holds ? 1.0 : -1.0;
    h.detail = s.solved
                   ? "domain starts at r = " + std::to_string(s.domain.lo)
                   : "no solvable domain";
    hyp.push_back(h);
  }

  bool all_hold = true;
  for (const auto& h : hyp) {
    if (!h.holds) {
      all_hold = false;
      out.failing.push_back(h.name);
    }
  }

  bool bad_nonconstant = false;
  if (sc.mode == AuditMode::witness) {
    const MapSummary& s = out.maps.front();
    bad_nonconstant = s.solved && s.Q != 0.0 && s.pole_smooth;
  } else {
    for (const MapSummary& s : out.maps)
      bad_nonconstant = bad_nonconstant || (s.solved && s.Q != 0.0 && s.pole_smooth);
  }

  out.verdict = classify_outcome(all_hold, bad_nonconstant);
  if (out.verdict == VerdictKind::constant_forced)
    out.detail = "every certified hypothesis holds; the solved flux family "
                 "confirms that only the zero-flux map is smooth at the pole";
  else if (out.verdict == VerdictKind::inconsistent)
    out.detail = "hypotheses certified but a nonconstant pole-smooth solution "
                 "was produced; this branch is a bug trap";
  return out;
}

}  // namespace fharm
