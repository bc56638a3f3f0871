#include "fharm/scenario.hpp"

#include <atomic>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <thread>

#include "fharm/errors.hpp"
#include "fharm/numerics.hpp"

namespace fharm {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string csv_num(double v) {
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, p);
}

std::shared_ptr<const FProfile> parse_profile(const json& j) {
  const std::string name = j.at("name").get<std::string>();
  if (name == "p_harmonic")
    return std::make_shared<FProfile>(FProfile::p_harmonic(j.at("p").get<double>()));
  if (name == "alpha_harmonic")
    return std::make_shared<FProfile>(
        FProfile::alpha_harmonic(j.at("alpha").get<double>()));
  if (name == "custom") {
    const auto Fe = expr::Expression::parse(j.at("F").get<std::string>(), "t");
    FProfile::CustomSpec spec;
    spec.name = "custom:" + j.at("F").get<std::string>();
    spec.value = [Fe](double t) { return Fe(t); };
    spec.deriv = [Fe](double t) { return Fe.eval2(t).d1; };
    spec.deriv2 = [Fe](double t) { return Fe.eval2(t).d2; };
    spec.unique_continuation = j.value("unique_continuation", false);
    return std::make_shared<FProfile>(FProfile::custom(std::move(spec)));
  }
  return std::make_shared<FProfile>(FProfile::make_builtin(name));
}

std::vector<std::pair<double, double>> read_curvature_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorKind::config, "cannot open curvature table: " + path);
  std::vector<std::pair<double, double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("r,", 0) == 0) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw Error(ErrorKind::config, "curvature table row without comma: " + line);
    rows.emplace_back(std::stod(line.substr(0, comma)),
                      std::stod(line.substr(comma + 1)));
  }
  return rows;
}

std::shared_ptr<const ModelManifold> parse_manifold(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const int m = j.at("m").get<int>();
  const double r_max = j.value("r_max", kind == "pinched" ? 100.0 : 1e12);
  if (kind == "euclidean")
    return std::make_shared<ModelManifold>(ModelManifold::euclidean(m, r_max));
  if (kind == "hyperbolic")
    return std::make_shared<ModelManifold>(
        ModelManifold::hyperbolic(m, j.at("alpha").get<double>(), r_max));
  if (kind == "pinched") {
    if (j.contains("K_csv"))
      return std::make_shared<ModelManifold>(ModelManifold::pinched_table(
          m, read_curvature_csv(j.at("K_csv").get<std::string>()), r_max));
    return std::make_shared<ModelManifold>(ModelManifold::pinched_expression(
        m, j.at("K").get<std::string>(), r_max));
  }
  if (kind == "custom")
    return std::make_shared<ModelManifold>(
        ModelManifold::custom(m, j.at("psi").get<std::string>(), r_max));
  throw Error(ErrorKind::config, "unknown manifold kind '" + kind + "'");
}

std::shared_ptr<const ConformalFactor> parse_factor(const json& j) {
  const std::string kind = j.value("kind", "one");
  if (kind == "one")
    return std::make_shared<ConformalFactor>(ConformalFactor::one());
  const std::string sign = j.value("sign", "nonneg");
  if (sign != "nonneg" && sign != "nonpos")
    throw Error(ErrorKind::config, "factor sign must be nonneg or nonpos");
  const FactorSign fs = sign == "nonneg" ? FactorSign::nonneg : FactorSign::nonpos;
  if (kind == "expr")
    return std::make_shared<ConformalFactor>(
        ConformalFactor::from_expression(j.at("expr").get<std::string>(), fs));
  if (kind == "exp")
    return std::make_shared<ConformalFactor>(
        ConformalFactor::exp_expression(j.at("g").get<std::string>(), fs));
  throw Error(ErrorKind::config, "unknown factor kind '" + kind + "'");
}

std::shared_ptr<const TargetMetric> parse_target(const json& j) {
  const std::string kind = j.value("kind", "scalar");
  if (kind == "scalar")
    return std::make_shared<TargetMetric>(TargetMetric::scalar());
  if (kind == "flat")
    return std::make_shared<TargetMetric>(TargetMetric::flat(j.value("n", 1)));
  if (kind == "power")
    return std::make_shared<TargetMetric>(TargetMetric::power(
        j.at("k1").get<double>(), j.at("k").get<double>(), j.value("n", 1)));
  throw Error(ErrorKind::config, "unknown target kind '" + kind + "'");
}

std::vector<double> parse_grid(const json& j) {
  const double lo = j.at("lo").get<double>();
  const double hi = j.at("hi").get<double>();
  const int n = j.at("n").get<int>();
  const std::string scale = j.value("scale", "log");
  return scale == "log" ? num::log_grid(lo, hi, n) : num::linear_grid(lo, hi, n);
}

json hypothesis_json(const HypothesisResult& h) {
  return json{{"name", h.name},
              {"holds", h.holds},
              {"margin", h.margin},
              {"detail", h.detail}};
}

json map_json(const MapSummary& s) {
  json j{{"Q", s.Q}, {"solved", s.solved}};
  if (s.solved) {
    j["domain"] = {s.domain.lo, s.domain.hi};
    j["reaches_pole"] = s.reaches_pole;
    j["pole_smooth"] = s.pole_smooth;
    j["limit_status"] = s.limit_status == LimitStatus::finite
                            ? "finite"
                            : s.limit_status == LimitStatus::divergent
                                  ? "divergent"
                                  : "undetermined";
    j["limit_value"] = s.limit_value;
    j["max_flux_residual"] = s.max_flux_residual;
  }
  if (!s.note.empty()) j["note"] = s.note;
  return j;
}

}  // namespace

std::vector<Scenario> load_suite(const std::string& path, std::string* suite_name) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::config, "cannot open suite file: " + path);
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::config,
                "suite parse error in " + path + ": " + e.what());
  }
  if (suite_name) *suite_name = root.value("suite", fs::path(path).stem().string());

  std::vector<Scenario> scenarios;
  std::vector<std::string> seen;
  try {
    for (const json& js : root.at("scenarios")) {
      Scenario sc;
      sc.id = js.at("id").get<std::string>();
      if (std::find(seen.begin(), seen.end(), sc.id) != seen.end())
        throw Error(ErrorKind::config, "duplicate scenario id '" + sc.id + "'");
      seen.push_back(sc.id);

      sc.audit.profile = parse_profile(js.at("profile"));
      sc.audit.manifold = parse_manifold(js.at("manifold"));
      sc.audit.factor = parse_factor(js.value("factor", json{{"kind", "one"}}));
      sc.audit.target = parse_target(js.value("target", json{{"kind", "scalar"}}));
      sc.profile_desc = sc.audit.profile->name();
      sc.manifold_desc = sc.audit.manifold->label() +
                         ", m=" + std::to_string(sc.audit.manifold->dim());
      sc.factor_desc = sc.audit.factor->name();
      sc.target_desc = sc.audit.target->name();

      const std::string thm = js.at("theorem").get<std::string>();
      const auto tid = theorem_from_string(thm);
      if (!tid) throw Error(ErrorKind::config, "unknown theorem '" + thm + "'");
      sc.audit.theorem = *tid;

      const std::string mode = js.value("mode", "certify");
      if (mode != "certify" && mode != "witness")
        throw Error(ErrorKind::config, "mode must be certify or witness");
      sc.audit.mode = mode == "certify" ? AuditMode::certify : AuditMode::witness;

      const json& solver = js.at("solver");
      sc.audit.flux_values = solver.at("flux").get<std::vector<double>>();
      const auto ri = solver.at("r_interval").get<std::vector<double>>();
      if (ri.size() != 2)
        throw Error(ErrorKind::config, "r_interval must be [lo, hi]");
      sc.audit.r_interval = {ri[0], ri[1]};

      if (js.contains("grids")) {
        const json& g = js.at("grids");
        if (g.contains("sigma")) sc.audit.sigma_grid = parse_grid(g.at("sigma"));
        if (g.contains("R_samples"))
          sc.audit.R_samples = parse_grid(g.at("R_samples"));
      }
      if (js.contains("pinch")) {
        const json& p = js.at("pinch");
        sc.audit.pinch_params.alpha = p.value("alpha", 0.0);
        sc.audit.pinch_params.beta = p.value("beta", 0.0);
        sc.audit.pinch_params.A = p.value("A", 0.0);
        sc.audit.pinch_params.B = p.value("B", 0.0);
        sc.audit.pinch_params.epsilon = p.value("epsilon", 0.0);
        sc.audit.pinch_params.a = p.value("a", 0.0);
        sc.audit.pinch_params.b = p.value("b", 0.0);
      }
      sc.audit.decay_granted = js.value("decay", "granted") == "granted";
      sc.audit.f2_R0 = js.value("f2_R0", 1.0);

      if (js.contains("expect")) {
        const json& e = js.at("expect");
        const std::string v = e.at("verdict").get<std::string>();
        if (v == "CONSTANT_FORCED") sc.expect_verdict = VerdictKind::constant_forced;
        else if (v == "HYPOTHESIS_FAILS") sc.expect_verdict = VerdictKind::hypothesis_fails;
        else if (v == "INCONSISTENT") sc.expect_verdict = VerdictKind::inconsistent;
        else throw Error(ErrorKind::config, "unknown expected verdict '" + v + "'");
        if (e.contains("failing"))
          sc.expect_failing = e.at("failing").get<std::vector<std::string>>();
      }
      scenarios.push_back(std::move(sc));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::config,
                "suite schema error in " + path + ": " + e.what());
  }
  return scenarios;
}

namespace {

ScenarioResult run_one(const Scenario& sc) {
  ScenarioResult res;
  res.id = sc.id;
  res.outcome = liouville_verdict(sc.audit);
  res.ran = true;

  // Curve audits on the first nonconstant solved map, when there is one.
  const RadialMap* audit_map = nullptr;
  RadialMap storage;
  for (const MapSummary& s : res.outcome.maps) {
    if (s.solved && s.Q != 0.0) {
      storage = solve_flux(sc.audit.profile, sc.audit.manifold, sc.audit.factor,
                           s.Q, sc.audit.r_interval);
      audit_map = &storage;
      break;
    }
  }
  if (audit_map) {
    const Interval dom = audit_map->domain();
    std::vector<double> Rs = sc.audit.R_samples;
    if (Rs.empty())
      Rs = num::log_grid(dom.lo * 1.05 + 1e-12, dom.hi * 0.95, 24);
    std::vector<double> in_dom;
    for (double R : Rs)
      if (dom.contains(R)) in_dom.push_back(R);
    if (in_dom.size() >= 8) {
      res.growth = energy_profile(*audit_map, in_dom,
                                  std::max(res.outcome.sigma, 1e-9));
      res.has_growth = true;

      const double R0 = in_dom[in_dom.size() / 4];
      const double R1 = in_dom[(3 * in_dom.size()) / 4];
      res.annulus_residual = annulus_identity_residual(*audit_map, R0, R1);

      double offset = 0.0;
      const auto lim = limit_at_infinity(*audit_map);
      if (lim.status == LimitStatus::finite) offset = -lim.value;
      std::vector<double> machinery_R(in_dom.begin() + 1, in_dom.end());
      res.machinery = upper_bound_machinery(*audit_map, *sc.audit.target,
                                            in_dom.front(), machinery_R, offset);
      res.has_machinery = true;
    }
  }

  // Expectations.
  res.expectation_met = true;
  if (sc.expect_verdict && res.outcome.verdict != *sc.expect_verdict)
    res.expectation_met = false;
  for (const std::string& name : sc.expect_failing) {
    if (std::find(res.outcome.failing.begin(), res.outcome.failing.end(), name) ==
        res.outcome.failing.end())
      res.expectation_met = false;
  }
  return res;
}

void write_reports(const Scenario& sc, const ScenarioResult& res,
                   const RunOptions& opt) {
  const fs::path dir = fs::path(opt.out_dir) / sc.id;
  fs::create_directories(dir);

  json j;
  j["id"] = sc.id;
  j["config"] = {{"profile", sc.profile_desc},
                 {"manifold", sc.manifold_desc},
                 {"factor", sc.factor_desc},
                 {"target", sc.target_desc},
                 {"theorem", to_string(sc.audit.theorem)},
                 {"mode", sc.audit.mode == AuditMode::certify ? "certify" : "witness"}};
  if (!res.error.empty()) {
    j["error"] = res.error;
  } else {
    j["verdict"] = to_string(res.outcome.verdict);
    j["failing"] = res.outcome.failing;
    j["sigma"] = res.outcome.sigma;
    j["detail"] = res.outcome.detail;
    json hs = json::array();
    for (const auto& h : res.outcome.hypotheses) hs.push_back(hypothesis_json(h));
    j["hypotheses"] = hs;
    json ms = json::array();
    for (const auto& s : res.outcome.maps) ms.push_back(map_json(s));
    j["maps"] = ms;
    if (res.has_growth) {
      j["growth"] = {{"fitted_exponent", res.growth.fitted_exponent},
                     {"fit_residual", res.growth.fit_residual},
                     {"monotone_ratio_ok", res.growth.monotone_ratio_ok},
                     {"worst_monotone_margin", res.growth.worst_monotone_margin},
                     {"H_R0", res.growth.H_R0},
                     {"R0", res.growth.R0},
                     {"pole_smooth_domain", res.growth.pole_smooth_domain}};
      j["audit_residuals"] = {
          {"annulus_identity", res.annulus_residual},
          {"annulus_identity_threshold", 1e-8 * opt.tolerance_scale}};
    }
    if (res.has_machinery) {
      j["machinery"] = {
          {"cauchy_schwarz_all_pass", res.machinery.cauchy_schwarz_all_pass},
          {"worst_cs_margin", res.machinery.worst_cs_margin},
          {"pairing_identity_residual", res.machinery.pairing_identity_residual},
          {"condition_margin_min", res.machinery.condition_margin_min},
          {"offset", res.machinery.offset}};
    }
  }
  if (sc.expect_verdict) {
    j["expected"] = {{"verdict", to_string(*sc.expect_verdict)},
                     {"failing", sc.expect_failing}};
  }
  j["expectation_met"] = res.expectation_met;

  std::ofstream(dir / "report.json") << j.dump(2) << "\n";

  if (!opt.emit_curves || res.error.size()) return;

  if (res.has_growth) {
    std::ofstream csv(dir / "curves.csv");
    csv << "R,E";
    const bool mach = res.has_machinery;
    if (mach) csv << ",Z,M,K,eta";
    csv << "\n";
    for (std::size_t i = 0; i < res.growth.R_samples.size(); ++i) {
      csv << csv_num(res.growth.R_samples[i]) << ',' << csv_num(res.growth.E_samples[i]);
      if (mach) {
        // Machinery samples start one past the growth base point.
        const auto& R = res.machinery.R;
        const auto it = std::lower_bound(R.begin(), R.end(),
                                         res.growth.R_samples[i] * (1 - 1e-12));
        if (it != R.end() &&
            std::abs(*it - res.growth.R_samples[i]) <=
                1e-9 * (1.0 + std::abs(*it))) {
          const auto k = static_cast<std::size_t>(it - R.begin());
          csv << ',' << csv_num(res.machinery.Z[k]) << ',' << csv_num(res.machinery.M[k])
              << ',' << csv_num(res.machinery.K[k]) << ',' << csv_num(res.machinery.eta[k]);
        } else {
          csv << ",,,,";
        }
      }
      csv << "\n";
    }
  }

  for (const MapSummary& s : res.outcome.maps) {
    if (!s.solved || s.Q == 0.0) continue;
    const RadialMap map = solve_flux(sc.audit.profile, sc.audit.manifold,
                                     sc.audit.factor, s.Q, sc.audit.r_interval);
    const auto rs = num::log_grid(s.domain.lo * 1.001 + 1e-12,
                                  s.domain.hi * 0.999, 128);
    std::ofstream csv(dir / ("map_Q" + csv_num(s.Q) + ".csv"));
    map.write_csv(csv, rs);
  }
}

}  // namespace

SuiteResult run_suite(const std::vector<Scenario>& scenarios,
                      const RunOptions& options, const std::string& suite_name) {
  SuiteResult suite;
  suite.suite_name = suite_name;

  std::vector<const Scenario*> selected;
  for (const Scenario& sc : scenarios)
    if (options.only_scenario.empty() || sc.id == options.only_scenario)
      selected.push_back(&sc);
  if (!options.only_scenario.empty() && selected.empty())
    throw Error(ErrorKind::config,
                "scenario id '" + options.only_scenario + "' not in suite");

  suite.results.resize(selected.size());
  std::atomic<std::size_t> next{0};
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = options.workers > 0
                               ? static_cast<unsigned>(options.workers)
                               : std::min<unsigned>(hw, selected.size());

  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= selected.size()) return;
      ScenarioResult& slot = suite.results[i];
      try {
        slot = run_one(*selected[i]);
      } catch (const Error& e) {
        slot.id = selected[i]->id;
        slot.error = std::string(to_string(e.kind())) + ": " + e.what();
        slot.expectation_met = false;
      } catch (const std::exception& e) {
        slot.id = selected[i]->id;
        slot.error = std::string("unexpected: ") + e.what();
        slot.expectation_met = false;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  // Report writing is serialized, in suite order.
  for (std::size_t i = 0; i < selected.size(); ++i) {
    write_reports(*selected[i], suite.results[i], options);
    suite.all_expectations_met =
        suite.all_expectations_met && suite.results[i].expectation_met;
  }
  return suite;
}

int run_suite_file(const std::string& path, const RunOptions& options) {
  std::vector<Scenario> scenarios;
  std::string name;
  try {
    scenarios = load_suite(path, &name);
  } catch (const Error& e) {
    fprintf(stderr, "[config] %s\n", e.what());
    return 2;
  }

  SuiteResult suite;
  try {
    suite = run_suite(scenarios, options, name);
  } catch (const Error& e) {
    fprintf(stderr, "[%s] %s\n", to_string(e.kind()), e.what());
    return e.kind() == ErrorKind::config ? 2 : 3;
  }

  json summary;
  summary["suite"] = suite.suite_name;
  bool numeric_failure = false;
  json rows = json::array();
  for (const ScenarioResult& r : suite.results) {
    json row{{"id", r.id}, {"expectation_met", r.expectation_met}};
    if (!r.error.empty()) {
      row["error"] = r.error;
      numeric_failure = true;
    } else {
      row["verdict"] = to_string(r.outcome.verdict);
      row["failing"] = r.outcome.failing;
    }
    rows.push_back(row);
    printf("[%s] %s%s%s\n", r.expectation_met ? " OK " : "FAIL", r.id.c_str(),
           r.error.empty() ? " -> " : " error: ",
           r.error.empty() ? to_string(r.outcome.verdict) : r.error.c_str());
  }
  summary["scenarios"] = rows;
  summary["all_expectations_met"] = suite.all_expectations_met;
  fs::create_directories(options.out_dir);
  std::ofstream(fs::path(options.out_dir) / "summary.json")
      << summary.dump(2) << "\n";

  if (numeric_failure) return 3;
  return suite.all_expectations_met ? 0 : 1;
}

}  // namespace fharm
