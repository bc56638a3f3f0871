#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fharm/errors.hpp"
#include "fharm/liouville.hpp"
#include "fharm/scenario.hpp"
#include "fharm/stress_energy.hpp"

namespace py = pybind11;
using namespace fharm;

namespace {

FProfile profile_by_name(const std::string& name, py::kwargs kwargs) {
  std::vector<double> params;
  if (kwargs.contains("p")) params.push_back(kwargs["p"].cast<double>());
  if (kwargs.contains("alpha")) params.push_back(kwargs["alpha"].cast<double>());
  return FProfile::make_builtin(name, params);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Radial density-energy audit library (compiled core)";

  py::register_exception<Error>(m, "FharmError");

  py::class_<Degrees>(m, "Degrees")
      .def_readonly("upper", &Degrees::upper)
      .def_readonly("lower", &Degrees::lower)
      .def("__repr__", [](const Degrees& d) {
        return "Degrees(upper=" + std::to_string(d.upper) +
               ", lower=" + std::to_string(d.lower) + ")";
      });

  py::class_<FProfile>(m, "FProfile")
      .def_static("builtin", &profile_by_name, py::arg("name"))
      .def_static("harmonic", &FProfile::harmonic)
      .def_static("p_harmonic", &FProfile::p_harmonic, py::arg("p"))
      .def_static("minimal_graph", &FProfile::minimal_graph)
      .def_static("alpha_harmonic", &FProfile::alpha_harmonic, py::arg("alpha"))
      .def_static("exponential", &FProfile::exponential)
      .def("value", &FProfile::value, py::arg("t"))
      .def("deriv", &FProfile::deriv, py::arg("t"))
      .def("deriv2", &FProfile::deriv2, py::arg("t"))
      .def("evaluate", &FProfile::evaluate, py::arg("t"))
      .def("degree_ratio", &FProfile::degree_ratio, py::arg("t"))
      .def_property_readonly("degrees", &FProfile::degrees)
      .def_property_readonly("name", &FProfile::name)
      .def_property_readonly("has_unique_continuation",
                             &FProfile::has_unique_continuation);

  m.def("default_degree_grid", &default_degree_grid);
  m.def(
      "estimate_degrees",
      [](const FProfile& p, const std::vector<double>& grid) {
        return estimate_degrees(p, grid);
      },
      py::arg("profile"), py::arg("grid"));
  m.def("degree_gate", &degree_gate, py::arg("profile"), py::arg("m"));
  m.def("unit_sphere_area", &unit_sphere_area, py::arg("m"));

  py::enum_<FactorSign>(m, "FactorSign")
      .value("nonneg", FactorSign::nonneg)
      .value("nonpos", FactorSign::nonpos);

  py::class_<ConformalFactor>(m, "ConformalFactor")
      .def_static("one", &ConformalFactor::one)
      .def_static("from_expression", &ConformalFactor::from_expression,
                  py::arg("expr"), py::arg("sign"))
      .def_static("exp_expression", &ConformalFactor::exp_expression,
                  py::arg("g"), py::arg("sign"))
      .def("value", &ConformalFactor::value, py::arg("r"))
      .def("dlog_dr", &ConformalFactor::dlog_dr, py::arg("r"))
      .def_property_readonly("name", &ConformalFactor::name);

  py::class_<HessianData>(m, "HessianData")
      .def_readonly("lambda_min", &HessianData::lambda_min)
      .def_readonly("lambda_max", &HessianData::lambda_max);

  py::class_<ModelManifold>(m, "ModelManifold")
      .def_static("euclidean", &ModelManifold::euclidean, py::arg("m"),
                  py::arg("r_max") = 1e12)
      .def_static("hyperbolic", &ModelManifold::hyperbolic, py::arg("m"),
                  py::arg("alpha"), py::arg("r_max") = 1e12)
      .def_static("pinched_expression", &ModelManifold::pinched_expression,
                  py::arg("m"), py::arg("K"), py::arg("r_max"))
      .def_static("custom", &ModelManifold::custom, py::arg("m"),
                  py::arg("psi"), py::arg("r_max"))
      .def("psi", &ModelManifold::psi, py::arg("r"))
      .def("psi_prime", &ModelManifold::psi_prime, py::arg("r"))
      .def("radial_curvature", &ModelManifold::radial_curvature, py::arg("r"))
      .def("hessian_eigs", &ModelManifold::hessian_eigs, py::arg("r"))
      .def_property_readonly("dim", &ModelManifold::dim)
      .def_property_readonly("r_max", &ModelManifold::r_max)
      .def_property_readonly("label", &ModelManifold::label);

  m.def("boundary_area", &boundary_area, py::arg("manifold"), py::arg("factor"),
        py::arg("R"));

  py::class_<HessianComparisonRow>(m, "HessianComparisonRow")
      .def_readonly("r", &HessianComparisonRow::r)
      .def_readonly("lower", &HessianComparisonRow::lower)
      .def_readonly("value", &HessianComparisonRow::value)
      .def_readonly("upper", &HessianComparisonRow::upper)
      .def_readonly("pass_", &HessianComparisonRow::pass);

  py::class_<HessianComparisonReport>(m, "HessianComparisonReport")
      .def_readonly("rows", &HessianComparisonReport::rows)
      .def_readonly("all_pass", &HessianComparisonReport::all_pass)
      .def_readonly("worst_margin", &HessianComparisonReport::worst_margin)
      .def_readonly("worst_r", &HessianComparisonReport::worst_r);

  py::enum_<CurvatureCase>(m, "CurvatureCase")
      .value("two_sided_negative", CurvatureCase::two_sided_negative)
      .value("polynomial_decay", CurvatureCase::polynomial_decay)
      .value("inverse_square", CurvatureCase::inverse_square);

  py::class_<CurvatureCaseParams>(m, "CurvatureCaseParams")
      .def(py::init([](double alpha, double beta, double A, double B,
                       double epsilon, double a, double b) {
             return CurvatureCaseParams{alpha, beta, A, B, epsilon, a, b};
           }),
           py::arg("alpha") = 0.0, py::arg("beta") = 0.0, py::arg("A") = 0.0,
           py::arg("B") = 0.0, py::arg("epsilon") = 0.0, py::arg("a") = 0.0,
           py::arg("b") = 0.0);

  m.def(
      "check_hessian_comparison",
      [](const ModelManifold& g, CurvatureCase cc, const CurvatureCaseParams& p,
         const std::vector<double>& grid) {
        return check_hessian_comparison(g, cc, p, grid);
      },
      py::arg("manifold"), py::arg("case_"), py::arg("params"), py::arg("grid"));

  py::class_<TargetMetric>(m, "TargetMetric")
      .def_static("flat", &TargetMetric::flat, py::arg("n"))
      .def_static("power", &TargetMetric::power, py::arg("k1"), py::arg("k"),
                  py::arg("n"))
      .def_static("scalar", &TargetMetric::scalar)
      .def("matrix_condition_margin", &TargetMetric::matrix_condition_margin,
           py::arg("rho"))
      .def("norm_sq", py::overload_cast<double>(&TargetMetric::norm_sq, py::const_),
           py::arg("y"))
      .def("check_family",
           [](const TargetMetric& t) {
             const auto fc = t.check_family();
             return py::make_tuple(fc.holds, fc.paper_regime, fc.margin);
           })
      .def_property_readonly("n", &TargetMetric::n);

  py::class_<Interval>(m, "Interval")
      .def(py::init([](double lo, double hi) { return Interval{lo, hi}; }))
      .def_readonly("lo", &Interval::lo)
      .def_readonly("hi", &Interval::hi);

  py::class_<RadialMap>(m, "RadialMap")
      .def("u", &RadialMap::u, py::arg("r"))
      .def("u_prime", &RadialMap::u_prime, py::arg("r"))
      .def("energy_density", &RadialMap::energy_density, py::arg("r"))
      .def("flux_residual", &RadialMap::flux_residual, py::arg("r"))
      .def_property_readonly("flux", &RadialMap::flux)
      .def_property_readonly("domain", &RadialMap::domain)
      .def_property_readonly("is_constant", &RadialMap::is_constant)
      .def_property_readonly("truncated_lo", &RadialMap::truncated_lo)
      .def_property_readonly("truncation_reason", &RadialMap::truncation_reason);

  m.def(
      "solve_flux",
      [](const FProfile& p, const ModelManifold& g, const ConformalFactor& f,
         double Q, double r_lo, double r_hi) {
        return solve_flux(p, g, f, Q, {r_lo, r_hi});
      },
      py::arg("profile"), py::arg("manifold"), py::arg("factor"), py::arg("Q"),
      py::arg("r_lo"), py::arg("r_hi"));

  py::enum_<LimitStatus>(m, "LimitStatus")
      .value("finite", LimitStatus::finite)
      .value("divergent", LimitStatus::divergent)
      .value("undetermined", LimitStatus::undetermined);

  py::class_<LimitResult>(m, "LimitResult")
      .def_readonly("status", &LimitResult::status)
      .def_readonly("value", &LimitResult::value)
      .def_readonly("decay_exponent", &LimitResult::decay_exponent);

  m.def("limit_at_infinity", &limit_at_infinity, py::arg("map"));

  py::class_<PoleClassification>(m, "PoleClassification")
      .def_readonly("only_constant_smooth",
                    &PoleClassification::only_constant_smooth)
      .def_readonly("blowup_exponent", &PoleClassification::blowup_exponent)
      .def_readonly("note", &PoleClassification::note);

  m.def("smooth_pole_classification", &smooth_pole_classification,
        py::arg("profile"), py::arg("manifold"), py::arg("factor"),
        py::arg("Q") = 1.0);

  m.def("boundary_flux", &boundary_flux, py::arg("map"), py::arg("R"));
  m.def("interior_integral", &interior_integral, py::arg("map"), py::arg("R0"),
        py::arg("R"));
  m.def("annulus_identity_residual", &annulus_identity_residual, py::arg("map"),
        py::arg("R0"), py::arg("R"));

  py::enum_<SigmaMode>(m, "SigmaMode")
      .value("f1", SigmaMode::f1)
      .value("f1_tilde", SigmaMode::f1_tilde);

  py::class_<SigmaResult>(m, "SigmaResult")
      .def_readonly("sigma", &SigmaResult::sigma)
      .def_readonly("holds", &SigmaResult::holds)
      .def_readonly("witness_r", &SigmaResult::witness_r);

  m.def(
      "compute_sigma",
      [](const FProfile& p, const ModelManifold& g, const ConformalFactor& f,
         const std::vector<double>& grid, SigmaMode mode) {
        return compute_sigma(p, g, f, grid, mode);
      },
      py::arg("profile"), py::arg("manifold"), py::arg("factor"),
      py::arg("grid"), py::arg("mode") = SigmaMode::f1);
  m.def("default_sigma_grid", &default_sigma_grid);

  py::class_<ConditionVerdict>(m, "ConditionVerdict")
      .def_readonly("holds", &ConditionVerdict::holds)
      .def_readonly("margin", &ConditionVerdict::margin)
      .def_readonly("witness_r", &ConditionVerdict::witness_r)
      .def_readonly("detail", &ConditionVerdict::detail)
      .def_property_readonly(
          "id", [](const ConditionVerdict& v) { return to_string(v.id); });

  py::class_<F2Result>(m, "F2Result")
      .def_readonly("verdict", &F2Result::verdict)
      .def_readonly("R", &F2Result::R)
      .def_readonly("I", &F2Result::I)
      .def_readonly("C", &F2Result::C)
      .def_readonly("exponential_growth", &F2Result::exponential_growth);

  m.def(
      "check_f2",
      [](const ModelManifold& g, const ConformalFactor& f, double sigma,
         const std::vector<double>& probes, double R0) {
        return check_f2(g, f, sigma, probes, R0);
      },
      py::arg("manifold"), py::arg("factor"), py::arg("sigma"),
      py::arg("probes"), py::arg("R0") = 1.0);

  py::class_<F3Result>(m, "F3Result")
      .def_readonly("verdict", &F3Result::verdict)
      .def_readonly("R", &F3Result::R)
      .def_readonly("ratio", &F3Result::ratio)
      .def_readonly("C", &F3Result::C);

  m.def(
      "check_f3",
      [](const ModelManifold& g, const ConformalFactor& f,
         const std::vector<double>& probes) { return check_f3(g, f, probes); },
      py::arg("manifold"), py::arg("factor"), py::arg("probes"));

  py::class_<GrowthReport>(m, "GrowthReport")
      .def_readonly("R_samples", &GrowthReport::R_samples)
      .def_readonly("E_samples", &GrowthReport::E_samples)
      .def_readonly("sigma", &GrowthReport::sigma)
      .def_readonly("fitted_exponent", &GrowthReport::fitted_exponent)
      .def_readonly("monotone_ratio_ok", &GrowthReport::monotone_ratio_ok)
      .def_readonly("H_R0", &GrowthReport::H_R0);

  m.def(
      "energy_profile",
      [](const RadialMap& map, const std::vector<double>& Rs, double sigma) {
        return energy_profile(map, Rs, sigma);
      },
      py::arg("map"), py::arg("R_samples"), py::arg("sigma"));

  py::class_<UpperBoundReport>(m, "UpperBoundReport")
      .def_readonly("R", &UpperBoundReport::R)
      .def_readonly("Z", &UpperBoundReport::Z)
      .def_readonly("Zp", &UpperBoundReport::Zp)
      .def_readonly("M", &UpperBoundReport::M)
      .def_readonly("K", &UpperBoundReport::K)
      .def_readonly("eta", &UpperBoundReport::eta)
      .def_readonly("cauchy_schwarz_all_pass",
                    &UpperBoundReport::cauchy_schwarz_all_pass)
      .def_readonly("worst_cs_margin", &UpperBoundReport::worst_cs_margin);

  m.def(
      "upper_bound_machinery",
      [](const RadialMap& map, const TargetMetric& t, double R2,
         const std::vector<double>& Rs, double offset) {
        return upper_bound_machinery(map, t, R2, Rs, offset);
      },
      py::arg("map"), py::arg("target"), py::arg("R2"), py::arg("R_samples"),
      py::arg("offset") = 0.0);

  m.def(
      "right_monotone_envelope",
      [](const std::vector<double>& s) { return right_monotone_envelope(s); },
      py::arg("samples"));

  m.def(
      "run_suite_file",
      [](const std::string& path, const std::string& out_dir, bool emit_curves,
         double tolerance_scale, int workers, const std::string& scenario) {
        RunOptions opt;
        opt.out_dir = out_dir;
        opt.emit_curves = emit_curves;
        opt.tolerance_scale = tolerance_scale;
        opt.workers = workers;
        opt.only_scenario = scenario;
        return run_suite_file(path, opt);
      },
      py::arg("path"), py::arg("out_dir") = "out", py::arg("emit_curves") = true,
      py::arg("tolerance_scale") = 1.0, py::arg("workers") = 0,
      py::arg("scenario") = "");
}
