#include <doctest.h>

#include <cmath>

#include "fharm/errors.hpp"
#include "fharm/model_manifold.hpp"
#include "fharm/numerics.hpp"

using namespace fharm;

TEST_CASE("unit sphere areas") {
  CHECK(unit_sphere_area(3) == doctest::Approx(4.0 * M_PI).epsilon(1e-15));
  CHECK(unit_sphere_area(5) ==
        doctest::Approx(8.0 * M_PI * M_PI / 3.0).epsilon(1e-14));
  CHECK(unit_sphere_area(2) == doctest::Approx(2.0 * M_PI).epsilon(1e-15));
}

TEST_CASE("radial curvature of the builtin kinds") {
  const auto flat = ModelManifold::euclidean(3);
  CHECK(flat.radial_curvature(0.5) == 0.0);
  CHECK(flat.radial_curvature(17.0) == 0.0);

  const auto hyp = ModelManifold::hyperbolic(4, 2.0);
  CHECK(hyp.radial_curvature(1.0) == doctest::Approx(-4.0));

  // Profile readback: K(r) = b^2/(1+r^2) with b = 0.5 at r = 1.
  const auto pinched =
      ModelManifold::pinched_expression(3, "0.25/(1+r^2)", 3.0);
  CHECK(pinched.radial_curvature(1.0) == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("hessian eigenvalues") {
  const auto flat = ModelManifold::euclidean(4);
  const auto e = flat.hessian_eigs(5.0);
  CHECK(e.lambda_min == 2.0);
  CHECK(e.lambda_max == 2.0);

  const auto hyp = ModelManifold::hyperbolic(4, 1.0);
  const double expected = 2.0 / std::tanh(1.0);
  CHECK(hyp.hessian_eigs(1.0).lambda_min == doctest::Approx(expected).epsilon(1e-14));

  CHECK_THROWS_AS(flat.hessian_eigs(0.0), Error);
  CHECK(ModelManifold::hessian_pole_limit() == 2.0);
  // Near the pole the eigenvalue tends to the limit.
  CHECK(hyp.hessian_eigs(1e-7).lambda_min == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("pinched integration against closed forms") {
  // K = 0: psi = r.
  const auto flat = ModelManifold::pinched(3, [](double) { return 0.0; }, 10.0);
  CHECK(flat.psi(7.3) == doctest::Approx(7.3).epsilon(1e-9));

  // K = -1: psi = sinh(r).
  const auto hyp = ModelManifold::pinched(3, [](double) { return -1.0; }, 5.0);
  CHECK(hyp.psi(5.0) == doctest::Approx(std::sinh(5.0)).epsilon(1e-7));
  CHECK(hyp.psi_prime(2.5) == doctest::Approx(std::cosh(2.5)).epsilon(1e-9));

  // K = +1: psi = sin(r) vanishes at pi.
  CHECK_THROWS_AS(ModelManifold::pinched(3, [](double) { return 1.0; }, 5.0),
                  Error);
  try {
    ModelManifold::pinched(3, [](double) { return 1.0; }, 5.0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::no_pole);
    CHECK(std::string(e.what()).find("3.14") != std::string::npos);
  }
}

TEST_CASE("hessian comparison: hyperbolic equality case") {
  const auto m = ModelManifold::pinched(3, [](double) { return -1.0; }, 20.0);
  const auto grid = num::log_grid(0.05, 19.0, 200);
  const auto rep = check_hessian_comparison(
      m, CurvatureCase::two_sided_negative, {.alpha = 1.0, .beta = 1.0}, grid);
  CHECK(rep.all_pass);
  for (const auto& row : rep.rows) {
    CHECK(row.value == doctest::Approx(1.0 / std::tanh(row.r)).epsilon(1e-9));
  }
}

TEST_CASE("hessian comparison: flat case collapses to 1/r") {
  const auto m = ModelManifold::euclidean(5, 100.0);
  const auto grid = num::log_grid(0.1, 50.0, 64);
  const auto rep = check_hessian_comparison(
      m, CurvatureCase::polynomial_decay, {.A = 0.0, .B = 0.0, .epsilon = 1.0},
      grid);
  CHECK(rep.all_pass);
  for (const auto& row : rep.rows) {
    CHECK(row.lower == doctest::Approx(1.0 / row.r));
    CHECK(row.upper == doctest::Approx(1.0 / row.r));
  }
}

TEST_CASE("hessian comparison: inverse-square envelope") {
  const auto m = ModelManifold::pinched_expression(4, "-1/(1+r^2)", 25.0);
  const auto grid = num::log_grid(0.1, 20.0, 128);
  const auto rep = check_hessian_comparison(m, CurvatureCase::inverse_square,
                                            {.a = 1.0, .b = 0.0}, grid);
  CHECK(rep.all_pass);
  const double phi = 0.5 * (1.0 + std::sqrt(5.0));
  for (const auto& row : rep.rows) {
    CHECK(row.lower == doctest::Approx(1.0 / row.r));
    CHECK(row.upper == doctest::Approx(phi / row.r));
  }
}

TEST_CASE("hessian comparison certifies the curvature band first") {
  const auto hyp = ModelManifold::hyperbolic(3, 2.0, 50.0);
  const auto grid = num::log_grid(0.1, 10.0, 32);
  // K = -4 lies outside [-1, -0.25].
  CHECK_THROWS_AS(check_hessian_comparison(hyp, CurvatureCase::two_sided_negative,
                                           {.alpha = 1.0, .beta = 0.5}, grid),
                  Error);
}

TEST_CASE("boundary area") {
  const auto one = ConformalFactor::one();
  const auto m3 = ModelManifold::euclidean(3);
  CHECK(boundary_area(m3, one, 2.0) == doctest::Approx(16.0 * M_PI).epsilon(1e-14));

  const auto m5 = ModelManifold::euclidean(5);
  CHECK(boundary_area(m5, one, 1.0) ==
        doctest::Approx(8.0 * M_PI * M_PI / 3.0).epsilon(1e-14));

  const auto f = ConformalFactor::from_expression("1+r", FactorSign::nonneg);
  CHECK(boundary_area(m3, f, 2.0) == doctest::Approx(48.0 * M_PI).epsilon(1e-13));

  // Log form stays finite where the direct form overflows.
  const auto hyp = ModelManifold::hyperbolic(3, 1.0);
  CHECK(std::isfinite(log_boundary_area(hyp, one, 2000.0)));
  CHECK(log_boundary_area(hyp, one, 10.0) ==
        doctest::Approx(std::log(unit_sphere_area(3)) + 2.0 * std::log(std::sinh(10.0)))
            .epsilon(1e-12));
}

TEST_CASE("conformal factor validation") {
  CHECK_THROWS_AS(
      ConformalFactor::from_expression("1+r", FactorSign::nonpos), Error);
  CHECK_THROWS_AS(
      ConformalFactor::from_expression("r-100", FactorSign::nonneg), Error);
  const auto f =
      ConformalFactor::from_expression("(1+r^2)^(-0.5)", FactorSign::nonpos);
  CHECK(f.dlog_dr(1.0) == doctest::Approx(-0.5));
  CHECK(f.value(2.0) == doctest::Approx(1.0 / std::sqrt(5.0)));
}

TEST_CASE("custom warping function via expression") {
  const auto m = ModelManifold::custom(3, "r*(1+0.01*r^2)", 10.0);
  CHECK(m.psi(2.0) == doctest::Approx(2.0 * 1.04));
  // K = -psi''/psi = -0.06 r / (r (1+0.01 r^2)).
  CHECK(m.radial_curvature(2.0) == doctest::Approx(-0.06 / 1.04).epsilon(1e-12));
  CHECK_THROWS_AS(ModelManifold::custom(3, "r^2", 10.0), Error);
  CHECK_THROWS_AS(ModelManifold::euclidean(2), Error);
}

TEST_CASE("working interval is enforced") {
  const auto m = ModelManifold::pinched(3, [](double) { return 0.0; }, 5.0);
  CHECK_THROWS_AS(m.psi(6.0), Error);
  CHECK_THROWS_AS(m.radial_curvature(-1.0), Error);
}

TEST_CASE("curvature table kind") {
  const auto m = ModelManifold::pinched_table(
      3, {{0.0, -1.0}, {10.0, -1.0}}, 5.0);
  CHECK(m.psi(3.0) == doctest::Approx(std::sinh(3.0)).epsilon(1e-8));
  CHECK(m.radial_curvature(2.0) == doctest::Approx(-1.0));
}
