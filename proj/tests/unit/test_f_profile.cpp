#include <doctest.h>

#include <cmath>

#include "fharm/errors.hpp"
#include "fharm/f_profile.hpp"

using namespace fharm;

TEST_CASE("builtin degrees match their closed forms") {
  CHECK(FProfile::p_harmonic(3.0).degrees().upper == doctest::Approx(1.5));
  CHECK(FProfile::p_harmonic(3.0).degrees().lower == doctest::Approx(1.5));
  CHECK(FProfile::minimal_graph().degrees().upper == doctest::Approx(1.0));
  CHECK(FProfile::minimal_graph().degrees().lower == doctest::Approx(0.5));
  CHECK(FProfile::harmonic().degrees().upper == 1.0);
  CHECK(std::isinf(FProfile::exponential().degrees().upper));
  CHECK(FProfile::alpha_harmonic(2.0).degrees().upper == doctest::Approx(2.0));
  CHECK(FProfile::alpha_harmonic(2.0).degrees().lower == doctest::Approx(1.0));
}

TEST_CASE("evaluate matches closed forms") {
  const auto mg = FProfile::minimal_graph();
  auto [F0, Fp0] = mg.evaluate(0.0);
  CHECK(F0 == 0.0);
  CHECK(Fp0 == 1.0);
  auto [F, Fp] = mg.evaluate(1.5);
  CHECK(F == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(Fp == doctest::Approx(0.5).epsilon(1e-15));

  const auto p2 = FProfile::p_harmonic(2.0);
  CHECK(p2.value(3.0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(p2.deriv(3.0) == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(mg.value(-0.1), Error);
}

TEST_CASE("estimate_degrees reproduces builtin degrees on the default grid") {
  const auto grid = default_degree_grid();
  const auto mg = estimate_degrees(FProfile::minimal_graph(), grid);
  CHECK(mg.upper == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(mg.lower == doctest::Approx(0.5).epsilon(1e-6));

  const auto h = estimate_degrees(FProfile::harmonic(), grid);
  CHECK(h.upper == 1.0);  // ratio is exactly constant
  CHECK(h.lower == 1.0);
}

TEST_CASE("estimate_degrees on a custom profile uses extrapolated endpoints") {
  // F(t) = t + t^2 has ratio (1+2t)/(1+t), increasing from 1 to 2.
  FProfile::CustomSpec spec;
  spec.name = "t_plus_t2";
  spec.value = [](double t) { return t + t * t; };
  spec.deriv = [](double t) { return 1.0 + 2.0 * t; };
  spec.deriv2 = [](double) { return 2.0; };
  const auto p = FProfile::custom(std::move(spec));
  const auto d = estimate_degrees(p, default_degree_grid());
  CHECK(d.upper == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(d.lower == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("degree estimation grid is validated") {
  const auto p = FProfile::harmonic();
  std::vector<double> small{1.0, 2.0, 3.0};
  CHECK_THROWS_AS(estimate_degrees(p, small), Error);
  // 64+ points over fewer than 8 decades is also rejected.
  std::vector<double> narrow;
  for (int i = 0; i < 100; ++i) narrow.push_back(1.0 + i);
  CHECK_THROWS_AS(estimate_degrees(p, narrow), Error);
}

TEST_CASE("degree_gate") {
  CHECK(degree_gate(FProfile::minimal_graph(), 3));
  CHECK_FALSE(degree_gate(FProfile::p_harmonic(3.0), 3));  // m = 2 d_F exactly
  CHECK(degree_gate(FProfile::p_harmonic(3.0), 4));
  CHECK_FALSE(degree_gate(FProfile::exponential(), 10));
  CHECK_FALSE(degree_gate(FProfile::harmonic(), 2));
}

TEST_CASE("degree ratio stays between the degrees everywhere") {
  for (const auto& p :
       {FProfile::harmonic(), FProfile::p_harmonic(1.5), FProfile::p_harmonic(4.0),
        FProfile::minimal_graph(), FProfile::alpha_harmonic(3.0)}) {
    const auto d = p.degrees();
    for (double t : default_degree_grid()) {
      const double ratio = p.degree_ratio(t);
      CHECK(ratio <= d.upper * (1 + 1e-12) + 1e-12);
      CHECK(ratio >= d.lower * (1 - 1e-12) - 1e-12);
    }
  }
}

TEST_CASE("F is increasing for every builtin") {
  for (const auto& p :
       {FProfile::harmonic(), FProfile::p_harmonic(2.5), FProfile::minimal_graph(),
        FProfile::alpha_harmonic(1.5), FProfile::exponential()}) {
    double prev = p.value(0.0);
    CHECK(prev == doctest::Approx(0.0).epsilon(1e-14));
    for (double t : default_degree_grid()) {
      const double cur = p.value(t);
      CHECK(cur > prev);
      prev = cur;
    }
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(FProfile::p_harmonic(1.0), Error);
  CHECK_THROWS_AS(FProfile::alpha_harmonic(0.5), Error);
  CHECK_THROWS_AS(FProfile::make_builtin("unknown"), Error);
  const double params[] = {3.0};
  CHECK(FProfile::make_builtin("p_harmonic", params).degrees().upper ==
        doctest::Approx(1.5));
}

TEST_CASE("unique continuation defaults") {
  CHECK(FProfile::harmonic().has_unique_continuation());
  CHECK(FProfile::minimal_graph().has_unique_continuation());
  CHECK_FALSE(FProfile::p_harmonic(3.0).has_unique_continuation());
  CHECK_FALSE(FProfile::exponential().has_unique_continuation());
}
