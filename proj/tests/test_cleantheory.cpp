#include "doctest.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "topoloc/cleantheory.hpp"

using namespace topoloc;
using std::numbers::pi;

TEST_CASE("dispersion and group velocity") {
  CHECK(dispersion(0.5, pi) == doctest::Approx(3.0));
  CHECK(dispersion(0.5, 0.0) == doctest::Approx(1.0));
  CHECK(dispersion(0.0, 1.3) == doctest::Approx(2.0));
  const double p = 0.9;
  const double step = 1e-6;
  const double numeric = (dispersion(0.7, p + step) - dispersion(0.7, p - step)) / (2.0 * step);
  CHECK(group_velocity(0.7, p) == doctest::Approx(numeric).epsilon(1e-8));
}

TEST_CASE("maximum group velocity") {
  // v_M = 2h for h <= 1, reached at cos p = h
  const auto v = max_group_velocity(0.5);
  CHECK(v.velocity == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(v.momentum == doctest::Approx(std::acos(0.5)).epsilon(1e-6));
  CHECK(max_group_velocity(1.0).velocity == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(max_group_velocity(2.0).velocity == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("revival period") {
  CHECK(revival_period(256, 0.5) == doctest::Approx(128.0).epsilon(1e-10));
  CHECK(revival_period(1024, 0.5) == doctest::Approx(512.0).epsilon(1e-10));
  CHECK(revival_period(512, 1.0) == doctest::Approx(128.0).epsilon(1e-12));
  CHECK_THROWS_AS(revival_period(256, 1.5), std::domain_error);
  CHECK_THROWS_AS(revival_period(256, 0.0), std::domain_error);
}

TEST_CASE("Bogoliubov angle and occupation") {
  CHECK(cos_angle_diff(0.0, 0.5, pi / 2) == doctest::Approx(0.894427190999916).epsilon(1e-14));
  CHECK(occupation(0.0, 0.5, pi / 2) == doctest::Approx(0.0527864045000421).epsilon(1e-13));
  CHECK(occupation(0.4, 0.4, 1.1) == doctest::Approx(0.0));
  CHECK(bogoliubov_angle_diff(0.3, 0.3, 2.0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(cos_angle_diff(1.0, 0.5, 0.0), std::domain_error);
  // omega_p / T_eff = ln((1 - n) / n)
  const double n = occupation(0.0, 0.5, 1.0);
  CHECK(dispersion(0.5, 1.0) / effective_temperature(0.0, 0.5, 1.0) ==
        doctest::Approx(std::log((1.0 - n) / n)));
}

TEST_CASE("semiclassical integrals") {
  const CleanQuenchSpec q{0.0, 0.5, {}};
  CHECK(semiclassical_entropy(q, 20.0, 3.0) == doctest::Approx(0.961701007161601).epsilon(1e-9));
  CHECK(semiclassical_entropy(q, 128.0, 10.0) == doctest::Approx(3.205670023872003).epsilon(1e-9));
  CHECK(semiclassical_entropy(q, 20.0, 100.0) == doctest::Approx(3.864986017354008).epsilon(1e-9));
  CHECK(semiclassical_correlation(q, 20.0, 3.0) ==
        doctest::Approx(-0.355617019067733).epsilon(1e-9));
  CHECK(semiclassical_entropy(q, 20.0, 0.0) == 0.0);
  // past the light cone the correlator decays with ln((1 + sqrt(1 - h^2)) / 2) per site
  CHECK(semiclassical_correlation(q, 20.0, 1e5) / 20.0 ==
        doctest::Approx(std::log((1.0 + std::sqrt(0.75)) / 2.0)).epsilon(1e-10));
  // linear in t before the light cone reaches D
  const double s1 = semiclassical_entropy(q, 200.0, 10.0);
  const double s2 = semiclassical_entropy(q, 200.0, 20.0);
  CHECK(s2 == doctest::Approx(2.0 * s1).epsilon(1e-10));
  CHECK_THROWS_AS(semiclassical_entropy(CleanQuenchSpec{0.0, 1.5, {}}, 10.0, 1.0),
                  std::domain_error);
}

TEST_CASE("generalized Gibbs ensemble") {
  const auto g = gge(CleanQuenchSpec{0.0, 0.5, {}});
  CHECK(g.entropy_density == doctest::Approx(0.193295054075554).epsilon(1e-10));
  CHECK(g.inverse_xi_eff == doctest::Approx(0.0693364641950739).epsilon(1e-10));
  CHECK(g.inverse_xi_eff == doctest::Approx(-std::log((1.0 + std::sqrt(0.75)) / 2.0)).epsilon(1e-10));

  const auto finite = gge(CleanQuenchSpec{0.0, 0.5, 64});
  CHECK(finite.entropy_total == doctest::Approx(12.3712384137209).epsilon(1e-12));

  const auto other = gge(CleanQuenchSpec{0.3, 0.8, {}});
  CHECK(other.entropy_density == doctest::Approx(0.232295775701315).epsilon(1e-10));
  CHECK(other.inverse_xi_eff == doctest::Approx(0.0985153744896395).epsilon(1e-10));

  const auto none = gge(CleanQuenchSpec{0.5, 0.5, {}});
  CHECK(none.entropy_density == 0.0);
  CHECK(none.inverse_xi_eff == 0.0);
  CHECK(std::isinf(none.xi_eff));

  CHECK(gge_block_entropy(CleanQuenchSpec{0.0, 0.5, {}}, 20.0) ==
        doctest::Approx(20.0 * 0.193295054075554).epsilon(1e-10));
}

TEST_CASE("static laws") {
  const auto perimeter = static_laws(1.0, 0.5);
  CHECK(perimeter.regime == StaticRegime::Perimeter);
  CHECK(perimeter.limit_correlator == doctest::Approx(0.930604859102100).epsilon(1e-14));
  CHECK(perimeter.wilson_coefficient == doctest::Approx(-0.25 * std::log(0.75)));
  const auto area = static_laws(0.5, 1.0);
  CHECK(area.regime == StaticRegime::Area);
  CHECK(area.correlation_length == doctest::Approx(2.0));
  CHECK_THROWS_AS(static_laws(1.0, 1.0), std::domain_error);
}
