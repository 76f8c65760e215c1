#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "topoloc/assembly2d.hpp"
#include "topoloc/chain.hpp"
#include "topoloc/freefermion.hpp"
#include "topoloc/observables.hpp"

using namespace topoloc;

TEST_CASE("Wilson loop is the product of row correlators") {
  const std::vector<double> rows{0.5, 0.25, 0.8};
  const auto w = wilson_loop(rows);
  CHECK(w.d == 3);
  CHECK_FALSE(w.vanished);
  CHECK(w.log_value == doctest::Approx(std::log(0.1)));
  CHECK(w.per_row_factors == rows);

  const std::vector<double> broken{0.5, 0.0, 0.8};
  const auto v = wilson_loop(broken);
  CHECK(v.vanished);
  CHECK(std::isinf(v.log_value));
  CHECK(v.log_value < 0.0);
  CHECK_THROWS_AS(wilson_loop(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("all-GHZ rows give the topological deficit") {
  for (std::size_t m : {1, 4, 16}) {
    const std::vector<double> rows(2 * m, 1.0);
    const auto x = assemble_entropy(rows, TopologicalSector::XSector);
    const auto z = assemble_entropy(rows, TopologicalSector::ZSector);
    CHECK(x.m_rows == m);
    CHECK(x.total_bits == 2.0 * m);
    CHECK(z.total_bits == 2.0 * m - 1.0);
    CHECK(z.gamma_topo == 1.0);
    CHECK(x.gamma_topo == 0.0);
  }
  CHECK_THROWS_AS(assemble_entropy(std::vector<double>{1.0, 1.0, 1.0}, TopologicalSector::XSector),
                  std::invalid_argument);
  CHECK_THROWS_AS(assemble_entropy(std::vector<double>{1.0, -1.0}, TopologicalSector::XSector),
                  std::invalid_argument);
}

TEST_CASE("row entropies from the static GHZ chains") {
  const auto chain = ChainSpec::uniform(24, 1.0, 0.0);
  const auto basis = diagonalize(chain);
  const auto prop = quench_propagator(basis, basis, 0.0);
  std::vector<double> rows;
  for (int r = 0; r < 6; ++r) rows.push_back(entanglement_entropy(prop, 0, 12).bits);
  const auto z = assemble_entropy(rows, TopologicalSector::ZSector);
  CHECK(z.total_bits == doctest::Approx(5.0).epsilon(1e-10));
  CHECK(z.gamma_topo == doctest::Approx(1.0));
}

TEST_CASE("perimeter and area fits recover their coefficients") {
  std::vector<double> sides;
  std::vector<double> perimeter;
  std::vector<double> area;
  for (int d = 1; d <= 12; ++d) {
    sides.push_back(d);
    perimeter.push_back(-0.07 * d);
    area.push_back(-0.3 * d * d);
  }
  const auto p = fit_perimeter_area(sides, perimeter);
  CHECK(p.perimeter == doctest::Approx(0.07).epsilon(1e-10));
  CHECK(std::abs(p.area) < 1e-12);
  CHECK(p.rms_residual < 1e-12);
  const auto a = fit_perimeter_area(sides, area);
  CHECK(std::abs(a.perimeter) < 1e-10);
  CHECK(a.area == doctest::Approx(0.3).epsilon(1e-10));
  CHECK_THROWS_AS(fit_perimeter_area(std::vector<double>{1.0}, std::vector<double>{0.0}),
                  std::invalid_argument);
}

TEST_CASE("clean static chains obey the perimeter law") {
  // J = 1, h = 0.5: each row correlator tends to (1 - h^2)^(1/4).
  const auto chain = ChainSpec::uniform(200, 1.0, 0.5);
  const auto basis = diagonalize(chain);
  const auto prop = quench_propagator(basis, basis, 0.0);
  std::vector<double> sides;
  std::vector<double> logs;
  for (std::size_t d = 20; d <= 40; d += 4) {
    const double c = correlation_xx(prop, 10, 10 + d).magnitude;
    logs.push_back(wilson_loop(std::vector<double>(d, c)).log_value);
    sides.push_back(static_cast<double>(d));
  }
  const auto fit = fit_perimeter_area(sides, logs);
  CHECK(fit.perimeter == doctest::Approx(-std::log(std::pow(0.75, 0.25))).epsilon(1e-4));
  CHECK(std::abs(fit.area) < 1e-6);
}
