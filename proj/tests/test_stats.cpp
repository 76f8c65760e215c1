#include "doctest.h"

#include <cmath>
#include <vector>

#include "topoloc/stats.hpp"

using namespace topoloc;

TEST_CASE("mean and jackknife error of the mean") {
  const std::vector<double> x{1.0, 2.0, 4.0, 7.0};
  CHECK(mean(x) == doctest::Approx(3.5));
  // sample sd sqrt(7) over sqrt(4)
  CHECK(jackknife_standard_error(x) == doctest::Approx(std::sqrt(7.0) / 2.0));
  CHECK(jackknife_standard_error(std::vector<double>{3.0}) == 0.0);
}

TEST_CASE("generic jackknife reduces to the closed form for the mean") {
  const std::vector<double> x{0.3, -1.2, 2.5, 0.9, 0.0, 4.1};
  const double generic = jackknife_standard_error(x, [](std::span<const double> v) { return mean(v); });
  CHECK(generic == doctest::Approx(jackknife_standard_error(x)).epsilon(1e-12));
}
