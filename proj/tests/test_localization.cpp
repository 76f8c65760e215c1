#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "topoloc/chain.hpp"
#include "topoloc/freefermion.hpp"
#include "topoloc/localization.hpp"

using namespace topoloc;
using cplx = std::complex<double>;

TEST_CASE("M is symmetric with spectrum +-omega") {
  const auto spec = sample_chain(DisorderModel{0.5, 0.5, 16, 4}, 0);
  const auto m = build_m(spec);
  CHECK(m.m.rows() == 32);
  CHECK((m.m - m.m.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(m.m(0, 0) == doctest::Approx(1.0));
  CHECK(m.m(1, 1) == doctest::Approx(-1.0));

  const OneParticlePropagator prop(m);
  const auto omega = diagonalize(spec).omega;
  const Vector& lambda = prop.eigenvalues();
  for (Eigen::Index k = 0; k < 16; ++k) {
    CHECK(lambda(16 + k) == doctest::Approx(omega(k)).epsilon(1e-12));
    CHECK(lambda(15 - k) == doctest::Approx(-omega(k)).epsilon(1e-12));
  }
}

TEST_CASE("propagator blocks match the matrix exponential") {
  const auto spec = sample_chain(DisorderModel{0.5, 0.5, 10, 6}, 1);
  const auto m = build_m(spec);
  const OneParticlePropagator prop(m);
  for (double t : {0.0, 0.8, 6.5}) {
    const CMatrix exact = (cplx(0.0, -t) * m.m.cast<cplx>()).exp();
    CHECK((prop.evolution(t) - exact).cwiseAbs().maxCoeff() < 1e-11);
    for (std::size_t j : {0, 3, 9}) {
      for (std::size_t k : {0, 4, 9}) {
        const Eigen::Matrix2cd blk = exact.block(2 * static_cast<Eigen::Index>(j),
                                                 2 * static_cast<Eigen::Index>(k), 2, 2);
        CHECK((prop.block(j, k, t) - blk).cwiseAbs().maxCoeff() < 1e-11);
        CHECK(prop.block_norm(j, k, t) ==
              doctest::Approx(blk.jacobiSvd().singularValues()(0)).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("rows of the propagator stay normalized") {
  const auto spec = sample_chain(DisorderModel{0.25, 0.5, 20, 2}, 3);
  const OneParticlePropagator prop(build_m(spec));
  for (double t : {0.0, 2.0, 50.0}) {
    for (std::size_t j : {0, 11}) {
      double total = 0.0;
      for (std::size_t k = 0; k < 20; ++k) total += prop.block(j, k, t).squaredNorm();
      CHECK(total == doctest::Approx(2.0).epsilon(1e-12));
    }
  }
  CHECK(prop.block_norm(5, 5, 0.0) == doctest::Approx(1.0));
  CHECK(prop.block_norm(5, 6, 0.0) < 1e-13);
}

TEST_CASE("2x2 spectral norm") {
  Eigen::Matrix2cd a;
  a << 3.0, 0.0, 0.0, cplx(0.0, 1.0);
  CHECK(spectral_norm(a) == doctest::Approx(3.0));
  Eigen::Matrix2cd b;
  b << 1.0, 1.0, 0.0, 1.0;
  CHECK(spectral_norm(b) == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0));
  CHECK(spectral_norm(Eigen::Matrix2cd::Zero()) == 0.0);
}

TEST_CASE("sup norm over the grid agrees with direct evaluation") {
  const auto spec = sample_chain(DisorderModel{0.5, 0.5, 32, 10}, 0);
  ProbeSettings s;
  s.t_max = 4.0;
  s.distances = {0, 1, 3, 6};
  s.bulk_positions = 2;
  s.boundary_margin = 4;
  double dt = 0.0;
  const auto profile = sup_norm_single(spec, s, &dt);
  REQUIRE(profile.size() == 4);
  CHECK(dt > 0.0);

  const OneParticlePropagator prop(build_m(spec));
  CHECK(dt <= 0.1 / prop.eigenvalues().cwiseAbs().maxCoeff() + 1e-15);
  const auto steps = static_cast<int>(std::lround(s.t_max / dt));
  const std::vector<std::size_t> starts{4, 4 + (32 - 1 - 4 - 6 - 4)};
  for (std::size_t i = 0; i < s.distances.size(); ++i) {
    double expected = 0.0;
    for (std::size_t j : starts) {
      double best = 0.0;
      for (int r = 0; r <= steps; ++r) {
        best = std::max(best, prop.block_norm(j, j + s.distances[i], dt * r));
      }
      expected += best / static_cast<double>(starts.size());
    }
    CHECK(profile[i] == doctest::Approx(expected).epsilon(1e-10));
  }
  CHECK(profile[0] == doctest::Approx(1.0));
}

TEST_CASE("profile does not depend on the thread count") {
  const DisorderModel m{0.5, 0.5, 48, 17};
  ProbeSettings s;
  s.t_max = 10.0;
  s.distances = {0, 2, 4, 8};
  s.realizations = 5;
  s.threads = 1;
  const auto serial = sup_norm_profile(m, s);
  s.threads = 3;
  const auto parallel = sup_norm_profile(m, s);
  REQUIRE(serial.samples.size() == parallel.samples.size());
  for (std::size_t i = 0; i < serial.samples.size(); ++i) {
    CHECK(serial.samples[i].mean == parallel.samples[i].mean);
    CHECK(serial.samples[i].std_error == parallel.samples[i].std_error);
  }
  CHECK(serial.per_realization == parallel.per_realization);
}

TEST_CASE("probe rejects bad settings") {
  const DisorderModel m{0.5, 0.5, 20, 1};
  ProbeSettings s;
  s.distances = {};
  CHECK_THROWS_AS(sup_norm_profile(m, s), std::invalid_argument);
  s.distances = {0, 15};
  CHECK_THROWS_AS(sup_norm_profile(m, s), std::invalid_argument);
  s.distances = {0, 2};
  s.realizations = 0;
  CHECK_THROWS_AS(sup_norm_profile(m, s), std::invalid_argument);
}

TEST_CASE("decay fits recover synthetic laws") {
  std::vector<std::pair<double, double>> exponential;
  std::vector<std::pair<double, double>> stretched;
  std::vector<std::pair<double, double>> algebraic;
  for (int d = 0; d <= 30; d += 2) {
    exponential.emplace_back(d, 0.8 * std::exp(-0.15 * d));
    stretched.emplace_back(d, 1.2 * std::exp(-0.6 * std::pow(d, 0.5)));
    algebraic.emplace_back(d, std::pow(1.0 + d, -0.3));
  }
  const auto e = fit_decay(exponential);
  CHECK(e.c_fit == doctest::Approx(0.8).epsilon(1e-6));
  CHECK(e.eta_fit == doctest::Approx(0.15).epsilon(1e-6));
  CHECK(e.zeta_fit == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(e.exp_eta == doctest::Approx(0.15).epsilon(1e-10));
  CHECK(e.decay_resolved());
  CHECK_FALSE(e.exponential_rejected());

  const auto s = fit_decay(stretched);
  CHECK(s.zeta_fit == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(s.eta_fit == doctest::Approx(0.6).epsilon(1e-3));
  CHECK(s.residual < 1e-6);

  const auto a = fit_decay(algebraic);
  CHECK(a.power_alpha == doctest::Approx(0.3).epsilon(1e-10));
  CHECK(a.exponential_rejected());
}

TEST_CASE("decay fit input checks") {
  std::vector<std::pair<double, double>> few{{0, 1.0}, {1, 0.5}, {2, 0.25}};
  CHECK_THROWS_AS(fit_decay(few), std::invalid_argument);
  std::vector<std::pair<double, double>> flat;
  for (int d = 0; d < 8; ++d) flat.emplace_back(d, 0.3);
  CHECK_THROWS_AS(fit_decay(flat), std::invalid_argument);
  flat[3].second = -1.0;
  CHECK_THROWS_AS(fit_decay(flat), std::invalid_argument);
}
