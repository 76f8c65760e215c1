#pragma once

#include <cstddef>
#include <optional>

namespace topoloc {

// Closed-form results for the clean chain (J = 1) quenched from the ground
// state at field h0 to field h.

struct CleanQuenchSpec {
  double h0 = 0.0;
  double h = 0.5;
  std::optional<std::size_t> n_sites;  // empty: thermodynamic limit

  void validate() const;
};

/// omega_p = 2 sqrt(1 - 2 h cos p + h^2).
double dispersion(double h, double p);

/// d omega_p / dp.
double group_velocity(double h, double p);

struct MaxVelocity {
  double velocity = 0.0;  // max_p |d omega_p / dp|
  double momentum = 0.0;  // argmax in [0, pi]
};

/// Numeric maximisation of |omega'_p| over p in [0, pi].
MaxVelocity max_group_velocity(double h);

/// cos Delta_p = 4 (1 + h h0 - (h + h0) cos p) / (omega_p(h) omega_p(h0)).
/// Throws std::domain_error where either dispersion closes.
double cos_angle_diff(double h0, double h, double p);
double bogoliubov_angle_diff(double h0, double h, double p);

/// Conserved quasiparticle occupation n_p = (1 - cos Delta_p) / 2.
double occupation(double h0, double h, double p);

/// Entropy (bits) of a block of D sites at time t from counting
/// quasiparticle pairs straddling the block. Requires |h|, |h0| <= 1.
double semiclassical_entropy(const CleanQuenchSpec& spec, double d, double t);

/// Exponent of ln C^xx(D, t) up to an additive constant.
double semiclassical_correlation(const CleanQuenchSpec& spec, double d, double t);

/// omega_p / T_eff(p) = ln((1 - n_p) / n_p). Returns 0 where n_p = 0.
double effective_temperature(double h0, double h, double p);

struct GgeResult {
  double inverse_xi_eff = 0.0;
  double xi_eff = 0.0;          // +inf when nothing is excited
  double entropy_density = 0.0; // bits per site, thermodynamic limit
  /// sum_p H_b(n_p) over the N antiperiodic momenta when n_sites is set,
  /// otherwise entropy_density (per site).
  double entropy_total = 0.0;
};

GgeResult gge(const CleanQuenchSpec& spec);

/// S(D, infinity) = (D / N) S_gge (bits).
double gge_block_entropy(const CleanQuenchSpec& spec, double d);

enum class StaticRegime { Perimeter, Area };

struct StaticLaw {
  StaticRegime regime = StaticRegime::Perimeter;
  double limit_correlator = 0.0;  // perimeter regime
  double wilson_coefficient = 0.0; // alpha in <W> ~ exp(-alpha D)
  double correlation_length = 0.0; // area regime
};

/// Ground-state correlator asymptotics. Throws at J == h.
StaticLaw static_laws(double coupling, double field);

/// Quasi-period N / (2 v_M) of the partial revivals on a ring of N sites.
/// Throws std::domain_error for h > 1 or h <= 0.
double revival_period(std::size_t n_sites, double h);

}  // namespace topoloc
