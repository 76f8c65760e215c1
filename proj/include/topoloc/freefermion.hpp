#pragma once

#include <cstddef>

#include "topoloc/chain.hpp"
#include "topoloc/linalg.hpp"

namespace topoloc {

/// H = 1/2 sum_mn [c+_m A_mn c_n - c_m A_mn c+_n + c+_m B_mn c+_n - c_m B_mn c_n]
/// with A symmetric and B antisymmetric. No constant is dropped: the
/// quasiparticle vacuum has energy -1/2 sum_k omega_k.
struct QuadraticHamiltonian {
  Matrix a;
  Matrix b;
  ChainSpec spec;
};

/// Rows phi_k, psi_k satisfy phi_k (A - B) = omega_k psi_k and
/// psi_k (A + B) = omega_k phi_k; phi = g + h, psi = g - h in terms of the
/// Bogoliubov coefficients eta_k = sum_l g_kl c_l + h_kl c+_l.
struct BogoliubovBasis {
  Matrix phi;
  Matrix psi;
  Vector omega;              // ascending, >= 0
  std::size_t zero_modes = 0;  // count of omega_k < kZeroModeThreshold

  std::size_t n_sites() const { return static_cast<std::size_t>(omega.size()); }
  double ground_energy() const { return -0.5 * omega.sum(); }
};

inline constexpr double kZeroModeThreshold = 1e-12;

/// Heisenberg Majoranas expanded over the initial quasiparticles:
///   A_l(t) = sum_k conj(phi~_lk) eta+_k + phi~_lk eta_k
///   B_l(t) = sum_k conj(psi~_lk) eta+_k - psi~_lk eta_k
/// Row r of each matrix belongs to site first_row + r; a propagator built
/// for a window of sites only carries those rows.
struct QuenchPropagator {
  double t = 0.0;
  CMatrix phi_tilde;
  CMatrix psi_tilde;
  std::size_t first_row = 0;

  std::size_t rows() const { return static_cast<std::size_t>(phi_tilde.rows()); }
  std::size_t n_modes() const { return static_cast<std::size_t>(phi_tilde.cols()); }
  bool covers(std::size_t first_site, std::size_t count) const {
    return first_site >= first_row && first_site + count <= first_row + rows();
  }
};

QuadraticHamiltonian build_quadratic(const ChainSpec& spec);

/// SVD of (A - B) = phi^T diag(omega) psi. When zero modes are present the
/// sign of one zero-mode psi row is fixed so that det(phi) det(psi) > 0.
BogoliubovBasis diagonalize(const QuadraticHamiltonian& hamiltonian);

inline BogoliubovBasis diagonalize(const ChainSpec& spec) {
  return diagonalize(build_quadratic(spec));
}

/// Sudden quench from the vacuum of `initial` evolved under `final_basis`.
///   phi~(t) = phi_f^T cos(w t) phi_f phi_i^T - i phi_f^T sin(w t) psi_f psi_i^T
///   psi~(t) = psi_f^T cos(w t) psi_f psi_i^T - i psi_f^T sin(w t) phi_f phi_i^T
/// Caches the time-independent overlaps so repeated times are cheap.
class QuenchDynamics {
 public:
  QuenchDynamics(const BogoliubovBasis& initial, const BogoliubovBasis& final_basis);

  std::size_t n_sites() const { return static_cast<std::size_t>(omega_.size()); }

  QuenchPropagator at(double t) const { return at(t, 0, n_sites()); }
  /// Rows [first_site, first_site + count) only.
  QuenchPropagator at(double t, std::size_t first_site, std::size_t count) const;

 private:
  Matrix phi_f_t_;   // phi_f^T
  Matrix psi_f_t_;   // psi_f^T
  Matrix phi_overlap_;  // phi_f phi_i^T
  Matrix psi_overlap_;  // psi_f psi_i^T
  Vector omega_;
};

/// Throws std::invalid_argument if the bases have different sizes.
QuenchPropagator quench_propagator(const BogoliubovBasis& initial,
                                   const BogoliubovBasis& final_basis, double t);

}  // namespace topoloc
