#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "topoloc/chain.hpp"
#include "topoloc/linalg.hpp"

namespace topoloc {

/// First-quantized BdG matrix in the basis (c+_1, c_1, ..., c+_N, c_N),
/// H = 1/2 psi^+ M psi. Diagonal blocks 2 h_j sigma^z, bond blocks -J_j S
/// and -J_j S^T with S = [[1, 1], [-1, -1]]; the wrap-around bond enters
/// with + sign.
struct OneParticleMatrix {
  Matrix m;
  ChainSpec spec;

  std::size_t n_sites() const { return spec.n_sites(); }
};

OneParticleMatrix build_m(const ChainSpec& spec);

/// exp(-i t M) through the eigendecomposition of M.
class OneParticlePropagator {
 public:
  explicit OneParticlePropagator(const OneParticleMatrix& m);

  const Vector& eigenvalues() const { return eigenvalues_; }
  const Matrix& eigenvectors() const { return eigenvectors_; }
  std::size_t n_sites() const { return static_cast<std::size_t>(eigenvalues_.size() / 2); }

  /// 2x2 entry [exp(-i t M)]_{jk}.
  Eigen::Matrix2cd block(std::size_t j, std::size_t k, double t) const;
  /// Spectral norm of block(j, k, t).
  double block_norm(std::size_t j, std::size_t k, double t) const;
  /// Full exp(-i t M).
  CMatrix evolution(double t) const;

 private:
  Vector eigenvalues_;
  Matrix eigenvectors_;
};

double propagator_block_norm(const OneParticleMatrix& m, std::size_t j, std::size_t k, double t);

/// Largest singular value of a 2x2 complex matrix.
double spectral_norm(const Eigen::Matrix2cd& block);

struct ProbeSettings {
  double t_max = 500.0;
  /// Requested grid spacing; refined per realization so that it never
  /// exceeds 0.1 / omega_max. Zero means "use 0.1 / omega_max".
  double t_step = 0.0;
  std::vector<std::size_t> distances;
  std::size_t realizations = 1;
  std::size_t bulk_positions = 4;  // starting sites j averaged per realization
  std::size_t boundary_margin = 10;
  unsigned threads = 1;
};

struct ProfileSample {
  std::size_t distance = 0;
  double mean = 0.0;       // disorder average of sup_t ||[exp(-itM)]_{j, j+d}||
  double std_error = 0.0;  // over realizations
};

struct SupNormProfile {
  std::vector<ProfileSample> samples;
  double t_max = 0.0;
  double finest_step = 0.0;  // smallest grid spacing used
  std::size_t realizations = 0;
  /// Per-realization values, [realization][distance index].
  std::vector<std::vector<double>> per_realization;
};

/// Sup over a uniform time grid on [0, t_max] of the block norm, averaged
/// over bulk sites j and realizations. Output does not depend on `threads`.
SupNormProfile sup_norm_profile(const DisorderModel& model, const ProbeSettings& settings);

/// Sup-norm profile of a single chain (one realization).
std::vector<double> sup_norm_single(const ChainSpec& spec, const ProbeSettings& settings,
                                    double* step_used = nullptr);

/// Fit of ln v(d) = ln C - eta d^zeta, with the pure exponential
/// (zeta = 1) and algebraic ln v = ln C - alpha ln(1 + d) fits reported
/// alongside.
struct DecayFit {
  double c_fit = 0.0;
  double eta_fit = 0.0;
  double zeta_fit = 1.0;
  double residual = 0.0;  // rms of ln residuals

  double exp_c = 0.0;
  double exp_eta = 0.0;
  double exp_eta_stderr = 0.0;
  double exp_residual = 0.0;

  double power_alpha = 0.0;
  double power_residual = 0.0;

  std::vector<std::pair<double, double>> samples;

  /// eta of the exponential fit is more than two standard errors above 0.
  bool decay_resolved() const { return exp_eta > 2.0 * exp_eta_stderr; }
  /// The exponential fit is at least twice as far off as the algebraic one,
  /// i.e. the profile looks ballistic rather than localized.
  bool exponential_rejected() const { return exp_residual > 2.0 * power_residual; }
};

/// Needs at least 6 positive samples that are not all equal.
DecayFit fit_decay(std::span<const std::pair<double, double>> samples);
DecayFit fit_decay(std::span<const ProfileSample> samples);

}  // namespace topoloc
