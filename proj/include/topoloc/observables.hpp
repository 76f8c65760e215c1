#pragma once

#include <cstddef>
#include <vector>

#include "topoloc/freefermion.hpp"
#include "topoloc/linalg.hpp"

namespace topoloc {

/// Equal-time two-point functions of the Heisenberg Majoranas over the
/// propagator's row window (indices are relative to first_site):
///   aa = <A_m A_n> = phi~ phi~^+      bb = <B_m B_n> = -psi~ psi~^+
///   ab = <A_m B_n> = phi~ psi~^+      ba = <B_m A_n> = -psi~ phi~^+
struct TwoPointBlocks {
  CMatrix aa;
  CMatrix bb;
  CMatrix ab;
  CMatrix ba;
  std::size_t first_site = 0;
};

TwoPointBlocks two_point_blocks(const QuenchPropagator& prop);

/// Real antisymmetric covariance of the 2L Majoranas d_{2l} = A_l,
/// d_{2l+1} = i B_l of a contiguous block: <d_m d_n> = delta_mn + i Gamma_mn.
struct MajoranaCorrelation {
  Matrix gamma;
  double t = 0.0;
  std::size_t first = 0;
  std::size_t length = 0;
};

MajoranaCorrelation majorana_correlation(const QuenchPropagator& prop, std::size_t first,
                                         std::size_t length);

struct CorrelationResult {
  std::size_t d = 0;
  double magnitude = 0.0;  // |<mu^x_j mu^x_l>|
  double t = 0.0;
  double det = 0.0;        // raw determinant before clamping
};

/// Tolerances for round-off in the correlation determinant and the
/// Majorana spectrum.
inline constexpr double kDetTolerance = 1e-8;
inline constexpr double kNuTolerance = 1e-6;

/// |<mu^x_j mu^x_l>| = sqrt(det Gamma(j, l, t)) for j < l, where Gamma is the
/// 2D x 2D contraction matrix of the string B_j A_{j+1} B_{j+1} ... B_{l-1} A_l.
/// Throws std::runtime_error if det < -kDetTolerance.
CorrelationResult correlation_xx(const QuenchPropagator& prop, std::size_t j, std::size_t l);

struct EntropyResult {
  std::size_t l = 0;
  double bits = 0.0;
  std::vector<double> nu;  // ascending, clamped to [0, 1]
  double max_raw_nu = 0.0;
};

/// Von Neumann entropy (bits) of sites [first, first + length).
/// Throws std::runtime_error if some nu exceeds 1 + kNuTolerance.
EntropyResult entanglement_entropy(const QuenchPropagator& prop, std::size_t first,
                                   std::size_t length);

/// -x log2 x - (1 - x) log2 (1 - x). Throws std::domain_error outside [0, 1].
double binary_entropy(double x);

/// Entropy from a set of Majorana eigenvalues nu_m.
double entropy_from_spectrum(const std::vector<double>& nu);

}  // namespace topoloc
