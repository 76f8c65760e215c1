#pragma once

#include <cstddef>

#include <Eigen/Sparse>

#include "topoloc/chain.hpp"
#include "topoloc/linalg.hpp"

namespace topoloc {

// Exact diagonalization of small periodic chains in the mu^z basis.
// Bit j of a basis index is 1 when mu^z_j = -1.

inline constexpr std::size_t kDenseHamiltonianMaxSites = 14;
inline constexpr std::size_t kDenseEvolutionMaxSites = 12;

enum class Parity { Even, Odd };

struct DenseState {
  CVector amplitudes;
  std::size_t n_sites = 0;
};

/// H = -sum_j J_j mu^x_j mu^x_{j+1} - sum_j h_j mu^z_j with the periodic
/// bond -J_{N-1} mu^x_{N-1} mu^x_0; sparse, 2^N x 2^N.
Eigen::SparseMatrix<double> dense_hamiltonian(const ChainSpec& spec);

/// Diagonal of P = prod_j mu^z_j.
Vector parity_diagonal(std::size_t n_sites);

struct SectorGroundState {
  DenseState state;
  double energy = 0.0;
  double sector_gap = 0.0;  // E_1 - E_0 within the sector
  bool degenerate = false;  // sector_gap < 1e-10; lowest-index eigenvector kept
};

SectorGroundState dense_ground_state(const ChainSpec& spec, Parity parity = Parity::Even);

/// Spectral-calculus time evolution, both parity sectors diagonalized once.
class DenseEvolver {
 public:
  explicit DenseEvolver(const ChainSpec& spec);

  DenseState evolve(const DenseState& state, double t) const;
  double energy(const DenseState& state) const;

 private:
  struct Block {
    std::vector<Eigen::Index> indices;
    Vector energies;
    Matrix vectors;
  };
  std::size_t n_sites_ = 0;
  Block even_;
  Block odd_;
};

DenseState dense_evolve(const DenseState& state, const ChainSpec& spec, double t);

/// Real part of <mu^x_j mu^x_l>.
double dense_correlation(const DenseState& state, std::size_t j, std::size_t l);

/// Von Neumann entropy (bits) of sites [first, first + length).
double dense_entropy(const DenseState& state, std::size_t first, std::size_t length);

}  // namespace topoloc
