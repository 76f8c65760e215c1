#include "topoloc/oracle.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace topoloc {
namespace {

using Index = std::uint64_t;

void require_sites(const ChainSpec& spec, std::size_t limit, const char* who) {
  spec.validate();
  if (spec.n_sites() > limit) {
    throw std::invalid_argument(std::string(who) + ": N = " + std::to_string(spec.n_sites()) +
                                " exceeds the dense limit " + std::to_string(limit));
  }
}

double diagonal_energy(const ChainSpec& spec, Index state) {
  double e = 0.0;
  for (std::size_t j = 0; j < spec.n_sites(); ++j) {
    e -= spec.fields[j] * (((state >> j) & 1U) ? -1.0 : 1.0);
  }
  return e;
}

Index bond_mask(std::size_t j, std::size_t n) {
  return (Index{1} << j) | (Index{1} << ((j + 1) % n));
}

std::vector<Eigen::Index> sector_indices(std::size_t n, Parity parity) {
  std::vector<Eigen::Index> out;
  const Index dim = Index{1} << n;
  const int want = parity == Parity::Even ? 0 : 1;
  for (Index i = 0; i < dim; ++i) {
    if (std::popcount(i) % 2 == want) out.push_back(static_cast<Eigen::Index>(i));
  }
  return out;
}

Matrix sector_hamiltonian(const ChainSpec& spec, const std::vector<Eigen::Index>& indices) {
  const std::size_t n = spec.n_sites();
  std::vector<Eigen::Index> position(std::size_t{1} << n, -1);
  for (std::size_t a = 0; a < indices.size(); ++a) {
    position[static_cast<std::size_t>(indices[a])] = static_cast<Eigen::Index>(a);
  }
  const auto dim = static_cast<Eigen::Index>(indices.size());
  Matrix h = Matrix::Zero(dim, dim);
  for (Eigen::Index a = 0; a < dim; ++a) {
    const auto state = static_cast<Index>(indices[static_cast<std::size_t>(a)]);
    h(a, a) = diagonal_energy(spec, state);
    for (std::size_t j = 0; j < n; ++j) {
      const Eigen::Index b = position[static_cast<std::size_t>(state ^ bond_mask(j, n))];
      h(b, a) -= spec.couplings[j];
    }
  }
  return h;
}

}  // namespace

Eigen::SparseMatrix<double> dense_hamiltonian(const ChainSpec& spec) {
  require_sites(spec, kDenseHamiltonianMaxSites, "dense_hamiltonian");
  const std::size_t n = spec.n_sites();
  const Index dim = Index{1} << n;
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(dim) * (n + 1));
  for (Index i = 0; i < dim; ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    entries.emplace_back(row, row, diagonal_energy(spec, i));
    for (std::size_t j = 0; j < n; ++j) {
      entries.emplace_back(static_cast<Eigen::Index>(i ^ bond_mask(j, n)), row, -spec.couplings[j]);
    }
  }
  Eigen::SparseMatrix<double> h(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  h.setFromTriplets(entries.begin(), entries.end());
  return h;
}

Vector parity_diagonal(std::size_t n_sites) {
  const Index dim = Index{1} << n_sites;
  Vector p(static_cast<Eigen::Index>(dim));
  for (Index i = 0; i < dim; ++i) p(static_cast<Eigen::Index>(i)) = std::popcount(i) % 2 ? -1.0 : 1.0;
  return p;
}

SectorGroundState dense_ground_state(const ChainSpec& spec, Parity parity) {
  require_sites(spec, kDenseEvolutionMaxSites, "dense_ground_state");
  const std::size_t n = spec.n_sites();
  const auto indices = sector_indices(n, parity);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sector_hamiltonian(spec, indices));
  if (solver.info() != Eigen::Success) throw std::runtime_error("dense_ground_state: eigensolver failed");

  SectorGroundState out;
  out.energy = solver.eigenvalues()(0);
  out.sector_gap = solver.eigenvalues().size() > 1 ? solver.eigenvalues()(1) - out.energy : 0.0;
  out.degenerate = out.sector_gap < 1e-10;
  out.state.n_sites = n;
  out.state.amplitudes = CVector::Zero(static_cast<Eigen::Index>(Index{1} << n));
  for (std::size_t a = 0; a < indices.size(); ++a) {
    out.state.amplitudes(indices[a]) = solver.eigenvectors()(static_cast<Eigen::Index>(a), 0);
  }
  return out;
}

DenseEvolver::DenseEvolver(const ChainSpec& spec) : n_sites_(spec.n_sites()) {
  require_sites(spec, kDenseEvolutionMaxSites, "DenseEvolver");
  for (Block* block : {&even_, &odd_}) {
    block->indices = sector_indices(n_sites_, block == &even_ ? Parity::Even : Parity::Odd);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sector_hamiltonian(spec, block->indices));
    if (solver.info() != Eigen::Success) throw std::runtime_error("DenseEvolver: eigensolver failed");
    block->energies = solver.eigenvalues();
    block->vectors = solver.eigenvectors();
  }
}

DenseState DenseEvolver::evolve(const DenseState& state, double t) const {
  if (state.n_sites != n_sites_) throw std::invalid_argument("DenseEvolver: size mismatch");
  DenseState out{CVector::Zero(state.amplitudes.size()), n_sites_};
  for (const Block* block : {&even_, &odd_}) {
    const auto dim = static_cast<Eigen::Index>(block->indices.size());
    CVector local(dim);
    for (Eigen::Index a = 0; a < dim; ++a) local(a) = state.amplitudes(block->indices[static_cast<std::size_t>(a)]);
    CVector coeff = block->vectors.transpose().cast<std::complex<double>>() * local;
    for (Eigen::Index k = 0; k < dim; ++k) {
      coeff(k) *= std::polar(1.0, -block->energies(k) * t);
    }
    local = block->vectors.cast<std::complex<double>>() * coeff;
    for (Eigen::Index a = 0; a < dim; ++a) out.amplitudes(block->indices[static_cast<std::size_t>(a)]) = local(a);
  }
  return out;
}

double DenseEvolver::energy(const DenseState& state) const {
  double e = 0.0;
  for (const Block* block : {&even_, &odd_}) {
    const auto dim = static_cast<Eigen::Index>(block->indices.size());
    CVector local(dim);
    for (Eigen::Index a = 0; a < dim; ++a) local(a) = state.amplitudes(block->indices[static_cast<std::size_t>(a)]);
    const CVector coeff = block->vectors.transpose().cast<std::complex<double>>() * local;
    e += (coeff.cwiseAbs2().array() * block->energies.array()).sum();
  }
  return e;
}

DenseState dense_evolve(const DenseState& state, const ChainSpec& spec, double t) {
  return DenseEvolver(spec).evolve(state, t);
}

double dense_correlation(const DenseState& state, std::size_t j, std::size_t l) {
  if (j >= state.n_sites || l >= state.n_sites) throw std::out_of_range("dense_correlation: site out of range");
  const Index mask = (Index{1} << j) ^ (Index{1} << l);
  std::complex<double> acc = 0.0;
  const auto dim = state.amplitudes.size();
  for (Eigen::Index i = 0; i < dim; ++i) {
    acc += std::conj(state.amplitudes(i)) * state.amplitudes(static_cast<Eigen::Index>(static_cast<Index>(i) ^ mask));
  }
  return acc.real();
}

double dense_entropy(const DenseState& state, std::size_t first, std::size_t length) {
  const std::size_t n = state.n_sites;
  if (length == 0 || first + length > n) throw std::out_of_range("dense_entropy: bad subsystem");
  const Index sub_dim = Index{1} << length;
  const Index env_dim = Index{1} << (n - length);
  const Index low_mask = (Index{1} << first) - 1;
  CMatrix psi = CMatrix::Zero(static_cast<Eigen::Index>(sub_dim), static_cast<Eigen::Index>(env_dim));
  for (Index i = 0; i < (Index{1} << n); ++i) {
    const Index sub = (i >> first) & (sub_dim - 1);
    const Index env = (i & low_mask) | ((i >> (first + length)) << first);
    psi(static_cast<Eigen::Index>(sub), static_cast<Eigen::Index>(env)) = state.amplitudes(static_cast<Eigen::Index>(i));
  }
  Eigen::BDCSVD<CMatrix> svd(psi);
  double s = 0.0;
  for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
    const double p = svd.singularValues()(k) * svd.singularValues()(k);
    if (p > 0.0) s -= p * std::log2(p);
  }
  return s;
}

}  // namespace topoloc
