#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace topoloc {

/// Parity sector of the periodic spin chain. Only the sector with
/// prod_j mu^z_j = +1 is supported; it maps to antiperiodic fermions.
enum class Sector { EvenParity };

/// One periodic transverse-field Ising chain
///   H = -sum_j J_j mu^x_j mu^x_{j+1} - sum_j h_j mu^z_j,
/// where bond j joins sites j and j+1 (bond N-1 wraps to site 0).
/// Sites are 0-based throughout the library.
struct ChainSpec {
  std::vector<double> couplings;
  std::vector<double> fields;
  Sector sector = Sector::EvenParity;

  std::size_t n_sites() const { return couplings.size(); }

  /// Throws std::invalid_argument unless N >= 2, both sequences have N
  /// finite entries, every J_j > 0 and every h_j >= 0.
  void validate() const;

  static ChainSpec uniform(std::size_t n_sites, double coupling, double field);

  /// Same couplings, every field replaced by `field`.
  ChainSpec with_field(double field) const;

  bool operator==(const ChainSpec&) const = default;
};

/// Bond disorder J_j = 1 + epsilon * eta_j, eta_j ~ U[-1, 1] i.i.d.,
/// with a uniform transverse field.
struct DisorderModel {
  double epsilon = 0.0;
  double base_field = 0.5;
  std::size_t n_sites = 0;
  std::uint64_t master_seed = 0;

  /// Throws std::invalid_argument for epsilon outside [0, 1), a negative
  /// field or fewer than two sites.
  void validate() const;
};

/// Counter-based uniform draw on [-1, 1). A pure function of its three
/// keys, so realizations can be generated in any order on any thread.
double symmetric_uniform(std::uint64_t master_seed, std::uint64_t realization,
                         std::uint64_t site);

ChainSpec sample_chain(const DisorderModel& model, std::uint64_t realization);

}  // namespace topoloc
