#include "topoloc/chain.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace topoloc {
namespace {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

void ChainSpec::validate() const {
  const std::size_t n = couplings.size();
  if (n < 2) {
    throw std::invalid_argument("ChainSpec: need at least 2 sites, got " + std::to_string(n));
  }
  if (fields.size() != n) {
    throw std::invalid_argument("ChainSpec: " + std::to_string(n) + " couplings but " +
                                std::to_string(fields.size()) + " fields");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(couplings[j]) || couplings[j] <= 0.0) {
      throw std::invalid_argument("ChainSpec: coupling " + std::to_string(j) +
                                  " must be positive and finite");
    }
    if (!std::isfinite(fields[j]) || fields[j] < 0.0) {
      throw std::invalid_argument("ChainSpec: field " + std::to_string(j) +
                                  " must be non-negative and finite");
    }
  }
}

ChainSpec ChainSpec::uniform(std::size_t n_sites, double coupling, double field) {
  ChainSpec spec{std::vector<double>(n_sites, coupling), std::vector<double>(n_sites, field)};
  spec.validate();
  return spec;
}

ChainSpec ChainSpec::with_field(double field) const {
  ChainSpec out = *this;
  out.fields.assign(out.fields.size(), field);
  out.validate();
  return out;
}

void DisorderModel::validate() const {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("DisorderModel: epsilon must lie in [0, 1) so that every J_j > 0");
  }
  if (!(base_field >= 0.0) || !std::isfinite(base_field)) {
    throw std::invalid_argument("DisorderModel: base_field must be non-negative and finite");
  }
  if (n_sites < 2) {
    throw std::invalid_argument("DisorderModel: need at least 2 sites");
  }
}

double symmetric_uniform(std::uint64_t master_seed, std::uint64_t realization,
                         std::uint64_t site) {
  std::uint64_t x = mix64(master_seed);
  x = mix64(x ^ mix64(realization ^ 0x5851f42d4c957f2dULL));
  x = mix64(x ^ mix64(site ^ 0x14057b7ef767814fULL));
  // 53 random bits -> [0, 1) -> [-1, 1)
  const double u = static_cast<double>(x >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

ChainSpec sample_chain(const DisorderModel& model, std::uint64_t realization) {
  model.validate();
  ChainSpec spec;
  spec.couplings.resize(model.n_sites);
  spec.fields.assign(model.n_sites, model.base_field);
  for (std::size_t j = 0; j < model.n_sites; ++j) {
    spec.couplings[j] =
        1.0 + model.epsilon * symmetric_uniform(model.master_seed, realization, j);
  }
  spec.validate();
  return spec;
}

}  // namespace topoloc
