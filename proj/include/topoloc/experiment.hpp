#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "topoloc/assembly2d.hpp"
#include "topoloc/chain.hpp"

namespace topoloc {

enum class ExperimentKind {
  QuenchClean,
  DisorderSweep,
  WilsonLoop,
  Entropy2D,
  LocalizationProbe,
  OracleCheck,
  CleanAnalytics,
};

enum class EntropyBase { Bits, Nats };

/// Raised for malformed or inconsistent configuration; key() names the
/// offending entry.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& message);
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::QuenchClean;
  std::size_t n_sites = 256;
  double h = 0.5;
  double h0 = 0.0;
  std::vector<double> epsilon_list{0.0};
  std::vector<double> t_list;  // takes precedence over t_max / t_step
  double t_max = 0.0;
  double t_step = 0.0;
  std::vector<std::size_t> d_list;
  std::size_t realizations = 1;
  std::uint64_t master_seed = 0;
  std::string output_path = "results";
  EntropyBase entropy_base = EntropyBase::Bits;
  std::size_t m_rows = 4;  // Entropy2D: 2M chain rows
  TopologicalSector sector = TopologicalSector::ZSector;
  std::size_t bulk_positions = 4;  // LocalizationProbe
  std::vector<std::size_t> n_sites_list{6, 8, 10};  // OracleCheck
  unsigned threads = 1;  // not a config key; set from the command line

  /// Times from t_list, or 0, t_step, ..., t_max.
  std::vector<double> times() const;
  /// Throws ConfigError naming the first offending key.
  void validate() const;
};

/// Flat "key = value" text; '#' starts a comment, lists are comma separated.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Applies one "key=value" override.
void apply_override(ExperimentConfig& config, const std::string& assignment);
/// Canonical key/value form of every config key.
std::map<std::string, std::string> config_entries(const ExperimentConfig& config);

std::string to_string(ExperimentKind kind);

/// One line of an output table.
struct TableRow {
  double epsilon = 0.0;
  std::size_t realization_count = 0;
  double t = 0.0;
  std::size_t d_or_l = 0;
  double mean = 0.0;
  double std_error = 0.0;
};

/// Header "epsilon,realization_count,t,D_or_L,mean,std_error", numbers with
/// 12 significant digits.
void write_table(std::ostream& out, std::span<const TableRow> rows);

/// Worst-case round-off seen by the determinant and entropy kernels.
struct Hygiene {
  double min_det = std::numeric_limits<double>::infinity();
  double max_nu = 0.0;
  std::size_t evaluations = 0;

  void merge(const Hygiene& other);
};

struct QuenchSettings {
  std::size_t n_sites = 0;
  double h = 0.5;
  double h0 = 0.0;
  double epsilon = 0.0;
  std::size_t realizations = 1;
  std::uint64_t master_seed = 0;
  std::vector<double> times;
  std::vector<std::size_t> distances;
  unsigned threads = 1;
};

/// Disorder-averaged |C^xx(D)| between sites 0 and D and S(L) of sites
/// [0, L) after the quench h0 -> h with bond disorder epsilon. Entropies
/// in bits. Realizations run concurrently; results do not depend on the
/// thread count.
struct QuenchSweep {
  std::vector<TableRow> correlation;
  std::vector<TableRow> entropy;
  Hygiene hygiene;
};

QuenchSweep quench_sweep(const QuenchSettings& settings);

/// Largest |free fermion - exact diagonalization| deviation over all
/// correlators from site 0 and all blocks [0, L), L <= N / 2.
struct OracleComparison {
  double max_correlation_deviation = 0.0;
  double max_entropy_deviation = 0.0;
  std::vector<double> correlation_deviation_at;  // per time
  std::vector<double> entropy_deviation_at;
  Hygiene hygiene;
};

OracleComparison compare_with_oracle(const ChainSpec& initial, const ChainSpec& final_chain,
                                     std::span<const double> times);

struct RunResult {
  std::filesystem::path directory;
  std::vector<std::filesystem::path> tables;
  std::filesystem::path manifest;
  bool passed = true;  // OracleCheck verdict; true otherwise
};

/// Runs the experiment, writing CSV tables and manifest.json into
/// config.output_path. Progress lines go to `log`.
RunResult run_experiment(const ExperimentConfig& config, std::ostream& log);

}  // namespace topoloc
