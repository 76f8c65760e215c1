#include "topoloc/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "topoloc/cleantheory.hpp"
#include "topoloc/freefermion.hpp"
#include "topoloc/localization.hpp"
#include "topoloc/observables.hpp"
#include "topoloc/oracle.hpp"
#include "topoloc/parallel.hpp"
#include "topoloc/stats.hpp"

namespace topoloc {
namespace {

using json = nlohmann::ordered_json;

constexpr double kOracleCorrelationTolerance = 1e-8;
constexpr double kOracleEntropyTolerance = 1e-7;

const std::vector<std::pair<std::string, ExperimentKind>>& kind_names() {
  static const std::vector<std::pair<std::string, ExperimentKind>> names{
      {"QuenchClean", ExperimentKind::QuenchClean},
      {"DisorderSweep", ExperimentKind::DisorderSweep},
      {"WilsonLoop", ExperimentKind::WilsonLoop},
      {"Entropy2D", ExperimentKind::Entropy2D},
      {"LocalizationProbe", ExperimentKind::LocalizationProbe},
      {"OracleCheck", ExperimentKind::OracleCheck},
      {"CleanAnalytics", ExperimentKind::CleanAnalytics},
  };
  return names;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a number, got '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(value)) {
    throw ConfigError(key, "expected a finite number, got '" + text + "'");
  }
  return value;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw ConfigError(key, "expected a non-negative integer, got '" + text + "'");
  }
  try {
    return std::stoull(text);
  } catch (const std::exception&) {
    throw ConfigError(key, "integer out of range: '" + text + "'");
  }
}

std::vector<std::string> split_list(const std::string& key, const std::string& text) {
  std::vector<std::string> items;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError(key, "empty list entry in '" + text + "'");
    items.push_back(item);
  }
  if (items.empty()) throw ConfigError(key, "list is empty");
  return items;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_list(key, text)) out.push_back(parse_double(key, item));
  return out;
}

std::vector<std::size_t> parse_size_list(const std::string& key, const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& item : split_list(key, text)) out.push_back(parse_unsigned(key, item));
  return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table{
      {"experiment",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         for (const auto& [name, kind] : kind_names()) {
           if (name == v) {
             c.experiment = kind;
             return;
           }
         }
         throw ConfigError(k, "unknown experiment '" + v + "'");
       }},
      {"n_sites", [](ExperimentConfig& c, const std::string& k,
                     const std::string& v) { c.n_sites = parse_unsigned(k, v); }},
      {"h", [](ExperimentConfig& c, const std::string& k,
               const std::string& v) { c.h = parse_double(k, v); }},
      {"h0", [](ExperimentConfig& c, const std::string& k,
                const std::string& v) { c.h0 = parse_double(k, v); }},
      {"epsilon_list", [](ExperimentConfig& c, const std::string& k,
                          const std::string& v) { c.epsilon_list = parse_double_list(k, v); }},
      {"t_list", [](ExperimentConfig& c, const std::string& k,
                    const std::string& v) { c.t_list = parse_double_list(k, v); }},
      {"t_max", [](ExperimentConfig& c, const std::string& k,
                   const std::string& v) { c.t_max = parse_double(k, v); }},
      {"t_step", [](ExperimentConfig& c, const std::string& k,
                    const std::string& v) { c.t_step = parse_double(k, v); }},
      {"d_list", [](ExperimentConfig& c, const std::string& k,
                    const std::string& v) { c.d_list = parse_size_list(k, v); }},
      {"realizations", [](ExperimentConfig& c, const std::string& k,
                          const std::string& v) { c.realizations = parse_unsigned(k, v); }},
      {"master_seed", [](ExperimentConfig& c, const std::string& k,
                         const std::string& v) { c.master_seed = parse_unsigned(k, v); }},
      {"output_path", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         if (v.empty()) throw ConfigError(k, "empty path");
         c.output_path = v;
       }},
      {"entropy_base",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         if (v == "bits") {
           c.entropy_base = EntropyBase::Bits;
         } else if (v == "nats") {
           c.entropy_base = EntropyBase::Nats;
         } else {
           throw ConfigError(k, "expected 'bits' or 'nats', got '" + v + "'");
         }
       }},
      {"m_rows", [](ExperimentConfig& c, const std::string& k,
                    const std::string& v) { c.m_rows = parse_unsigned(k, v); }},
      {"sector",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         if (v == "x") {
           c.sector = TopologicalSector::XSector;
         } else if (v == "z") {
           c.sector = TopologicalSector::ZSector;
         } else {
           throw ConfigError(k, "expected 'x' or 'z', got '" + v + "'");
         }
       }},
      {"bulk_positions", [](ExperimentConfig& c, const std::string& k,
                            const std::string& v) { c.bulk_positions = parse_unsigned(k, v); }},
      {"n_sites_list", [](ExperimentConfig& c, const std::string& k,
                          const std::string& v) { c.n_sites_list = parse_size_list(k, v); }},
  };
  return table;
}

void set_entry(ExperimentConfig& config, const std::string& key, const std::string& value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw ConfigError(key, "unknown key");
  it->second(config, key, value);
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

template <class T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    if constexpr (std::is_floating_point_v<T>) {
      out += format_number(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

std::pair<double, double> mean_and_error(std::span<const double> values) {
  return {mean(values), jackknife_standard_error(values)};
}

}  // namespace

ConfigError::ConfigError(std::string key, const std::string& message)
    : std::invalid_argument("config key '" + key + "': " + message), key_(std::move(key)) {}

std::string to_string(ExperimentKind kind) {
  for (const auto& [name, k] : kind_names()) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::vector<double> ExperimentConfig::times() const {
  if (!t_list.empty()) return t_list;
  if (t_step > 0.0) {
    const auto steps = static_cast<std::size_t>(std::llround(t_max / t_step));
    std::vector<double> out;
    for (std::size_t i = 0; i <= steps; ++i) out.push_back(t_step * static_cast<double>(i));
    return out;
  }
  return {t_max};
}

void ExperimentConfig::validate() const {
  const bool oracle = experiment == ExperimentKind::OracleCheck;
  const bool analytics = experiment == ExperimentKind::CleanAnalytics;
  if (!oracle && n_sites < 4) throw ConfigError("n_sites", "need at least 4 sites");
  if (!(h >= 0.0)) throw ConfigError("h", "must be >= 0");
  if (!(h0 >= 0.0)) throw ConfigError("h0", "must be >= 0");
  if (epsilon_list.empty()) throw ConfigError("epsilon_list", "list is empty");
  for (const double e : epsilon_list) {
    if (!(e >= 0.0 && e < 1.0)) throw ConfigError("epsilon_list", "entries must lie in [0, 1)");
  }
  if (realizations < 1) throw ConfigError("realizations", "must be >= 1");
  if (t_max < 0.0) throw ConfigError("t_max", "must be >= 0");
  if (t_step < 0.0) throw ConfigError("t_step", "must be >= 0");
  for (const double t : t_list) {
    if (t < 0.0) throw ConfigError("t_list", "times must be >= 0");
  }
  if (experiment == ExperimentKind::LocalizationProbe) {
    if (!(t_max > 0.0)) throw ConfigError("t_max", "LocalizationProbe needs t_max > 0");
    if (bulk_positions < 1) throw ConfigError("bulk_positions", "must be >= 1");
  } else if (t_list.empty() && t_max == 0.0 && t_step == 0.0) {
    throw ConfigError("t_list", "give t_list or t_max");
  }
  if (oracle) {
    if (n_sites_list.empty()) throw ConfigError("n_sites_list", "list is empty");
    for (const std::size_t n : n_sites_list) {
      if (n < 2 || n > kDenseEvolutionMaxSites) {
        throw ConfigError("n_sites_list",
                          "sizes must lie in [2, " + std::to_string(kDenseEvolutionMaxSites) + "]");
      }
    }
    return;
  }
  if (d_list.empty()) throw ConfigError("d_list", "list is empty");
  for (const std::size_t d : d_list) {
    if (d < 1 && experiment != ExperimentKind::LocalizationProbe) {
      throw ConfigError("d_list", "distances must be >= 1");
    }
    if (!analytics && d >= n_sites) throw ConfigError("d_list", "distances must be < n_sites");
  }
  if (analytics && (h > 1.0 || h0 > 1.0)) {
    throw ConfigError("h", "CleanAnalytics needs h, h0 <= 1");
  }
  if (experiment == ExperimentKind::Entropy2D && m_rows < 1) {
    throw ConfigError("m_rows", "must be >= 1");
  }
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig config;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(line, "line " + std::to_string(line_no) + " is not 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw ConfigError(key, "given twice");
    set_entry(config, key, value);
  }
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  return parse_config(in);
}

void apply_override(ExperimentConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError(assignment, "override must look like key=value");
  }
  set_entry(config, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

std::map<std::string, std::string> config_entries(const ExperimentConfig& c) {
  return {
      {"experiment", to_string(c.experiment)},
      {"n_sites", std::to_string(c.n_sites)},
      {"h", format_number(c.h)},
      {"h0", format_number(c.h0)},
      {"epsilon_list", join(c.epsilon_list)},
      {"t_list", join(c.t_list)},
      {"t_max", format_number(c.t_max)},
      {"t_step", format_number(c.t_step)},
      {"d_list", join(c.d_list)},
      {"realizations", std::to_string(c.realizations)},
      {"master_seed", std::to_string(c.master_seed)},
      {"output_path", c.output_path},
      {"entropy_base", c.entropy_base == EntropyBase::Bits ? "bits" : "nats"},
      {"m_rows", std::to_string(c.m_rows)},
      {"sector", c.sector == TopologicalSector::XSector ? "x" : "z"},
      {"bulk_positions", std::to_string(c.bulk_positions)},
      {"n_sites_list", join(c.n_sites_list)},
  };
}

void write_table(std::ostream& out, std::span<const TableRow> rows) {
  out << "epsilon,realization_count,t,D_or_L,mean,std_error\n";
  for (const auto& r : rows) {
    out << format_number(r.epsilon) << ',' << r.realization_count << ',' << format_number(r.t)
        << ',' << r.d_or_l << ',' << format_number(r.mean) << ',' << format_number(r.std_error)
        << '\n';
  }
}

void Hygiene::merge(const Hygiene& other) {
  min_det = std::min(min_det, other.min_det);
  max_nu = std::max(max_nu, other.max_nu);
  evaluations += other.evaluations;
}

QuenchSweep quench_sweep(const QuenchSettings& s) {
  const DisorderModel model{s.epsilon, s.h, s.n_sites, s.master_seed};
  model.validate();
  if (s.times.empty() || s.distances.empty()) {
    throw std::invalid_argument("quench_sweep: need times and distances");
  }
  const std::size_t d_max = *std::max_element(s.distances.begin(), s.distances.end());
  if (*std::min_element(s.distances.begin(), s.distances.end()) < 1 || d_max >= s.n_sites) {
    throw std::invalid_argument("quench_sweep: distances must lie in [1, N)");
  }
  // A clean chain is the same in every realization.
  const std::size_t reps = s.epsilon == 0.0 ? 1 : s.realizations;
  const std::size_t nt = s.times.size();
  const std::size_t nd = s.distances.size();

  struct Sample {
    std::vector<double> corr;
    std::vector<double> ent;
    Hygiene hygiene;
  };
  std::vector<Sample> samples(reps);
  parallel_for(reps, s.threads, [&](std::size_t r) {
    const ChainSpec chain = sample_chain(model, r);
    const QuenchDynamics dyn(diagonalize(chain.with_field(s.h0)), diagonalize(chain));
    Sample& out = samples[r];
    out.corr.resize(nt * nd);
    out.ent.resize(nt * nd);
    for (std::size_t it = 0; it < nt; ++it) {
      const QuenchPropagator prop = dyn.at(s.times[it], 0, d_max + 1);
      for (std::size_t id = 0; id < nd; ++id) {
        const CorrelationResult c = correlation_xx(prop, 0, s.distances[id]);
        const EntropyResult e = entanglement_entropy(prop, 0, s.distances[id]);
        out.corr[it * nd + id] = c.magnitude;
        out.ent[it * nd + id] = e.bits;
        out.hygiene.min_det = std::min(out.hygiene.min_det, c.det);
        out.hygiene.max_nu = std::max(out.hygiene.max_nu, e.max_raw_nu);
        out.hygiene.evaluations += 2;
      }
    }
  });

  QuenchSweep result;
  std::vector<double> column(reps);
  for (std::size_t it = 0; it < nt; ++it) {
    for (std::size_t id = 0; id < nd; ++id) {
      for (std::size_t r = 0; r < reps; ++r) column[r] = samples[r].corr[it * nd + id];
      auto [cm, ce] = mean_and_error(column);
      result.correlation.push_back({s.epsilon, reps, s.times[it], s.distances[id], cm, ce});
      for (std::size_t r = 0; r < reps; ++r) column[r] = samples[r].ent[it * nd + id];
      auto [em, ee] = mean_and_error(column);
      result.entropy.push_back({s.epsilon, reps, s.times[it], s.distances[id], em, ee});
    }
  }
  for (const auto& sample : samples) result.hygiene.merge(sample.hygiene);
  return result;
}

OracleComparison compare_with_oracle(const ChainSpec& initial, const ChainSpec& final_chain,
                                     std::span<const double> times) {
  const std::size_t n = final_chain.n_sites();
  if (initial.n_sites() != n) throw std::invalid_argument("compare_with_oracle: size mismatch");
  const DenseState start = dense_ground_state(initial).state;
  const DenseEvolver evolver(final_chain);
  const QuenchDynamics dyn(diagonalize(initial), diagonalize(final_chain));

  OracleComparison out;
  for (const double t : times) {
    const DenseState state = evolver.evolve(start, t);
    const QuenchPropagator prop = dyn.at(t);
    double corr_dev = 0.0;
    double ent_dev = 0.0;
    for (std::size_t l = 1; l < n; ++l) {
      const CorrelationResult c = correlation_xx(prop, 0, l);
      corr_dev = std::max(corr_dev, std::abs(std::abs(dense_correlation(state, 0, l)) - c.magnitude));
      out.hygiene.min_det = std::min(out.hygiene.min_det, c.det);
      ++out.hygiene.evaluations;
    }
    for (std::size_t len = 1; len <= n / 2; ++len) {
      const EntropyResult e = entanglement_entropy(prop, 0, len);
      ent_dev = std::max(ent_dev, std::abs(dense_entropy(state, 0, len) - e.bits));
      out.hygiene.max_nu = std::max(out.hygiene.max_nu, e.max_raw_nu);
      ++out.hygiene.evaluations;
    }
    out.correlation_deviation_at.push_back(corr_dev);
    out.entropy_deviation_at.push_back(ent_dev);
    out.max_correlation_deviation = std::max(out.max_correlation_deviation, corr_dev);
    out.max_entropy_deviation = std::max(out.max_entropy_deviation, ent_dev);
  }
  return out;
}

namespace {

struct Table {
  std::string name;
  std::vector<TableRow> rows;
};

struct Outcome {
  std::vector<Table> tables;
  json results = json::object();
  bool passed = true;
};

double entropy_scale(const ExperimentConfig& c) {
  return c.entropy_base == EntropyBase::Bits ? 1.0 : std::numbers::ln2;
}

void scale_means(std::vector<TableRow>& rows, double factor) {
  for (auto& r : rows) {
    r.mean *= factor;
    r.std_error *= factor;
  }
}

json hygiene_json(const Hygiene& h) {
  return {{"min_det", h.min_det}, {"max_nu", h.max_nu}, {"evaluations", h.evaluations}};
}

Outcome run_quench(const ExperimentConfig& c, bool clean, std::ostream& log) {
  Outcome out;
  Table corr{"correlation", {}};
  Table ent{"entropy", {}};
  Hygiene hygiene;
  const std::vector<double> eps = clean ? std::vector<double>{0.0} : c.epsilon_list;
  for (const double e : eps) {
    log << "quench sweep: epsilon = " << e << '\n';
    QuenchSettings s{c.n_sites, c.h, c.h0, e, clean ? 1 : c.realizations, c.master_seed,
                     c.times(), c.d_list, c.threads};
    QuenchSweep sweep = quench_sweep(s);
    corr.rows.insert(corr.rows.end(), sweep.correlation.begin(), sweep.correlation.end());
    ent.rows.insert(ent.rows.end(), sweep.entropy.begin(), sweep.entropy.end());
    hygiene.merge(sweep.hygiene);
  }
  scale_means(ent.rows, entropy_scale(c));
  out.tables = {corr, ent};
  out.results["hygiene"] = hygiene_json(hygiene);
  return out;
}

// Rows are independent chains; row k of realization r is realization
// r * rows + k of the disorder model.
template <class RowFn>
std::vector<std::vector<double>> sample_rows(const DisorderModel& model, std::size_t realizations,
                                             std::size_t rows, unsigned threads, RowFn&& fn) {
  const bool clean = model.epsilon == 0.0;
  const std::size_t distinct = clean ? 1 : realizations * rows;
  std::vector<std::vector<double>> values(distinct);
  parallel_for(distinct, threads, [&](std::size_t i) { values[i] = fn(sample_chain(model, i)); });
  if (!clean) return values;
  return std::vector<std::vector<double>>(realizations * rows, values.front());
}

Outcome run_wilson(const ExperimentConfig& c, std::ostream& log) {
  Outcome out;
  Table table{"wilson_loop", {}};
  const std::size_t d_max = *std::max_element(c.d_list.begin(), c.d_list.end());
  json fits = json::array();
  for (const double e : c.epsilon_list) {
    const DisorderModel model{e, c.h, c.n_sites, c.master_seed};
    const std::size_t reps = e == 0.0 ? 1 : c.realizations;
    for (const double t : c.times()) {
      log << "wilson loop: epsilon = " << e << ", t = " << t << '\n';
      const auto rows = sample_rows(model, reps, d_max, c.threads, [&](const ChainSpec& chain) {
        const auto prop = quench_propagator(diagonalize(chain.with_field(c.h0)), diagonalize(chain), t);
        std::vector<double> corr;
        for (const std::size_t d : c.d_list) corr.push_back(correlation_xx(prop, 0, d).magnitude);
        return corr;
      });
      std::vector<double> sides;
      std::vector<double> logs;
      for (std::size_t id = 0; id < c.d_list.size(); ++id) {
        const std::size_t d = c.d_list[id];
        std::vector<double> samples;
        for (std::size_t r = 0; r < reps; ++r) {
          std::vector<double> factors;
          for (std::size_t k = 0; k < d; ++k) factors.push_back(rows[r * d_max + k][id]);
          samples.push_back(wilson_loop(factors).log_value);
        }
        const auto [m, se] = mean_and_error(samples);
        table.rows.push_back({e, reps, t, d, m, std::isfinite(m) ? se : 0.0});
        if (std::isfinite(m)) {
          sides.push_back(static_cast<double>(d));
          logs.push_back(m);
        }
      }
      if (sides.size() >= 2) {
        const auto fit = fit_perimeter_area(sides, logs);
        fits.push_back({{"epsilon", e}, {"t", t}, {"perimeter", fit.perimeter},
                        {"area", fit.area}, {"rms_residual", fit.rms_residual}});
      }
    }
  }
  out.tables = {table};
  out.results["perimeter_area_fits"] = fits;
  return out;
}

Outcome run_entropy2d(const ExperimentConfig& c, std::ostream& log) {
  Outcome out;
  Table table{"entropy2d", {}};
  const std::size_t rows = 2 * c.m_rows;
  for (const double e : c.epsilon_list) {
    const DisorderModel model{e, c.h, c.n_sites, c.master_seed};
    const std::size_t reps = e == 0.0 ? 1 : c.realizations;
    for (const double t : c.times()) {
      log << "2D entropy: epsilon = " << e << ", t = " << t << '\n';
      const auto per_row = sample_rows(model, reps, rows, c.threads, [&](const ChainSpec& chain) {
        const auto prop = quench_propagator(diagonalize(chain.with_field(c.h0)), diagonalize(chain), t);
        std::vector<double> s;
        for (const std::size_t l : c.d_list) s.push_back(entanglement_entropy(prop, 0, l).bits);
        return s;
      });
      for (std::size_t il = 0; il < c.d_list.size(); ++il) {
        std::vector<double> totals;
        for (std::size_t r = 0; r < reps; ++r) {
          std::vector<double> row_entropies;
          for (std::size_t k = 0; k < rows; ++k) row_entropies.push_back(per_row[r * rows + k][il]);
          totals.push_back(assemble_entropy(row_entropies, c.sector).total_bits);
        }
        const auto [m, se] = mean_and_error(totals);
        table.rows.push_back({e, reps, t, c.d_list[il], m, se});
      }
    }
  }
  scale_means(table.rows, entropy_scale(c));
  out.tables = {table};
  out.results["gamma_topo"] = c.sector == TopologicalSector::ZSector ? 1.0 : 0.0;
  return out;
}

Outcome run_localization(const ExperimentConfig& c, std::ostream& log) {
  Outcome out;
  Table table{"sup_norm", {}};
  json fits = json::array();
  for (const double e : c.epsilon_list) {
    log << "localization probe: epsilon = " << e << '\n';
    ProbeSettings settings;
    settings.t_max = c.t_max;
    settings.t_step = c.t_step;
    settings.distances = c.d_list;
    settings.realizations = e == 0.0 ? 1 : c.realizations;
    settings.bulk_positions = c.bulk_positions;
    settings.threads = c.threads;
    const SupNormProfile profile = sup_norm_profile(DisorderModel{e, c.h, c.n_sites, c.master_seed},
                                                    settings);
    for (const auto& s : profile.samples) {
      table.rows.push_back({e, profile.realizations, c.t_max, s.distance, s.mean, s.std_error});
    }
    json entry{{"epsilon", e}, {"finest_step", profile.finest_step}};
    try {
      const DecayFit fit = fit_decay(profile.samples);
      entry["c_fit"] = fit.c_fit;
      entry["eta_fit"] = fit.eta_fit;
      entry["zeta_fit"] = fit.zeta_fit;
      entry["residual"] = fit.residual;
      entry["exp_eta"] = fit.exp_eta;
      entry["exp_eta_stderr"] = fit.exp_eta_stderr;
      entry["exp_residual"] = fit.exp_residual;
      entry["power_alpha"] = fit.power_alpha;
      entry["power_residual"] = fit.power_residual;
      entry["exponential_rejected"] = fit.exponential_rejected();
    } catch (const std::invalid_argument& err) {
      entry["fit_skipped"] = err.what();
    }
    fits.push_back(entry);
  }
  out.tables = {table};
  out.results["decay_fits"] = fits;
  return out;
}

Outcome run_oracle(const ExperimentConfig& c, std::ostream& log) {
  Outcome out;
  Table corr{"oracle_correlation_deviation", {}};
  Table ent{"oracle_entropy_deviation", {}};
  const double e = c.epsilon_list.front();
  const std::vector<double> times = c.times();
  const std::size_t sizes = c.n_sites_list.size();
  // [instance][time] -> (correlation deviation, entropy deviation)
  std::vector<std::vector<std::pair<double, double>>> dev(c.realizations);
  std::vector<Hygiene> hygiene(c.realizations);
  parallel_for(c.realizations, c.threads, [&](std::size_t i) {
    const std::size_t n = c.n_sites_list[i % sizes];
    const ChainSpec chain = sample_chain(DisorderModel{e, c.h, n, c.master_seed}, i);
    const auto cmp = compare_with_oracle(chain.with_field(c.h0), chain, times);
    for (std::size_t it = 0; it < times.size(); ++it) {
      dev[i].emplace_back(cmp.correlation_deviation_at[it], cmp.entropy_deviation_at[it]);
    }
    hygiene[i] = cmp.hygiene;
  });
  double worst_corr = 0.0;
  double worst_ent = 0.0;
  Hygiene total;
  for (const auto& h : hygiene) total.merge(h);
  for (std::size_t k = 0; k < sizes; ++k) {
    const std::size_t n = c.n_sites_list[k];
    for (std::size_t it = 0; it < times.size(); ++it) {
      std::vector<double> dc;
      std::vector<double> de;
      for (std::size_t i = k; i < c.realizations; i += sizes) {
        dc.push_back(dev[i][it].first);
        de.push_back(dev[i][it].second);
        worst_corr = std::max(worst_corr, dev[i][it].first);
        worst_ent = std::max(worst_ent, dev[i][it].second);
      }
      if (dc.empty()) continue;
      const auto [cm, ce] = mean_and_error(dc);
      const auto [em, ee] = mean_and_error(de);
      corr.rows.push_back({e, dc.size(), times[it], n, cm, ce});
      ent.rows.push_back({e, de.size(), times[it], n, em, ee});
    }
  }
  scale_means(ent.rows, entropy_scale(c));
  out.passed = worst_corr <= kOracleCorrelationTolerance && worst_ent <= kOracleEntropyTolerance;
  log << "oracle check: max correlation deviation " << worst_corr << ", max entropy deviation "
      << worst_ent << " bits -> " << (out.passed ? "PASS" : "FAIL") << '\n';
  out.tables = {corr, ent};
  out.results["max_correlation_deviation"] = worst_corr;
  out.results["max_entropy_deviation_bits"] = worst_ent;
  out.results["passed"] = out.passed;
  out.results["hygiene"] = hygiene_json(total);
  return out;
}

Outcome run_analytics(const ExperimentConfig& c, std::ostream& log) {
  Outcome out;
  Table entropy{"semiclassical_entropy", {}};
  Table correlation{"semiclassical_log_correlation", {}};
  Table gge_table{"gge_block_entropy", {}};
  const CleanQuenchSpec spec{c.h0, c.h, c.n_sites};
  const double scale = entropy_scale(c);
  log << "clean analytics: h0 = " << c.h0 << ", h = " << c.h << '\n';
  for (const double t : c.times()) {
    for (const std::size_t d : c.d_list) {
      const auto dd = static_cast<double>(d);
      entropy.rows.push_back({0.0, 1, t, d, scale * semiclassical_entropy(spec, dd, t), 0.0});
      correlation.rows.push_back({0.0, 1, t, d, semiclassical_correlation(spec, dd, t), 0.0});
    }
  }
  for (const std::size_t d : c.d_list) {
    gge_table.rows.push_back({0.0, 1, std::numeric_limits<double>::infinity(), d,
                              scale * gge_block_entropy(spec, static_cast<double>(d)), 0.0});
  }
  const GgeResult g = gge(spec);
  json gge_json{{"inverse_xi_eff", g.inverse_xi_eff},
                {"entropy_density", scale * g.entropy_density},
                {"entropy_total", scale * g.entropy_total}};
  if (std::isfinite(g.xi_eff)) gge_json["xi_eff"] = g.xi_eff;
  out.results["gge"] = gge_json;
  const MaxVelocity v = max_group_velocity(c.h);
  out.results["max_group_velocity"] = v.velocity;
  if (c.h > 0.0) out.results["revival_period"] = revival_period(c.n_sites, c.h);
  out.tables = {entropy, correlation, gge_table};
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_json(const std::filesystem::path& path, const json& doc) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream f(tmp);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << doc.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config, std::ostream& log) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();
  RunResult result;
  result.directory = config.output_path;
  std::filesystem::create_directories(result.directory);
  result.manifest = result.directory / "manifest.json";

  json manifest;
  manifest["status"] = "partial";
  manifest["experiment"] = to_string(config.experiment);
  manifest["version"] = TOPOLOC_VERSION;
  manifest["master_seed"] = config.master_seed;
  manifest["threads"] = config.threads;
  manifest["started_at"] = utc_timestamp();
  json echo = json::object();
  for (const auto& [k, v] : config_entries(config)) echo[k] = v;
  manifest["config"] = echo;
  manifest["tables"] = json::array();
  write_json(result.manifest, manifest);

  Outcome outcome;
  try {
    switch (config.experiment) {
      case ExperimentKind::QuenchClean: outcome = run_quench(config, true, log); break;
      case ExperimentKind::DisorderSweep: outcome = run_quench(config, false, log); break;
      case ExperimentKind::WilsonLoop: outcome = run_wilson(config, log); break;
      case ExperimentKind::Entropy2D: outcome = run_entropy2d(config, log); break;
      case ExperimentKind::LocalizationProbe: outcome = run_localization(config, log); break;
      case ExperimentKind::OracleCheck: outcome = run_oracle(config, log); break;
      case ExperimentKind::CleanAnalytics: outcome = run_analytics(config, log); break;
    }
    for (const auto& table : outcome.tables) {
      const auto path = result.directory / (table.name + ".csv");
      std::ofstream f(path);
      if (!f) throw std::runtime_error("cannot write " + path.string());
      write_table(f, table.rows);
      result.tables.push_back(path);
      manifest["tables"].push_back(path.filename().string());
    }
  } catch (const std::exception& err) {
    manifest["status"] = "failed";
    manifest["error"] = err.what();
    manifest["wall_time_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    write_json(result.manifest, manifest);
    throw;
  }
  result.passed = outcome.passed;
  manifest["results"] = outcome.results;
  manifest["status"] = "complete";
  manifest["wall_time_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  write_json(result.manifest, manifest);
  return result;
}

}  // namespace topoloc
