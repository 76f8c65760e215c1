#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "topoloc/experiment.hpp"
#include "topoloc/parallel.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Quench dynamics of disordered Ising chains"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::string> out_dir;
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
  run->add_option("config", config_path, "Config file (key = value lines)")->required();
  run->add_option("--set", overrides, "Override a config entry, key=value")->take_all();
  run->add_option("--out-dir", out_dir, "Output directory (overrides output_path)");
  run->add_option("--threads", threads, "Worker threads (default: TOPOLOC_THREADS or 1)")
      ->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "Master seed (overrides master_seed)");

  auto* keys = app.add_subcommand("keys", "Print every config key with its default value");

  CLI11_PARSE(app, argc, argv);

  if (*keys) {
    for (const auto& [k, v] : topoloc::config_entries(topoloc::ExperimentConfig{})) {
      std::cout << k << " = " << v << '\n';
    }
    return 0;
  }

  try {
    topoloc::ExperimentConfig config = topoloc::load_config(config_path);
    for (const auto& o : overrides) topoloc::apply_override(config, o);
    if (out_dir) config.output_path = *out_dir;
    if (seed) config.master_seed = *seed;
    config.threads = threads ? *threads : topoloc::threads_from_env(1);
    config.validate();

    const auto result = topoloc::run_experiment(config, std::cerr);
    for (const auto& t : result.tables) std::cout << t.string() << '\n';
    std::cout << result.manifest.string() << '\n';
    if (!result.passed) {
      std::cerr << "topoloc: check failed, see " << result.manifest.string() << '\n';
      return 3;
    }
  } catch (const topoloc::ConfigError& err) {
    std::cerr << "topoloc: invalid config: " << err.what() << '\n';
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "topoloc: " << err.what() << '\n';
    return 1;
  }
  return 0;
}
