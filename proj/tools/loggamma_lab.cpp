// Command-line driver: loggamma-lab <experiment> --config FILE [options].

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "loggamma/harness.hpp"

namespace {

enum ExitCode { kPass = 0, kUsage = 1, kMetricFail = 2, kConfig = 3, kNumeric = 4, kIo = 5 };

}  // namespace

int main(int argc, char** argv) {
  using namespace loggamma;
  CLI::App app{"Log-gamma polymer experiments"};
  app.set_version_flag("--version", std::string(kVersion));

  std::string experiment, config_path, out;
  long long seed = -1, samples = -1;
  int threads = 0;
  std::vector<std::string> overrides;
  std::vector<std::string> names;
  for (const auto& [k, v] : experiment_names()) names.push_back(k);

  app.add_option("experiment", experiment, "Experiment name")->required()->check(CLI::IsMember(names));
  app.add_option("--config", config_path, "JSON configuration file")->required()->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Override the configured seed")->check(CLI::NonNegativeNumber);
  app.add_option("--samples", samples, "Override the configured sample count")->check(CLI::NonNegativeNumber);
  app.add_option("--out", out, "Output directory (overrides output_path)");
  app.add_option("--threads", threads, "Worker threads (default: LOGGAMMA_THREADS or all cores)")
      ->check(CLI::PositiveNumber);
  app.add_option("--override", overrides, "Set a configuration value, key.path=json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfig;
  }

  try {
    if (seed >= 0) overrides.push_back("seed=" + std::to_string(seed));
    if (samples >= 0) overrides.push_back("samples=" + std::to_string(samples));
    if (threads > 0) overrides.push_back("threads=" + std::to_string(threads));
    if (!out.empty()) overrides.push_back("output_path=" + json(out).dump());
    ExperimentConfig cfg = harness::load_config(config_path, overrides);
    if (experiment_name(cfg.experiment) != experiment) {
      throw ConfigError("config file describes experiment '" + experiment_name(cfg.experiment) +
                        "', not '" + experiment + "'");
    }
    const ExperimentReport rep = harness::run_experiment(cfg);
    try {
      harness::write_outputs(rep, cfg.output_path);
    } catch (const Error& e) {
      std::cerr << "I/O error: " << e.what() << "\n";
      return kIo;
    }
    for (const auto& m : rep.metrics) {
      std::printf("%-4s %s: %.6g %s %.6g\n", m.pass ? "ok" : "FAIL", m.name.c_str(), m.value, m.comparison.c_str(),
                  m.tolerance);
    }
    std::printf("%s: %s (%.1f s) -> %s\n", rep.experiment.c_str(), rep.all_pass() ? "PASS" : "FAIL", rep.wall_seconds,
                cfg.output_path.c_str());
    return rep.all_pass() ? kPass : kMetricFail;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const DomainError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const Error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumeric;
  }
}
