// Runs every shipped experiment and prints one PASS/FAIL line per
// acceptance criterion. Usage: acceptance <config-dir> <output-dir>.

#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "loggamma/harness.hpp"

namespace {

struct Plan {
  const char* config;
  std::vector<int> criteria;
};

const char* kTitles[] = {"",
                         "finite Laplace determinant vs Monte Carlo",
                         "legacy formula vs tau-deformed determinant",
                         "F_GUE table vs Airy oracle and mean",
                         "F_BBP structure",
                         "Tracy-Widom convergence",
                         "moderate-deviation tail envelope",
                         "law of large numbers phase transition",
                         "BBP convergence",
                         "invariant suites"};

}  // namespace

int main(int argc, char** argv) {
  using namespace loggamma;
  if (argc != 3) {
    std::fprintf(stderr, "usage: %s <config-dir> <output-dir>\n", argv[0]);
    return 1;
  }
  const std::filesystem::path cfg_dir(argv[1]), out_dir(argv[2]);
  const std::vector<Plan> plans = {{"verify_laplace.json", {1, 2}}, {"tables.json", {3, 4}},
                                   {"tw_convergence.json", {5}},     {"tails.json", {6}},
                                   {"lln_phase.json", {7}},          {"bbp.json", {8}},
                                   {"invariants.json", {9}}};
  std::map<int, bool> verdict;
  std::map<int, std::vector<std::string>> failures;
  for (const auto& p : plans) {
    std::fprintf(stdout, "running %s\n", p.config);
    std::fflush(stdout);
    try {
      ExperimentConfig c = harness::load_config((cfg_dir / p.config).string());
      c.output_path = (out_dir / c.output_path).string();
      const ExperimentReport r = harness::run_experiment(c);
      harness::write_outputs(r, c.output_path);
      for (int k : p.criteria) verdict[k] = true;
      for (const auto& m : r.metrics) {
        std::fprintf(stdout, "  [%d] %-4s %s: %.6g %s %.6g\n", m.criterion, m.pass ? "ok" : "FAIL", m.name.c_str(),
                     m.value, m.comparison.c_str(), m.tolerance);
        if (!m.pass) {
          verdict[m.criterion] = false;
          failures[m.criterion].push_back(m.name);
        }
      }
      std::fprintf(stdout, "  %s finished in %.1f s\n", r.experiment.c_str(), r.wall_seconds);
    } catch (const std::exception& e) {
      std::fprintf(stdout, "  error: %s\n", e.what());
      for (int k : p.criteria) {
        verdict[k] = false;
        failures[k].push_back(std::string("error: ") + e.what());
      }
    }
    std::fflush(stdout);
  }
  bool all = true;
  std::fprintf(stdout, "\n");
  for (int k = 1; k <= 9; ++k) {
    const bool ok = verdict.count(k) && verdict[k];
    all = all && ok;
    std::fprintf(stdout, "CRITERION %d: %s (%s)\n", k, ok ? "PASS" : "FAIL", kTitles[k]);
    for (const auto& f : failures[k]) std::fprintf(stdout, "    failed: %s\n", f.c_str());
  }
  return all ? 0 : 1;
}
