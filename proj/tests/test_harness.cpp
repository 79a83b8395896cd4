#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "loggamma/harness.hpp"

using namespace loggamma;
namespace fs = std::filesystem;

namespace {

json small_lln() {
  return json::parse(R"({
    "experiment": "lln_phase", "seed": 4, "samples": 50, "output_path": "unused",
    "model": {"theta": 1.0, "p": 0.5, "M": 20},
    "params": {"alpha_offsets": [-0.3, 0.3]},
    "thresholds": {"tol": 10.0}
  })");
}

fs::path temp_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("loggamma_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& args) {
  const int rc = std::system((std::string(LOGGAMMA_LAB_PATH) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST(Harness, ParsesValidConfig) {
  const auto c = harness::parse_config(small_lln());
  EXPECT_EQ(c.experiment, Experiment::LlnPhase);
  EXPECT_EQ(c.seed, 4u);
  EXPECT_EQ(c.samples, 50);
}

TEST(Harness, RejectsUnknownAndMissingKeys) {
  auto j = small_lln();
  j["bogus"] = 1;
  EXPECT_THROW(harness::parse_config(j), ConfigError);
  j = small_lln();
  j["model"]["extra"] = 2;
  EXPECT_THROW(harness::parse_config(j), ConfigError);
  j = small_lln();
  j["thresholds"].erase("tol");
  EXPECT_THROW(harness::parse_config(j), ConfigError);
  j = small_lln();
  j["experiment"] = "nope";
  EXPECT_THROW(harness::parse_config(j), ConfigError);
  j = small_lln();
  j["seed"] = "x";
  EXPECT_THROW(harness::parse_config(j), ConfigError);
  j = small_lln();
  j["quad"] = {{"panel_order", 2}};
  EXPECT_THROW(harness::parse_config(j), ConfigError);
}

TEST(Harness, OverridesApplyNestedValues) {
  auto j = small_lln();
  harness::apply_override(j, "model.M=30");
  harness::apply_override(j, "output_path=somewhere");
  harness::apply_override(j, "params.alpha_offsets=[0.1]");
  EXPECT_EQ(j["model"]["M"], 30);
  EXPECT_EQ(j["output_path"], "somewhere");
  EXPECT_EQ(j["params"]["alpha_offsets"].size(), 1u);
  EXPECT_THROW(harness::apply_override(j, "novalue"), ConfigError);
  EXPECT_THROW(harness::apply_override(j, "seed.x=1"), ConfigError);
}

TEST(Harness, CsvQuoting) {
  EXPECT_EQ(harness::csv_field("plain"), "plain");
  EXPECT_EQ(harness::csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(harness::csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(harness::fmt(0.1), "0.10000000000000001");
}

TEST(Harness, ReportsAreDeterministicAcrossThreadCounts) {
  auto j = small_lln();
  j["threads"] = 1;
  const auto r1 = harness::run_experiment(harness::parse_config(j));
  j["threads"] = 3;
  const auto r3 = harness::run_experiment(harness::parse_config(j));
  auto strip = [](json x) {
    x.erase("wall_seconds");
    x["config"].erase("threads");
    return x;
  };
  EXPECT_EQ(strip(harness::report_json(r1)), strip(harness::report_json(r3)));
  EXPECT_EQ(r1.data_rows, r3.data_rows);
  EXPECT_EQ(r1.seeds.size(), 2u);
}

TEST(Harness, WritesReportAndCsv) {
  const fs::path dir = temp_dir("outputs");
  const auto r = harness::run_experiment(harness::parse_config(small_lln()));
  harness::write_outputs(r, dir.string());
  const json rep = json::parse(slurp(dir / "report.json"));
  EXPECT_EQ(rep["experiment"], "lln_phase");
  EXPECT_TRUE(rep.contains("wall_seconds"));
  EXPECT_TRUE(rep["versions"].contains("loggamma"));
  const std::string csv = slurp(dir / "data.csv");
  EXPECT_EQ(csv.rfind("alpha1,sample,log_Z,log_Z_over_M\r\n", 0), 0u);
  fs::remove_all(dir);
}

TEST(Harness, EmitTablesProducesMonotoneGue) {
  const fs::path dir = temp_dir("tables");
  harness::emit_tables("gue", {-3.0, -1.0, 0.0, 1.0}, {}, {}, (dir / "gue.csv").string());
  std::ifstream in(dir / "gue.csv");
  std::string line;
  std::getline(in, line);
  double prev = -1.0;
  int n = 0;
  while (std::getline(in, line)) {
    const double v = std::stod(line.substr(line.find(',') + 1));
    EXPECT_GE(v, prev);
    prev = v;
    ++n;
  }
  EXPECT_EQ(n, 4);
  EXPECT_THROW(harness::emit_tables("gue", {1.0, 0.0}, {}, {}, (dir / "x.csv").string()), DomainError);
  fs::remove_all(dir);
}

TEST(Harness, CliExitCodes) {
  const fs::path dir = temp_dir("cli");
  {
    std::ofstream(dir / "good.json") << small_lln().dump();
    auto bad = small_lln();
    bad["unknown"] = true;
    std::ofstream(dir / "bad.json") << bad.dump();
    auto strict = small_lln();
    strict["thresholds"]["tol"] = 0.0;
    std::ofstream(dir / "strict.json") << strict.dump();
  }
  const std::string out = " --out " + (dir / "o").string();
  EXPECT_EQ(run_cli("lln_phase --config " + (dir / "good.json").string() + out), 0);
  EXPECT_TRUE(fs::exists(dir / "o" / "report.json"));
  EXPECT_EQ(run_cli("lln_phase --config " + (dir / "bad.json").string() + out), 3);
  EXPECT_EQ(run_cli("tails --config " + (dir / "good.json").string() + out), 3);
  EXPECT_EQ(run_cli("lln_phase --config " + (dir / "strict.json").string() + out), 2);
  EXPECT_EQ(run_cli("lln_phase --config " + (dir / "good.json").string() + " --override model.M=-4" + out), 3);
  std::ofstream(dir / "file_not_dir") << "x";
  EXPECT_EQ(run_cli("lln_phase --config " + (dir / "good.json").string() + " --out " + (dir / "file_not_dir").string()), 5);
  fs::remove_all(dir);
}

TEST(Harness, ShippedConfigsValidate) {
  for (const auto& e : fs::directory_iterator(LOGGAMMA_CONFIG_DIR)) {
    if (e.path().extension() != ".json") continue;
    EXPECT_NO_THROW(harness::load_config(e.path().string())) << e.path();
  }
}
