#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "nmcs/experiment.hpp"

using namespace nmcs;
using namespace nmcs::experiment;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("nmcs_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return path / name;
  }
};

const char* kSolarHeader = "topology,n_cells,algorithm,seed,best_eta_percent,evals_used,gap_1\n";

}  // namespace

TEST_CASE("algorithm names") {
  CHECK(parse_algorithm("nms-cs") == Algorithm::Nmcs);
  CHECK(parse_algorithm("nmcs") == Algorithm::Nmcs);
  CHECK(parse_algorithm("ga") == Algorithm::Ga);
  CHECK(std::string(to_string(Algorithm::Sa)) == "sa");
  CHECK_THROWS_AS(parse_algorithm("pso"), ConfigError);
}

TEST_CASE("configuration") {
  const auto c = config_from_json(nlohmann::json::parse(
      R"({"experiment": "solar", "algorithms": ["nmcs", "nms"], "cells": [3, 4],
          "topologies": ["mj"], "params": {"nmcs": {"n_nests": 9}}})"));
  CHECK(c.experiment == ExperimentKind::Solar);
  CHECK(c.runs == 5);
  CHECK(c.effective_budget() == 1500);
  CHECK(c.algorithms.size() == 2);
  CHECK(c.topologies == std::vector<solar::Topology>{solar::Topology::MultiJunction});
  CHECK(hybrid_params(c, 3).n_nests == 9);
  CHECK(hybrid_params(c, 3).epsilon == 0.0);
  CHECK_NOTHROW(c.validate());

  ExperimentConfig bench;
  CHECK(bench.effective_budget() == 20000);
  CHECK(hybrid_params(bench, 2).n_nests == 6);
  CHECK(hybrid_params(bench, 10).n_nests == 20);
  CHECK(hybrid_params(bench, 2).epsilon == 1e-7);

  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"algorithms": ["foo"]})")),
                  ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"experiment": "x"})")),
                  ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"runs": "many"})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse("[1, 2]")), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);

  ExperimentConfig bad;
  bad.functions = {"RC", "NOPE"};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = ExperimentConfig{};
  bad.runs = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = ExperimentConfig{};
  bad.functions = {"R10"};
  bad.budget = 5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = ExperimentConfig{};
  bad.params = {{"nmcs", 3}};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("benchmark suite is deterministic and writes its schema") {
  ExperimentConfig c;
  c.runs = 3;
  c.functions = {"RC", "B2"};
  c.algorithms = {Algorithm::Nmcs, Algorithm::Cs};
  c.budget = 3000;
  c.threads = 3;
  const auto a = run_benchmark_suite(c);
  c.threads = 1;
  const auto b = run_benchmark_suite(c);
  std::ostringstream sa;
  std::ostringstream sb;
  write_benchmark_csv(sa, a);
  write_benchmark_csv(sb, b);
  CHECK(sa.str() == sb.str());
  CHECK(sa.str().rfind("function,d,algorithm,runs,mean_evals,mean_error,success_rate\n", 0) == 0);
  REQUIRE(a.size() == 4);
  for (const auto& row : a) {
    CHECK(row.runs == 3);
    CHECK(row.mean_evals <= 3000);
    CHECK(row.success_rate >= 0.0);
    CHECK(row.success_rate <= 1.0);
  }
}

TEST_CASE("solar experiment rows") {
  ExperimentConfig c;
  c.experiment = ExperimentKind::Solar;
  c.runs = 2;
  c.cells = {2};
  c.algorithms = {Algorithm::Nmcs, Algorithm::Nms, Algorithm::Sa, Algorithm::Ga, Algorithm::Cs};
  c.budget = 120;
  const auto rows = run_solar_experiment(c);
  REQUIRE(rows.size() == 2 * 5 * 2);
  const auto table = solar::load_spectrum(resolve_spectrum(c));
  for (const auto& row : rows) {
    CHECK(row.evals_used <= 120);
    CHECK(row.best_gaps.size() == 2);
    solar::StackSpec stack;
    stack.n_cells = 2;
    stack.topology = row.topology;
    stack.spectrum = std::make_shared<const solar::SpectrumTable>(table);
    CHECK(row.best_eta_percent ==
          doctest::Approx(100.0 * solar::efficiency(stack, row.best_gaps)).epsilon(1e-12));
  }
  const auto again = run_solar_experiment(c);
  std::ostringstream a;
  std::ostringstream b;
  write_solar_csv(a, rows);
  write_solar_csv(b, again);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("topology,n_cells,algorithm,seed,best_eta_percent,evals_used,gap_1,gap_2\n",
                      0) == 0);

  solar::StackSpec stack;
  stack.n_cells = 4;
  stack.spectrum = std::make_shared<const solar::SpectrumTable>(table);
  const auto starts = solar_start_points(stack, 5);
  CHECK(starts.size() == 15);
  CHECK(starts == solar_start_points(stack, 5));
}

TEST_CASE("missing spectrum") {
  ExperimentConfig c;
  c.experiment = ExperimentKind::Solar;
  c.spectrum_path = "/nonexistent/am15g.csv";
  CHECK_THROWS_AS(resolve_spectrum(c), MissingSpectrum);
  CHECK_THROWS_AS(run_solar_experiment(c), MissingSpectrum);
}

TEST_CASE("report") {
  TempDir dir;
  const std::string solar = std::string(kSolarHeader) +
                            "ss,3,nmcs,1,51.5,1500,1.1\n"
                            "ss,3,nms,1,50.9,1500,1.2\n"
                            "mj,3,nmcs,1,51.2,1500,1.1\n"
                            "mj,3,nms,1,50.1,1500,1.1\n";
  const auto one = dir.write("one.csv", solar);
  const auto two = dir.write("two.csv", solar);

  const auto dominated = compare_report({one});
  CHECK(dominated.text.find("51.500*") != std::string::npos);
  CHECK(dominated.text.find("51.200*") != std::string::npos);
  CHECK(dominated.text.find("50.900 ") != std::string::npos);
  CHECK(dominated.failures.empty());

  const auto ties = compare_report({one, two});
  CHECK(ties.text.find('*') == ties.text.find("(* best") + 1);
  CHECK(ties.text.find("51.500=") != std::string::npos);
  CHECK(ties.text.find("50.900=") == std::string::npos);
  CHECK(ties.text.find("one:nmcs") != std::string::npos);

  const auto low = dir.write("low.csv", std::string(kSolarHeader) + "ss,3,nmcs,1,45.0,1500,1.1\n");
  const auto failed = compare_report({low});
  REQUIRE(failed.failures.size() == 1);
  CHECK(failed.failures[0].find("ss 3") != std::string::npos);

  const auto bench = dir.write("bench.csv",
                               "function,d,algorithm,runs,mean_evals,mean_error,success_rate\n"
                               "B2,2,nmcs,100,140,1e-6,1\n"
                               "B2,2,cs,100,5000,1e-3,0.5\n");
  const auto b = compare_report({bench});
  CHECK(b.failures.empty());
  CHECK(b.text.find("1.00e-06/140/100%*") != std::string::npos);

  const auto broken = dir.write("broken.csv", "topology,n_cells,algorithm,seed,evals_used\n"
                                              "ss,3,nmcs,1,1500\n");
  CHECK_THROWS_AS(compare_report({broken}), SchemaError);
  const auto neither = dir.write("neither.csv", "a,b\n1,2\n");
  CHECK_THROWS_AS(compare_report({neither}), SchemaError);
  CHECK_THROWS_AS(compare_report({}), SchemaError);
  CHECK_THROWS_AS(compare_report({dir.path / "absent.csv"}), SchemaError);
}

TEST_CASE("write_csv file names") {
  TempDir dir;
  const auto p = write_csv(dir.path / "sub", std::vector<BenchmarkRow>{});
  CHECK(p.filename() == "benchmark.csv");
  CHECK(fs::exists(p));
  const auto q = write_csv(dir.path, std::vector<SolarRow>{});
  CHECK(q.filename() == "solar.csv");
}
