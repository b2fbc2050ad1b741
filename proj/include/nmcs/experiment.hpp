#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "nmcs/baselines.hpp"
#include "nmcs/cuckoo.hpp"
#include "nmcs/hybrid.hpp"
#include "nmcs/nelder_mead.hpp"
#include "nmcs/solar.hpp"

namespace nmcs::experiment {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MissingSpectrum : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Algorithm { Nms, Cs, Nmcs, Sa, Ga };

const char* to_string(Algorithm algorithm);
/// Throws ConfigError for unknown names.
Algorithm parse_algorithm(const std::string& name);

enum class ExperimentKind { Benchmark, Solar };

/// Everything a run of the harness depends on. Per-algorithm parameter
/// overrides live in `params`, keyed by algorithm name:
///   {"nmcs": {"n_nests": 6, "p": 1, "k": 12, "p_a": 0.25, "epsilon": 1e-7,
///             "init_scale_max": 0.25, "centroid_excludes_worst": true}, ...}
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Benchmark;
  std::vector<Algorithm> algorithms{Algorithm::Nmcs};
  std::size_t runs = 100;
  std::uint64_t seed_base = 1;
  std::optional<std::size_t> budget;  // 20000 for benchmarks, 1500 for solar
  std::filesystem::path output_path = ".";
  nlohmann::json params = nlohmann::json::object();
  // 0 picks std::thread::hardware_concurrency().
  std::size_t threads = 0;

  // Benchmark experiment. Empty means the whole suite.
  std::vector<std::string> functions;

  // Solar experiment.
  std::vector<solar::Topology> topologies{solar::Topology::SplitSpectrum,
                                          solar::Topology::MultiJunction};
  std::vector<std::size_t> cells{3, 4, 5, 6, 7, 8, 9, 10};
  std::string spectrum_path;

  [[nodiscard]] std::size_t effective_budget() const;
  /// Throws ConfigError.
  void validate() const;
};

/// Reads the JSON mirror of ExperimentConfig; absent keys keep defaults.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

HybridParams hybrid_params(const ExperimentConfig& config, std::size_t dimension);
NmsParams nms_params(const ExperimentConfig& config);
CsParams cs_params(const ExperimentConfig& config);
SaParams sa_params(const ExperimentConfig& config);
GaParams ga_params(const ExperimentConfig& config);

struct BenchmarkRow {
  std::string function;
  std::size_t dimension = 0;
  Algorithm algorithm = Algorithm::Nmcs;
  std::size_t runs = 0;
  double mean_evals = 0.0;
  double mean_error = 0.0;
  double success_rate = 0.0;
};

/// A run succeeds when its stop rule fired and its error is below this.
inline constexpr double kSuccessError = 1e-3;

/// Runs every configured algorithm `runs` times on each selected function,
/// seeding run r with seed_base + r.
std::vector<BenchmarkRow> run_benchmark_suite(const ExperimentConfig& config);

struct SolarRow {
  solar::Topology topology = solar::Topology::SplitSpectrum;
  std::size_t n_cells = 0;
  Algorithm algorithm = Algorithm::Nmcs;
  std::uint64_t seed = 0;
  double best_eta_percent = 0.0;
  std::size_t evals_used = 0;
  Point best_gaps;
};

/// Spectrum file used by the solar experiment: the configured path, else
/// $SPECTRUM_PATH, else the bundled fixture. Throws MissingSpectrum.
std::filesystem::path resolve_spectrum(const ExperimentConfig& config);

/// Start points for one solar run: the two informed starts, then 8 random
/// gap vectors, then 5 more random ones (15 in total).
std::vector<Point> solar_start_points(const solar::StackSpec& stack, std::uint64_t seed);

/// One optimizer run on a solar stack with its start recipe.
SolarRow run_solar_once(const solar::StackSpec& stack, Algorithm algorithm,
                        const ExperimentConfig& config, std::uint64_t seed);

std::vector<SolarRow> run_solar_experiment(const ExperimentConfig& config);

void write_benchmark_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows);
void write_solar_csv(std::ostream& out, const std::vector<SolarRow>& rows);
/// Writes benchmark.csv or solar.csv into `dir` and returns the file path.
std::filesystem::path write_csv(const std::filesystem::path& dir,
                                const std::vector<BenchmarkRow>& rows);
std::filesystem::path write_csv(const std::filesystem::path& dir,
                                const std::vector<SolarRow>& rows);

struct ReportOutcome {
  std::string text;
  // Reference checks the hybrid failed; empty means all passed.
  std::vector<std::string> failures;
};

/// Side-by-side comparison of result CSVs sharing one schema. The best
/// entry of each row is marked '*', tied best entries '='. Rows of the
/// hybrid are also checked against the reference results.
ReportOutcome compare_report(const std::vector<std::filesystem::path>& csv_paths);

}  // namespace nmcs::experiment
