// Command-line runner for the benchmark and solar-cell experiments.
//
//   nmcs bench --suite classic --algo nmcs --runs 100 --seed 1 --out DIR
//   nmcs solar --topology ss --cells 3..10 --algo nmcs,nms,sa,ga --budget 1500 --out DIR
//   nmcs report --in DIR

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "nmcs/experiment.hpp"

namespace ex = nmcs::experiment;

namespace {

std::vector<std::string> split_list(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) {
        out.push_back(part);
      }
    }
  }
  return out;
}

// "3..10", "3,5,7" or "6".
std::vector<std::size_t> parse_cells(const std::string& text) {
  std::vector<std::size_t> cells;
  const auto dots = text.find("..");
  try {
    if (dots != std::string::npos) {
      const std::size_t lo = std::stoul(text.substr(0, dots));
      const std::size_t hi = std::stoul(text.substr(dots + 2));
      if (lo > hi) {
        throw ex::ConfigError("empty cell range " + text);
      }
      for (std::size_t n = lo; n <= hi; ++n) {
        cells.push_back(n);
      }
    } else {
      for (const auto& part : split_list({text})) {
        cells.push_back(std::stoul(part));
      }
    }
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const ex::ConfigError*>(&e) != nullptr) {
      throw;
    }
    throw ex::ConfigError("bad cell list: " + text);
  }
  return cells;
}

struct CommonFlags {
  std::string config_path;
  std::vector<std::string> algorithms;
  std::size_t runs = 0;
  std::uint64_t seed = 0;
  std::size_t budget = 0;
  std::string out;
  std::size_t threads = 0;
  CLI::Option* runs_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* budget_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  CLI::Option* threads_opt = nullptr;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "JSON configuration file")
        ->check(CLI::ExistingFile);
    app->add_option("--algo", algorithms, "algorithms: nms, cs, nmcs, sa, ga (comma separated)");
    runs_opt = app->add_option("--runs", runs, "repetitions per setting (seeds seed..seed+runs-1)");
    seed_opt = app->add_option("--seed", seed, "seed of the first run");
    budget_opt = app->add_option("--budget", budget, "maximum objective evaluations per run");
    out_opt = app->add_option("--out", out, "output directory");
    threads_opt = app->add_option("--threads", threads, "worker threads (0 = all cores)");
  }

  // Loads the config file, then lets explicitly given flags win.
  ex::ExperimentConfig resolve(ex::ExperimentKind kind) const {
    ex::ExperimentConfig config;
    if (!config_path.empty()) {
      config = ex::load_config(config_path);
    } else if (kind == ex::ExperimentKind::Solar) {
      config.runs = 5;
    }
    config.experiment = kind;
    if (!algorithms.empty()) {
      config.algorithms.clear();
      for (const auto& name : split_list(algorithms)) {
        config.algorithms.push_back(ex::parse_algorithm(name));
      }
    }
    if (runs_opt->count() > 0) {
      config.runs = runs;
    }
    if (seed_opt->count() > 0) {
      config.seed_base = seed;
    }
    if (budget_opt->count() > 0) {
      config.budget = budget;
    }
    if (out_opt->count() > 0) {
      config.output_path = out;
    }
    if (threads_opt->count() > 0) {
      config.threads = threads;
    }
    return config;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nelder-Mead cuckoo search experiments"};
  app.require_subcommand(1);

  CommonFlags bench_flags;
  std::string suite_name = "classic";
  std::vector<std::string> functions;
  auto* bench = app.add_subcommand("bench", "classic benchmark suite");
  bench_flags.attach(bench);
  bench->add_option("--suite", suite_name, "benchmark suite")->check(CLI::IsMember({"classic"}));
  bench->add_option("--functions", functions, "subset of the suite, e.g. RC,B2,S45");

  CommonFlags solar_flags;
  std::vector<std::string> topologies;
  std::string cells;
  std::string spectrum;
  auto* solar = app.add_subcommand("solar", "band-gap optimization of solar-cell stacks");
  solar_flags.attach(solar);
  solar->add_option("--topology", topologies, "ss, mj or both (comma separated)");
  solar->add_option("--cells", cells, "cell counts, e.g. 3..10 or 3,6");
  solar->add_option("--spectrum", spectrum, "AM1.5G spectrum CSV");

  std::vector<std::string> inputs;
  auto* report = app.add_subcommand("report", "compare result CSV files");
  report->add_option("--in", inputs, "CSV files or directories holding them")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (bench->parsed()) {
      ex::ExperimentConfig config = bench_flags.resolve(ex::ExperimentKind::Benchmark);
      if (!functions.empty()) {
        config.functions = split_list(functions);
      }
      const auto rows = ex::run_benchmark_suite(config);
      ex::write_benchmark_csv(std::cout, rows);
      const auto path = ex::write_csv(config.output_path, rows);
      std::cerr << "wrote " << path.string() << '\n';
      return 0;
    }
    if (solar->parsed()) {
      ex::ExperimentConfig config = solar_flags.resolve(ex::ExperimentKind::Solar);
      if (!topologies.empty()) {
        config.topologies.clear();
        for (const auto& t : split_list(topologies)) {
          try {
            config.topologies.push_back(nmcs::solar::parse_topology(t));
          } catch (const std::invalid_argument& e) {
            throw ex::ConfigError(e.what());
          }
        }
      }
      if (!cells.empty()) {
        config.cells = parse_cells(cells);
      }
      if (!spectrum.empty()) {
        config.spectrum_path = spectrum;
      }
      const auto rows = ex::run_solar_experiment(config);
      ex::write_solar_csv(std::cout, rows);
      const auto path = ex::write_csv(config.output_path, rows);
      std::cerr << "wrote " << path.string() << '\n';
      return 0;
    }
    std::vector<std::filesystem::path> files;
    for (const auto& in : inputs) {
      if (std::filesystem::is_directory(in)) {
        std::vector<std::filesystem::path> found;
        for (const auto& entry : std::filesystem::directory_iterator(in)) {
          if (entry.is_regular_file() && entry.path().extension() == ".csv") {
            found.push_back(entry.path());
          }
        }
        std::sort(found.begin(), found.end());
        files.insert(files.end(), found.begin(), found.end());
      } else {
        files.emplace_back(in);
      }
    }
    const auto outcome = ex::compare_report(files);
    std::cout << outcome.text;
    return outcome.failures.empty() ? 0 : 3;
  } catch (const ex::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const ex::MissingSpectrum& e) {
    std::cerr << "missing spectrum: " << e.what() << '\n';
    return 2;
  } catch (const ex::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
