#include "nmcs/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "nmcs/benchmarks.hpp"

#ifndef NMCS_SPECTRUM_FIXTURE
#define NMCS_SPECTRUM_FIXTURE ""
#endif

namespace nmcs::experiment {

using nlohmann::json;

namespace {

constexpr std::size_t kBenchmarkBudget = 20000;
constexpr std::size_t kSolarBudget = 1500;

struct AlgorithmName {
  Algorithm algorithm;
  const char* name;
};

constexpr AlgorithmName kAlgorithmNames[] = {
    {Algorithm::Nms, "nms"}, {Algorithm::Cs, "cs"}, {Algorithm::Nmcs, "nmcs"},
    {Algorithm::Sa, "sa"},   {Algorithm::Ga, "ga"},
};

}  // namespace

const char* to_string(Algorithm algorithm) {
  for (const auto& entry : kAlgorithmNames) {
    if (entry.algorithm == algorithm) {
      return entry.name;
    }
  }
  return "unknown";
}

Algorithm parse_algorithm(const std::string& name) {
  for (const auto& entry : kAlgorithmNames) {
    if (name == entry.name) {
      return entry.algorithm;
    }
  }
  if (name == "nms-cs" || name == "nmscs") {
    return Algorithm::Nmcs;
  }
  throw ConfigError("unknown algorithm: " + name);
}

std::size_t ExperimentConfig::effective_budget() const {
  if (budget) {
    return *budget;
  }
  return experiment == ExperimentKind::Benchmark ? kBenchmarkBudget : kSolarBudget;
}

void ExperimentConfig::validate() const {
  if (runs < 1) {
    throw ConfigError("runs must be at least 1");
  }
  if (algorithms.empty()) {
    throw ConfigError("no algorithm selected");
  }
  if (!params.is_object()) {
    throw ConfigError("params must be a JSON object");
  }
  for (const auto& [key, value] : params.items()) {
    parse_algorithm(key);
    if (!value.is_object()) {
      throw ConfigError("params." + key + " must be a JSON object");
    }
  }
  std::size_t max_dimension = 0;
  if (experiment == ExperimentKind::Benchmark) {
    for (const auto& name : functions) {
      try {
        benchmark(name);
      } catch (const std::out_of_range&) {
        throw ConfigError("unknown benchmark function: " + name);
      }
    }
    for (const auto& fn : suite()) {
      if (functions.empty() ||
          std::find(functions.begin(), functions.end(), fn.spec.name) != functions.end()) {
        max_dimension = std::max(max_dimension, fn.spec.dimension);
      }
    }
  } else {
    if (topologies.empty() || cells.empty()) {
      throw ConfigError("solar experiment needs at least one topology and cell count");
    }
    for (std::size_t n : cells) {
      if (n < 1) {
        throw ConfigError("cell counts must be positive");
      }
      max_dimension = std::max(max_dimension, n);
    }
  }
  const bool simplex_based = std::any_of(algorithms.begin(), algorithms.end(), [](Algorithm a) {
    return a == Algorithm::Nms || a == Algorithm::Nmcs;
  });
  if (simplex_based && effective_budget() < max_dimension + 1) {
    throw ConfigError("budget must be at least d+1 for simplex-based algorithms");
  }
  if (effective_budget() < 1) {
    throw ConfigError("budget must be positive");
  }
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) {
    throw ConfigError("configuration must be a JSON object");
  }
  ExperimentConfig c;
  try {
    if (j.contains("experiment")) {
      const auto kind = j.at("experiment").get<std::string>();
      if (kind == "benchmark" || kind == "bench") {
        c.experiment = ExperimentKind::Benchmark;
      } else if (kind == "solar") {
        c.experiment = ExperimentKind::Solar;
        c.runs = 5;
      } else {
        throw ConfigError("unknown experiment: " + kind);
      }
    }
    if (j.contains("algorithms")) {
      c.algorithms.clear();
      for (const auto& name : j.at("algorithms")) {
        c.algorithms.push_back(parse_algorithm(name.get<std::string>()));
      }
    }
    if (j.contains("runs")) {
      c.runs = j.at("runs").get<std::size_t>();
    }
    if (j.contains("seed_base")) {
      c.seed_base = j.at("seed_base").get<std::uint64_t>();
    }
    if (j.contains("budget")) {
      c.budget = j.at("budget").get<std::size_t>();
    }
    if (j.contains("output_path")) {
      c.output_path = j.at("output_path").get<std::string>();
    }
    if (j.contains("params")) {
      c.params = j.at("params");
    }
    if (j.contains("threads")) {
      c.threads = j.at("threads").get<std::size_t>();
    }
    if (j.contains("functions")) {
      c.functions = j.at("functions").get<std::vector<std::string>>();
    }
    if (j.contains("topologies")) {
      c.topologies.clear();
      for (const auto& name : j.at("topologies")) {
        c.topologies.push_back(solar::parse_topology(name.get<std::string>()));
      }
    }
    if (j.contains("cells")) {
      c.cells = j.at("cells").get<std::vector<std::size_t>>();
    }
    if (j.contains("spectrum_path")) {
      c.spectrum_path = j.at("spectrum_path").get<std::string>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad configuration value: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open configuration file " + path.string());
  }
  try {
    return config_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ConfigError("configuration file is not valid JSON: " + std::string(e.what()));
  }
}

namespace {

const json& overrides(const ExperimentConfig& config, Algorithm algorithm) {
  static const json empty = json::object();
  const auto it = config.params.find(to_string(algorithm));
  return it != config.params.end() ? *it : empty;
}

template <class T>
void assign(const json& j, const char* key, T& target) {
  if (j.contains(key)) {
    try {
      target = j.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(std::string("bad value for ") + key + ": " + e.what());
    }
  }
}

void assign_flip(const json& j, NelderMeadOptions& options) {
  assign(j, "reflect", options.coefficients.reflect);
  assign(j, "expand", options.coefficients.expand);
  assign(j, "contract", options.coefficients.contract);
  assign(j, "shrink", options.coefficients.shrink);
  assign(j, "centroid_excludes_worst", options.centroid_excludes_worst);
}

}  // namespace

HybridParams hybrid_params(const ExperimentConfig& config, std::size_t dimension) {
  HybridParams p;
  if (config.experiment == ExperimentKind::Benchmark) {
    p.n_nests = dimension >= 10 ? 20 : 6;
  } else {
    p.n_nests = 15;
    // Solar runs spend the whole budget.
    p.epsilon = 0.0;
  }
  const json& j = overrides(config, Algorithm::Nmcs);
  assign(j, "n_nests", p.n_nests);
  assign(j, "p", p.p);
  assign(j, "k", p.k);
  assign(j, "p_a", p.p_a);
  assign(j, "init_scale_max", p.init_scale_max);
  assign(j, "epsilon", p.epsilon);
  assign(j, "ranking_pool", p.ranking_pool);
  assign_flip(j, p.flip);
  return p;
}

NmsParams nms_params(const ExperimentConfig& config) {
  NmsParams p;
  const json& j = overrides(config, Algorithm::Nms);
  assign(j, "init_scale", p.init_scale);
  assign(j, "epsilon", p.stop.tolerance);
  assign_flip(j, p.options);
  return p;
}

CsParams cs_params(const ExperimentConfig& config) {
  CsParams p;
  if (config.experiment == ExperimentKind::Benchmark) {
    p.stop.tolerance = 1e-7;
  }
  const json& j = overrides(config, Algorithm::Cs);
  assign(j, "n_nests", p.n_nests);
  assign(j, "p_a", p.p_a);
  assign(j, "levy_exponent", p.levy_exponent);
  assign(j, "epsilon", p.stop.tolerance);
  if (j.contains("step_scale")) {
    Point scale;
    assign(j, "step_scale", scale);
    p.step_scale = scale;
  }
  return p;
}

SaParams sa_params(const ExperimentConfig& config) {
  SaParams p;
  const json& j = overrides(config, Algorithm::Sa);
  assign(j, "t0", p.t0);
  assign(j, "cooling", p.cooling);
  assign(j, "reanneal_interval", p.reanneal_interval);
  return p;
}

GaParams ga_params(const ExperimentConfig& config) {
  GaParams p;
  const json& j = overrides(config, Algorithm::Ga);
  assign(j, "pop_size", p.pop_size);
  assign(j, "elite_count", p.elite_count);
  assign(j, "crossover_fraction", p.crossover_fraction);
  assign(j, "mutation_rate", p.mutation_rate);
  assign(j, "tournament_size", p.tournament_size);
  return p;
}

namespace {

// Runs body(0..count-1) on a small worker pool.
template <class F>
void parallel_for(std::size_t count, std::size_t threads, F&& body) {
  if (threads == 0) {
    threads = std::max(1u, std::thread::hardware_concurrency());
  }
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      body(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) {
            failure = std::current_exception();
          }
        }
      }
    });
  }
  for (auto& t : pool) {
    t.join();
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
}

RunReport run_benchmark_once(const BenchmarkFunction& fn, Algorithm algorithm,
                             const ExperimentConfig& config, std::uint64_t seed) {
  const ObjectiveSpec& spec = fn.spec;
  const std::size_t budget = config.effective_budget();
  Rng rng(seed);
  switch (algorithm) {
    case Algorithm::Nmcs:
      return nmcs_minimize(spec, hybrid_params(config, spec.dimension), {}, budget, seed);
    case Algorithm::Nms: {
      const Point anchor = uniform_in_bounds(spec, rng);
      RunReport r = nms_minimize(spec, anchor, budget, nms_params(config));
      r.seed = seed;
      return r;
    }
    case Algorithm::Cs:
      return cs_minimize(spec, cs_params(config), budget, seed);
    case Algorithm::Sa: {
      const std::vector<Point> starts{uniform_in_bounds(spec, rng)};
      return sa_minimize(spec, sa_params(config), starts, budget, seed);
    }
    case Algorithm::Ga:
      return ga_minimize(spec, ga_params(config), {}, budget, seed);
  }
  throw ConfigError("unknown algorithm");
}

}  // namespace

std::vector<BenchmarkRow> run_benchmark_suite(const ExperimentConfig& config) {
  config.validate();
  std::vector<const BenchmarkFunction*> selected;
  for (const auto& fn : suite()) {
    if (config.functions.empty() || std::find(config.functions.begin(), config.functions.end(),
                                              fn.spec.name) != config.functions.end()) {
      selected.push_back(&fn);
    }
  }

  struct Task {
    const BenchmarkFunction* fn;
    Algorithm algorithm;
  };
  std::vector<Task> tasks;
  for (const auto* fn : selected) {
    for (Algorithm a : config.algorithms) {
      tasks.push_back({fn, a});
    }
  }

  const std::size_t runs = config.runs;
  std::vector<RunReport> reports(tasks.size() * runs);
  parallel_for(reports.size(), config.threads, [&](std::size_t idx) {
    const Task& task = tasks[idx / runs];
    const std::uint64_t seed = config.seed_base + idx % runs;
    reports[idx] = run_benchmark_once(*task.fn, task.algorithm, config, seed);
  });

  std::vector<BenchmarkRow> rows;
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    BenchmarkRow row;
    row.function = tasks[t].fn->spec.name;
    row.dimension = tasks[t].fn->spec.dimension;
    row.algorithm = tasks[t].algorithm;
    row.runs = runs;
    std::size_t successes = 0;
    for (std::size_t r = 0; r < runs; ++r) {
      const RunReport& rep = reports[t * runs + r];
      const double error = error_vs_optimum(*tasks[t].fn, rep.best_value);
      row.mean_evals += static_cast<double>(rep.evals_used);
      row.mean_error += error;
      if (rep.stop_rule_fired && error < kSuccessError) {
        ++successes;
      }
    }
    row.mean_evals /= static_cast<double>(runs);
    row.mean_error /= static_cast<double>(runs);
    row.success_rate = static_cast<double>(successes) / static_cast<double>(runs);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::filesystem::path resolve_spectrum(const ExperimentConfig& config) {
  std::filesystem::path path = config.spectrum_path;
  if (path.empty()) {
    if (const char* env = std::getenv("SPECTRUM_PATH"); env != nullptr && *env != '\0') {
      path = env;
    } else {
      path = NMCS_SPECTRUM_FIXTURE;
    }
  }
  if (path.empty() || !std::filesystem::is_regular_file(path)) {
    throw MissingSpectrum("spectrum file not found: " +
                          (path.empty() ? std::string("(none configured)") : path.string()));
  }
  return path;
}

std::vector<Point> solar_start_points(const solar::StackSpec& stack, std::uint64_t seed) {
  const ObjectiveSpec spec = solar::objective_for(stack);
  const auto informed = solar::informed_starts(stack, stack.n_cells);
  Rng rng(seed);
  std::vector<Point> points{clamp_to_bounds(informed[0], spec),
                            clamp_to_bounds(informed[1], spec)};
  for (int i = 0; i < 13; ++i) {
    points.push_back(uniform_in_bounds(spec, rng));
  }
  return points;
}

SolarRow run_solar_once(const solar::StackSpec& stack, Algorithm algorithm,
                        const ExperimentConfig& config, std::uint64_t seed) {
  const ObjectiveSpec spec = solar::objective_for(stack);
  const std::size_t budget = config.effective_budget();
  const std::vector<Point> points = solar_start_points(stack, seed);
  const std::vector<Point> nms_starts(points.begin(), points.begin() + 10);
  const std::vector<Point> informed(points.begin(), points.begin() + 2);

  RunReport report;
  switch (algorithm) {
    case Algorithm::Nmcs:
      report = nmcs_minimize(spec, hybrid_params(config, spec.dimension), points, budget, seed);
      break;
    case Algorithm::Nms:
      report = nms_multistart(spec, nms_starts, budget, nms_params(config));
      break;
    case Algorithm::Cs:
      report = cs_minimize(spec, cs_params(config), budget, seed);
      break;
    case Algorithm::Sa:
      report = sa_minimize(spec, sa_params(config), informed, budget, seed);
      break;
    case Algorithm::Ga:
      report = ga_minimize(spec, ga_params(config), points, budget, seed);
      break;
  }

  SolarRow row;
  row.topology = stack.topology;
  row.n_cells = stack.n_cells;
  row.algorithm = algorithm;
  row.seed = seed;
  row.evals_used = report.evals_used;
  row.best_gaps = report.best_point;
  std::sort(row.best_gaps.begin(), row.best_gaps.end());
  const double eta = solar::efficiency(stack, row.best_gaps);
  if (std::abs((1.0 - eta) - report.best_value) > 1e-12) {
    throw std::logic_error("reported efficiency does not reproduce for " + spec.name);
  }
  row.best_eta_percent = 100.0 * eta;
  return row;
}

std::vector<SolarRow> run_solar_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto path = resolve_spectrum(config);
  std::shared_ptr<const solar::SpectrumTable> table;
  try {
    table = std::make_shared<const solar::SpectrumTable>(solar::load_spectrum(path));
  } catch (const solar::ParseError& e) {
    throw MissingSpectrum("unusable spectrum file " + path.string() + ": " + e.what());
  }

  struct Task {
    solar::StackSpec stack;
    Algorithm algorithm;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (solar::Topology topology : config.topologies) {
    for (std::size_t n : config.cells) {
      solar::StackSpec stack;
      stack.n_cells = n;
      stack.topology = topology;
      stack.spectrum = table;
      for (Algorithm a : config.algorithms) {
        for (std::size_t r = 0; r < config.runs; ++r) {
          tasks.push_back({stack, a, config.seed_base + r});
        }
      }
    }
  }

  std::vector<SolarRow> rows(tasks.size());
  parallel_for(tasks.size(), config.threads, [&](std::size_t i) {
    rows[i] = run_solar_once(tasks[i].stack, tasks[i].algorithm, config, tasks[i].seed);
  });
  std::sort(rows.begin(), rows.end(), [](const SolarRow& a, const SolarRow& b) {
    return std::tuple(static_cast<int>(a.topology), a.n_cells, static_cast<int>(a.algorithm),
                      a.seed) < std::tuple(static_cast<int>(b.topology), b.n_cells,
                                           static_cast<int>(b.algorithm), b.seed);
  });
  return rows;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

void write_benchmark_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows) {
  std::vector<BenchmarkRow> sorted = rows;
  std::sort(sorted.begin(), sorted.end(), [](const BenchmarkRow& a, const BenchmarkRow& b) {
    return std::tuple(a.function, static_cast<int>(a.algorithm)) <
           std::tuple(b.function, static_cast<int>(b.algorithm));
  });
  out << "function,d,algorithm,runs,mean_evals,mean_error,success_rate\n";
  for (const auto& r : sorted) {
    out << r.function << ',' << r.dimension << ',' << to_string(r.algorithm) << ',' << r.runs
        << ',' << fmt(r.mean_evals) << ',' << fmt(r.mean_error) << ',' << fmt(r.success_rate)
        << '\n';
  }
}

void write_solar_csv(std::ostream& out, const std::vector<SolarRow>& rows) {
  std::size_t max_cells = 0;
  for (const auto& r : rows) {
    max_cells = std::max(max_cells, r.best_gaps.size());
  }
  out << "topology,n_cells,algorithm,seed,best_eta_percent,evals_used";
  for (std::size_t i = 1; i <= max_cells; ++i) {
    out << ",gap_" << i;
  }
  out << '\n';
  for (const auto& r : rows) {
    out << solar::to_string(r.topology) << ',' << r.n_cells << ',' << to_string(r.algorithm)
        << ',' << r.seed << ',' << fmt(r.best_eta_percent) << ',' << r.evals_used;
    for (std::size_t i = 0; i < max_cells; ++i) {
      out << ',';
      if (i < r.best_gaps.size()) {
        out << fmt(r.best_gaps[i]);
      }
    }
    out << '\n';
  }
}

namespace {

template <class Rows, class Writer>
std::filesystem::path write_file(const std::filesystem::path& dir, const char* name,
                                 const Rows& rows, Writer writer) {
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  writer(out, rows);
  return path;
}

}  // namespace

std::filesystem::path write_csv(const std::filesystem::path& dir,
                                const std::vector<BenchmarkRow>& rows) {
  return write_file(dir, "benchmark.csv", rows, write_benchmark_csv);
}

std::filesystem::path write_csv(const std::filesystem::path& dir,
                                const std::vector<SolarRow>& rows) {
  return write_file(dir, "solar.csv", rows, write_solar_csv);
}

namespace {

struct Reference {
  double evals;
  double max_error;
};

// NMS-CS results on the classic suite: evaluations to convergence and the
// error ceiling a reproduction has to meet.
const std::map<std::string, Reference>& benchmark_reference() {
  static const std::map<std::string, Reference> table{
      {"RC", {269, 1e-4}},  {"B2", {132, 1e-4}},   {"GP", {313, 1e-4}},
      {"SH", {569, 1e-4}},  {"R2", {473, 1e-4}},   {"Z2", {150, 1e-4}},
      {"H34", {418, 1e-3}}, {"S45", {1125, 1e-3}}, {"R5", {1504, 1e-3}},
      {"R10", {2621, 1e-3}},
  };
  return table;
}

struct EtaReference {
  double eta_percent;
  double tolerance;
};

// Best efficiencies (%) found by NMS-CS with 1500 evaluations.
std::optional<EtaReference> solar_reference(solar::Topology topology, std::size_t n) {
  static const double ss[] = {51.351, 55.396, 57.790, 59.658, 60.706, 61.618, 62.596, 63.296};
  static const double mj[] = {51.003, 54.558, 56.610, 58.078, 59.732};
  if (n < 3) {
    return std::nullopt;
  }
  const std::size_t i = n - 3;
  if (topology == solar::Topology::SplitSpectrum) {
    if (i >= std::size(ss)) {
      return std::nullopt;
    }
    return EtaReference{ss[i], n <= 6 ? 1.0 : 1.5};
  }
  if (i >= std::size(mj)) {
    return std::nullopt;
  }
  return EtaReference{mj[i], 1.5};
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string label;

  [[nodiscard]] std::size_t column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw SchemaError(label + ": missing column '" + name + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
  }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    if (!field.empty() && field.back() == '\r') {
      field.pop_back();
    }
    out.push_back(field);
  }
  if (!line.empty() && line.back() == ',') {
    out.emplace_back();
  }
  return out;
}

Table read_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw SchemaError("cannot open " + path.string());
  }
  Table t;
  t.label = path.stem().string();
  std::string line;
  if (!std::getline(in, line)) {
    throw SchemaError(path.string() + ": empty file");
  }
  t.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    auto fields = split(line);
    if (fields.size() < t.header.size()) {
      fields.resize(t.header.size());
    }
    t.rows.push_back(std::move(fields));
  }
  return t;
}

double number(const std::string& s, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw SchemaError(where + ": not a number: '" + s + "'");
  }
  return v;
}

// One comparison cell: the value that decides "best" plus its display text.
struct Cell {
  double score;  // lower is better
  std::string text;
};

using Grid = std::map<std::string, std::map<std::string, Cell>>;  // row -> column -> cell

std::string render(const std::string& title, const std::vector<std::string>& row_order,
                   const std::vector<std::string>& columns, const Grid& grid) {
  std::ostringstream out;
  out << title << '\n';
  std::size_t first_width = 8;
  for (const auto& r : row_order) {
    first_width = std::max(first_width, r.size() + 1);
  }
  std::vector<std::size_t> widths;
  for (const auto& c : columns) {
    std::size_t w = c.size();
    for (const auto& [row, cells] : grid) {
      const auto it = cells.find(c);
      if (it != cells.end()) {
        w = std::max(w, it->second.text.size() + 1);
      }
    }
    widths.push_back(w + 2);
  }
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-*s", static_cast<int>(first_width), "row");
  out << buf;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%*s", static_cast<int>(widths[i]), columns[i].c_str());
    out << buf;
  }
  out << '\n';
  for (const auto& r : row_order) {
    const auto& cells = grid.at(r);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [c, cell] : cells) {
      best = std::min(best, cell.score);
    }
    std::size_t best_count = 0;
    for (const auto& [c, cell] : cells) {
      best_count += cell.score == best;
    }
    std::snprintf(buf, sizeof buf, "%-*s", static_cast<int>(first_width), r.c_str());
    out << buf;
    for (std::size_t i = 0; i < columns.size(); ++i) {
      const auto it = cells.find(columns[i]);
      std::string text = "-";
      if (it != cells.end()) {
        text = it->second.text;
        if (it->second.score == best) {
          text += best_count > 1 ? "=" : "*";
        } else {
          text += " ";
        }
      }
      std::snprintf(buf, sizeof buf, "%*s", static_cast<int>(widths[i]), text.c_str());
      out << buf;
    }
    out << '\n';
  }
  out << "(* best in row, = tied best)\n";
  return out.str();
}

std::string column_name(const Table& t, const std::string& algorithm, bool many_files) {
  return many_files ? t.label + ":" + algorithm : algorithm;
}

void benchmark_report(const std::vector<Table>& tables, ReportOutcome& outcome) {
  const bool many = tables.size() > 1;
  Grid grid;
  std::vector<std::string> row_order;
  std::vector<std::string> columns;
  for (const auto& t : tables) {
    const std::size_t c_fn = t.column("function");
    static_cast<void>(t.column("d"));
    const std::size_t c_alg = t.column("algorithm");
    static_cast<void>(t.column("runs"));
    const std::size_t c_evals = t.column("mean_evals");
    const std::size_t c_err = t.column("mean_error");
    const std::size_t c_succ = t.column("success_rate");
    for (const auto& row : t.rows) {
      const std::string& fn = row[c_fn];
      const std::string col = column_name(t, row[c_alg], many);
      const double evals = number(row[c_evals], t.label);
      const double error = number(row[c_err], t.label);
      const double success = number(row[c_succ], t.label);
      char text[96];
      std::snprintf(text, sizeof text, "%.2e/%.0f/%.0f%%", error, evals, 100.0 * success);
      if (!grid.count(fn)) {
        row_order.push_back(fn);
      }
      grid[fn][col] = Cell{error, text};
      if (std::find(columns.begin(), columns.end(), col) == columns.end()) {
        columns.push_back(col);
      }
      if (row[c_alg] == to_string(Algorithm::Nmcs)) {
        const auto ref = benchmark_reference().find(fn);
        if (ref != benchmark_reference().end()) {
          const Reference& r = ref->second;
          if (!(error <= r.max_error)) {
            outcome.failures.push_back(col + " " + fn + ": mean error " + fmt(error) +
                                       " above " + fmt(r.max_error));
          }
          if (!(evals >= r.evals / 2.0 && evals <= r.evals * 2.0)) {
            outcome.failures.push_back(col + " " + fn + ": mean evaluations " + fmt(evals) +
                                       " outside [" + fmt(r.evals / 2.0) + ", " +
                                       fmt(r.evals * 2.0) + "]");
          }
        }
      }
    }
  }
  outcome.text += render("mean error / mean evaluations / success rate", row_order, columns,
                         grid);
}

void solar_report(const std::vector<Table>& tables, ReportOutcome& outcome) {
  const bool many = tables.size() > 1;
  Grid grid;
  std::vector<std::string> row_order;
  std::vector<std::string> columns;
  // Best-of-seeds efficiency per (row, column).
  std::map<std::string, std::map<std::string, double>> best;
  std::map<std::string, std::pair<solar::Topology, std::size_t>> keys;
  std::map<std::string, std::string> algorithm_of;
  for (const auto& t : tables) {
    const std::size_t c_top = t.column("topology");
    const std::size_t c_n = t.column("n_cells");
    const std::size_t c_alg = t.column("algorithm");
    static_cast<void>(t.column("seed"));
    const std::size_t c_eta = t.column("best_eta_percent");
    static_cast<void>(t.column("evals_used"));
    for (const auto& row : t.rows) {
      const std::string key = row[c_top] + " " + row[c_n];
      const std::string col = column_name(t, row[c_alg], many);
      const double eta = number(row[c_eta], t.label);
      algorithm_of[col] = row[c_alg];
      if (!best.count(key)) {
        row_order.push_back(key);
        try {
          keys[key] = {solar::parse_topology(row[c_top]),
                       static_cast<std::size_t>(number(row[c_n], t.label))};
        } catch (const std::invalid_argument&) {
          throw SchemaError(t.label + ": unknown topology '" + row[c_top] + "'");
        }
      }
      auto& slot = best[key];
      const auto it = slot.find(col);
      slot[col] = it == slot.end() ? eta : std::max(it->second, eta);
      if (std::find(columns.begin(), columns.end(), col) == columns.end()) {
        columns.push_back(col);
      }
    }
  }
  std::stable_sort(row_order.begin(), row_order.end(), [&](const auto& a, const auto& b) {
    return keys[a] < keys[b];
  });
  for (const auto& key : row_order) {
    for (const auto& [col, eta] : best[key]) {
      char text[32];
      std::snprintf(text, sizeof text, "%.3f", eta);
      grid[key][col] = Cell{-std::round(eta * 1000.0) / 1000.0, text};
      if (algorithm_of[col] != to_string(Algorithm::Nmcs)) {
        continue;
      }
      const auto& [topology, n] = keys[key];
      if (const auto ref = solar_reference(topology, n)) {
        if (std::abs(eta - ref->eta_percent) > ref->tolerance) {
          outcome.failures.push_back(col + " " + key + ": best efficiency " + fmt(eta) +
                                     "% not within " + fmt(ref->tolerance) + " of " +
                                     fmt(ref->eta_percent) + "%");
        }
      }
    }
  }
  outcome.text += render("best efficiency over seeds (%)", row_order, columns, grid);
}

}  // namespace

ReportOutcome compare_report(const std::vector<std::filesystem::path>& csv_paths) {
  if (csv_paths.empty()) {
    throw SchemaError("no CSV files to compare");
  }
  std::vector<Table> benchmark_tables;
  std::vector<Table> solar_tables;
  for (const auto& p : csv_paths) {
    Table t = read_table(p);
    const bool bench = std::find(t.header.begin(), t.header.end(), "function") != t.header.end();
    const bool sol = std::find(t.header.begin(), t.header.end(), "topology") != t.header.end();
    if (bench == sol) {
      throw SchemaError(p.string() + ": neither a benchmark nor a solar result file");
    }
    (bench ? benchmark_tables : solar_tables).push_back(std::move(t));
  }
  ReportOutcome outcome;
  if (!benchmark_tables.empty()) {
    benchmark_report(benchmark_tables, outcome);
  }
  if (!solar_tables.empty()) {
    if (!outcome.text.empty()) {
      outcome.text += '\n';
    }
    solar_report(solar_tables, outcome);
  }
  if (outcome.failures.empty()) {
    outcome.text += "\nall reference checks passed\n";
  } else {
    outcome.text += "\nreference checks failed:\n";
    for (const auto& f : outcome.failures) {
      outcome.text += "  " + f + '\n';
    }
  }
  return outcome;
}

}  // namespace nmcs::experiment
