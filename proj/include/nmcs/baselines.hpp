#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "nmcs/objective.hpp"

namespace nmcs {

/// Simulated annealing with an exponential cooling schedule, Boltzmann-style
/// steps (length sqrt(T), uniformly random direction) and periodic
/// reannealing back to the initial temperature.
struct SaParams {
  double t0 = 100.0;
  double cooling = 0.95;
  // Number of accepted moves between two reannealings.
  std::size_t reanneal_interval = 100;

  void validate() const;
};

/// Metropolis rule: improving moves always pass, worsening moves pass with
/// probability exp(-delta / temperature).
bool metropolis_accept(double delta, double temperature, Rng& rng);

/// Uniformly distributed direction on the unit sphere in `dimension` dimensions.
Point random_direction(std::size_t dimension, Rng& rng);

/// The budget is split evenly across `starts`; the best point over all
/// chains is reported.
RunReport sa_minimize(const ObjectiveSpec& spec, const SaParams& params,
                      const std::vector<Point>& starts, std::size_t max_evals,
                      std::uint64_t seed);

/// Generational GA: elites carried over unevaluated, a crossover fraction of
/// the remaining children bred by blend crossover of tournament winners, the
/// rest mutated copies with per-gene uniform resampling.
struct GaParams {
  std::size_t pop_size = 15;
  std::size_t elite_count = 2;
  double crossover_fraction = 0.8;
  double mutation_rate = 0.01;
  std::size_t tournament_size = 2;

  void validate() const;
  /// Children bred by crossover in every generation.
  [[nodiscard]] std::size_t crossover_children() const;
};

struct GaObserver {
  // Called after each generation (generation 0 is the initial population)
  // with the population values, sorted ascending.
  std::function<void(std::size_t generation, const std::vector<double>& values,
                     std::size_t evals_used)>
      on_generation;
};

RunReport ga_minimize(const ObjectiveSpec& spec, const GaParams& params,
                      const std::vector<Point>& seeds, std::size_t max_evals, std::uint64_t seed,
                      const GaObserver* observer = nullptr);

}  // namespace nmcs
