#include "nmcs/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "nmcs/stopwatch.hpp"

namespace nmcs {

void SaParams::validate() const {
  if (!(t0 > 0.0)) {
    throw std::invalid_argument("initial temperature must be positive");
  }
  if (!(cooling > 0.0 && cooling < 1.0)) {
    throw std::invalid_argument("cooling factor must lie in (0, 1)");
  }
  if (reanneal_interval < 1) {
    throw std::invalid_argument("reannealing interval must be at least 1");
  }
}

bool metropolis_accept(double delta, double temperature, Rng& rng) {
  if (delta <= 0.0) {
    return true;
  }
  if (!(temperature > 0.0)) {
    return false;
  }
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return u(rng) < std::exp(-delta / temperature);
}

Point random_direction(std::size_t dimension, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Point dir(dimension);
  double norm = 0.0;
  while (norm == 0.0) {
    for (double& v : dir) {
      v = normal(rng);
    }
    norm = std::sqrt(std::inner_product(dir.begin(), dir.end(), dir.begin(), 0.0));
  }
  for (double& v : dir) {
    v /= norm;
  }
  return dir;
}

RunReport sa_minimize(const ObjectiveSpec& spec, const SaParams& params,
                      const std::vector<Point>& starts, std::size_t max_evals,
                      std::uint64_t seed) {
  spec.validate();
  params.validate();
  if (starts.empty()) {
    throw std::invalid_argument("simulated annealing needs at least one start");
  }
  const Stopwatch clock;
  Rng rng(seed);
  CountedObjective f(spec, max_evals);
  const std::size_t share = max_evals / starts.size();

  try {
    for (std::size_t s = 0; s < starts.size(); ++s) {
      const std::size_t limit = s + 1 == starts.size() ? max_evals : (s + 1) * share;
      if (f.budget().used >= limit) {
        continue;
      }
      Point x = f.clamp(starts[s]);
      double fx = f(x);
      std::size_t step = 0;
      std::size_t accepted = 0;
      double temperature = params.t0;
      while (f.budget().used < limit) {
        const Point dir = random_direction(spec.dimension, rng);
        const double length = std::sqrt(temperature);
        Point y = x;
        for (std::size_t k = 0; k < y.size(); ++k) {
          y[k] += length * dir[k];
        }
        y = f.clamp(y);
        const double fy = f(y);
        const bool accept = metropolis_accept(fy - fx, temperature, rng);
        ++step;
        if (accept) {
          x = std::move(y);
          fx = fy;
          ++accepted;
        }
        if (accept && accepted % params.reanneal_interval == 0) {
          step = 0;
        }
        temperature = params.t0 * std::pow(params.cooling, static_cast<double>(step));
      }
    }
  } catch (const BudgetExhausted&) {
  }
  return f.report(seed, clock.seconds(), false);
}

void GaParams::validate() const {
  if (pop_size < 2) {
    throw std::invalid_argument("population needs at least two members");
  }
  if (elite_count >= pop_size) {
    throw std::invalid_argument("elite count must be below the population size");
  }
  if (!(crossover_fraction >= 0.0 && crossover_fraction <= 1.0)) {
    throw std::invalid_argument("crossover fraction must lie in [0, 1]");
  }
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) {
    throw std::invalid_argument("mutation rate must lie in [0, 1]");
  }
  if (tournament_size < 1) {
    throw std::invalid_argument("tournament size must be at least 1");
  }
}

std::size_t GaParams::crossover_children() const {
  return static_cast<std::size_t>(
      std::lround(crossover_fraction * static_cast<double>(pop_size - elite_count)));
}

namespace {

struct Individual {
  Point genes;
  double value = 0.0;
};

const Individual& tournament(const std::vector<Individual>& pop, std::size_t size, Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
  const Individual* winner = &pop[pick(rng)];
  for (std::size_t k = 1; k < size; ++k) {
    const Individual& rival = pop[pick(rng)];
    if (rival.value < winner->value) {
      winner = &rival;
    }
  }
  return *winner;
}

void sort_population(std::vector<Individual>& pop) {
  std::stable_sort(pop.begin(), pop.end(),
                   [](const Individual& a, const Individual& b) { return a.value < b.value; });
}

}  // namespace

RunReport ga_minimize(const ObjectiveSpec& spec, const GaParams& params,
                      const std::vector<Point>& seeds, std::size_t max_evals, std::uint64_t seed,
                      const GaObserver* observer) {
  spec.validate();
  params.validate();
  const Stopwatch clock;
  Rng rng(seed);
  CountedObjective f(spec, max_evals);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto notify = [&](std::size_t generation, const std::vector<Individual>& pop) {
    if (observer && observer->on_generation) {
      std::vector<double> values;
      for (const auto& ind : pop) {
        values.push_back(ind.value);
      }
      observer->on_generation(generation, values, f.budget().used);
    }
  };

  std::vector<Individual> pop;
  try {
    for (std::size_t i = 0; i < params.pop_size; ++i) {
      Point genes = i < seeds.size() ? f.clamp(seeds[i]) : uniform_in_bounds(spec, rng);
      const double value = f(genes);
      pop.push_back({std::move(genes), value});
    }
    sort_population(pop);
    notify(0, pop);

    const std::size_t n_cross = params.crossover_children();
    const std::size_t n_children = params.pop_size - params.elite_count;
    for (std::size_t generation = 1; !f.exhausted(); ++generation) {
      std::vector<Individual> next(pop.begin(),
                                   pop.begin() + static_cast<std::ptrdiff_t>(params.elite_count));
      for (std::size_t c = 0; c < n_children; ++c) {
        Point child;
        if (c < n_cross) {
          const Individual& a = tournament(pop, params.tournament_size, rng);
          const Individual& b = tournament(pop, params.tournament_size, rng);
          child.resize(spec.dimension);
          for (std::size_t k = 0; k < spec.dimension; ++k) {
            const double lambda = unit(rng);
            child[k] = lambda * a.genes[k] + (1.0 - lambda) * b.genes[k];
          }
        } else {
          child = tournament(pop, params.tournament_size, rng).genes;
          for (std::size_t k = 0; k < spec.dimension; ++k) {
            if (unit(rng) < params.mutation_rate) {
              std::uniform_real_distribution<double> gene(spec.lower[k], spec.upper[k]);
              child[k] = gene(rng);
            }
          }
        }
        child = f.clamp(child);
        const double value = f(child);
        next.push_back({std::move(child), value});
      }
      pop = std::move(next);
      sort_population(pop);
      notify(generation, pop);
    }
  } catch (const BudgetExhausted&) {
  }
  return f.report(seed, clock.seconds(), false);
}

}  // namespace nmcs
