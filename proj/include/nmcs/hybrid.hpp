#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "nmcs/nelder_mead.hpp"
#include "nmcs/objective.hpp"

namespace nmcs {

// Cuckoo search whose nests are Nelder-Mead simplexes. A nest is improved by
// one flip instead of a Levy flight; a nest that beats a randomly chosen rival
// donates its p non-best vertices to the rival's worst slots; every k-th
// iteration the worst fraction of the colony is rebuilt at random.

class RankUnavailable : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SimplexNest {
  Simplex simplex;

  [[nodiscard]] double fitness() const { return simplex.best_value(); }
};

struct HybridParams {
  std::size_t n_nests = 6;
  // Vertices handed over by a migration.
  std::size_t p = 1;
  // Abandonment period in iterations; 0 means 2 * n_nests.
  std::size_t k = 0;
  double p_a = 0.25;
  double init_scale_max = 0.25;
  double epsilon = 1e-7;
  // Size of the ranking pool of the stop rule; 0 means max(2, n_nests / 3).
  std::size_t ranking_pool = 0;
  NelderMeadOptions flip = search_options();

  [[nodiscard]] std::size_t abandon_period() const { return k != 0 ? k : 2 * n_nests; }
  [[nodiscard]] std::size_t pool_size() const {
    return ranking_pool != 0 ? ranking_pool : std::max<std::size_t>(2, n_nests / 3);
  }
  void validate(std::size_t dimension) const;
};

struct Colony {
  std::vector<SimplexNest> nests;
  HybridParams params;

  [[nodiscard]] std::size_t best_index() const;
};

/// Builds n_nests simplexes: the first ones around `anchors`, the rest
/// around uniform random points, each with scale ~ U(0, init_scale_max).
Colony init_colony(const HybridParams& params, const std::vector<Point>& anchors,
                   CountedObjective& f, Rng& rng);

/// Copies the donor's vertices of rank 2..p+1 over the target's p worst
/// vertices. Values are copied, not recomputed.
SimplexNest migrate(const SimplexNest& donor, const SimplexNest& target, std::size_t p);

/// Spread sqrt(sum (f_i - mean)^2) of the `pool` best nest fitnesses.
double colony_spread(const Colony& colony, std::size_t pool);

/// True when colony_spread() is below epsilon.
bool stop_check(const Colony& colony, std::size_t pool, double epsilon);

/// Events emitted by nmcs_minimize, for tests and tracing.
struct HybridObserver {
  std::function<void(std::size_t iteration, std::size_t nest, const FlipResult&)> on_flip;
  std::function<void(const SimplexNest& donor, const SimplexNest& before,
                     const SimplexNest& after)>
      on_migrate;
  std::function<void(std::size_t iteration, const std::vector<std::size_t>& rebuilt,
                     std::size_t best_nest)>
      on_abandon;
  std::function<void(std::size_t iteration, const Colony&)> on_iteration;
};

RunReport nmcs_minimize(const ObjectiveSpec& spec, const HybridParams& params,
                        const std::vector<Point>& anchors, std::size_t max_evals,
                        std::uint64_t seed, const HybridObserver* observer = nullptr);

}  // namespace nmcs
