#include "nmcs/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nmcs/cuckoo.hpp"
#include "nmcs/stopwatch.hpp"

namespace nmcs {

void HybridParams::validate(std::size_t dimension) const {
  if (n_nests == 0) {
    throw std::invalid_argument("the colony needs at least one nest");
  }
  if (p < 1 || p > dimension) {
    throw std::invalid_argument("migrated vertex count must lie in [1, d]");
  }
  if (!(p_a > 0.0 && p_a < 1.0)) {
    throw std::invalid_argument("abandonment fraction must lie in (0, 1)");
  }
  if (!(init_scale_max > 0.0)) {
    throw std::invalid_argument("initial simplex scale bound must be positive");
  }
  flip.coefficients.validate();
}

std::size_t Colony::best_index() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < nests.size(); ++i) {
    if (nests[i].fitness() < nests[best].fitness()) {
      best = i;
    }
  }
  return best;
}

namespace {

SimplexNest build_nest(std::span<const double> anchor, const HybridParams& params,
                       CountedObjective& f, Rng& rng) {
  std::uniform_real_distribution<double> scale_dist(0.0, params.init_scale_max);
  double scale = scale_dist(rng);
  // U(0, a) can return exactly 0, which would collapse the simplex.
  while (scale == 0.0) {
    scale = scale_dist(rng);
  }
  return {make_initial_simplex(anchor, scale, f)};
}

}  // namespace

Colony init_colony(const HybridParams& params, const std::vector<Point>& anchors,
                   CountedObjective& f, Rng& rng) {
  Colony colony;
  colony.params = params;
  colony.nests.reserve(params.n_nests);
  for (std::size_t i = 0; i < params.n_nests; ++i) {
    const Point anchor = i < anchors.size() ? anchors[i] : uniform_in_bounds(f.spec(), rng);
    colony.nests.push_back(build_nest(anchor, params, f, rng));
  }
  return colony;
}

SimplexNest migrate(const SimplexNest& donor, const SimplexNest& target, std::size_t p) {
  const std::size_t vertex_count = target.simplex.vertices.size();
  if (donor.simplex.vertices.size() != vertex_count) {
    throw DimensionMismatch(vertex_count, donor.simplex.vertices.size());
  }
  if (p == 0 || p + 1 > vertex_count) {
    throw RankUnavailable("cannot migrate " + std::to_string(p) + " non-best vertices out of " +
                          std::to_string(vertex_count));
  }
  SimplexNest out = target;
  const auto& incoming = donor.simplex.vertices;
  for (std::size_t r = 0; r < p; ++r) {
    // Donor rank r+2 (1-based) replaces target rank d+1-r.
    const std::size_t from = 1 + r;
    const std::size_t to = vertex_count - 1 - r;
    // A copy of the donor's best, or of a point the target already holds,
    // would leave duplicate vertices behind.
    const bool duplicate =
        incoming[from] == incoming[0] ||
        std::find(target.simplex.vertices.begin(), target.simplex.vertices.end(),
                  incoming[from]) != target.simplex.vertices.end();
    if (duplicate) {
      continue;
    }
    out.simplex.vertices[to] = incoming[from];
    out.simplex.values[to] = donor.simplex.values[from];
  }
  out.simplex.sort();
  return out;
}

namespace {

// Equal up to rounding: the same flip reached along two arithmetic paths.
bool same_point(const Point& a, const Point& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > 1e-12 * (1.0 + std::abs(a[i]))) {
      return false;
    }
  }
  return true;
}

}  // namespace

double colony_spread(const Colony& colony, std::size_t pool) {
  std::vector<std::size_t> order(colony.nests.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return colony.nests[a].fitness() < colony.nests[b].fitness();
  });
  // Nests sharing their best vertex count once.
  std::vector<const Point*> seen;
  std::vector<double> fitness;
  for (std::size_t q : order) {
    if (fitness.size() == pool) {
      break;
    }
    const Point& best = colony.nests[q].simplex.best();
    const bool repeat = std::any_of(seen.begin(), seen.end(),
                                    [&](const Point* p) { return same_point(*p, best); });
    if (!repeat) {
      seen.push_back(&best);
      fitness.push_back(colony.nests[q].fitness());
    }
  }
  return value_spread(fitness);
}

bool stop_check(const Colony& colony, std::size_t pool, double epsilon) {
  return colony_spread(colony, pool) < epsilon;
}

RunReport nmcs_minimize(const ObjectiveSpec& spec, const HybridParams& params,
                        const std::vector<Point>& anchors, std::size_t max_evals,
                        std::uint64_t seed, const HybridObserver* observer) {
  spec.validate();
  params.validate(spec.dimension);
  const Stopwatch clock;
  Rng rng(seed);
  CountedObjective f(spec, max_evals);
  const std::size_t n = params.n_nests;
  const std::size_t period = params.abandon_period();
  const std::size_t pool = params.pool_size();

  bool fired = false;
  try {
    Colony colony = init_colony(params, anchors, f, rng);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::uniform_int_distribution<std::size_t> pick_other(0, n >= 2 ? n - 2 : 0);

    for (std::size_t t = 1;; ++t) {
      if (stop_check(colony, pool, params.epsilon)) {
        fired = true;
        break;
      }
      if (f.exhausted()) {
        break;
      }

      const std::size_t i = pick(rng);
      FlipResult flipped = flip(colony.nests[i].simplex, f, params.flip);
      if (observer && observer->on_flip) {
        observer->on_flip(t, i, flipped);
      }
      colony.nests[i].simplex = std::move(flipped.simplex);

      if (n >= 2) {
        std::size_t j = pick_other(rng);
        if (j >= i) {
          ++j;
        }
        if (colony.nests[i].fitness() < colony.nests[j].fitness()) {
          SimplexNest moved = migrate(colony.nests[i], colony.nests[j], params.p);
          if (observer && observer->on_migrate) {
            observer->on_migrate(colony.nests[i], colony.nests[j], moved);
          }
          colony.nests[j] = std::move(moved);
        }
      }

      // Abandon at t = k+1, 2k+1, ... (mod(t, k) = 1 with the first round
      // deferred until the colony has been searched for k iterations).
      if (t > 1 && (t - 1) % period == 0) {
        std::vector<double> fitness(n);
        for (std::size_t q = 0; q < n; ++q) {
          fitness[q] = colony.nests[q].fitness();
        }
        const auto rebuilt = abandonment_targets(fitness, params.p_a);
        if (observer && observer->on_abandon) {
          observer->on_abandon(t, rebuilt, colony.best_index());
        }
        for (std::size_t q : rebuilt) {
          const Point anchor = uniform_in_bounds(spec, rng);
          colony.nests[q] = build_nest(anchor, params, f, rng);
        }
      }
      if (observer && observer->on_iteration) {
        observer->on_iteration(t, colony);
      }
    }
  } catch (const BudgetExhausted&) {
  }
  return f.report(seed, clock.seconds(), fired);
}

}  // namespace nmcs
