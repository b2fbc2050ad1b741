#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "nmcs/cuckoo.hpp"
#include "nmcs/hybrid.hpp"

using namespace nmcs;
using testing::sphere_spec;

namespace {

SimplexNest nest(std::vector<Point> vertices, std::vector<double> values) {
  SimplexNest n{Simplex{std::move(vertices), std::move(values)}};
  n.simplex.sort();
  return n;
}

SimplexNest nest_with_fitness(double fitness, double offset) {
  return nest({{offset, 0}, {offset, 1}, {offset, 2}}, {fitness, fitness + 1, fitness + 2});
}

bool contains(const Simplex& s, const Point& p) {
  return std::find(s.vertices.begin(), s.vertices.end(), p) != s.vertices.end();
}

}  // namespace

TEST_CASE("init_colony") {
  const auto spec = sphere_spec(2);
  HybridParams params;
  {
    CountedObjective f(spec, 100);
    Rng rng(1);
    const auto colony = init_colony(params, {}, f, rng);
    CHECK(colony.nests.size() == 6);
    CHECK(f.budget().used == 18);
    for (const auto& n : colony.nests) {
      CHECK(n.simplex.vertices.size() == 3);
      CHECK(n.simplex.is_sorted());
    }
  }
  {
    params.n_nests = 1;
    CountedObjective f(spec, 100);
    Rng rng(4);
    const auto colony = init_colony(params, {Point{1, 1}}, f, rng);
    Rng replay(4);
    const double scale = std::uniform_real_distribution<double>(0.0, 0.25)(replay);
    const auto& s = colony.nests[0].simplex;
    CHECK(contains(s, Point{1, 1}));
    CHECK(contains(s, Point{1 + scale, 1}));
    CHECK(contains(s, Point{1, 1 + scale}));
  }
  {
    params.n_nests = 5;
    CountedObjective f1(spec, 100);
    CountedObjective f2(spec, 100);
    Rng r1(77);
    Rng r2(77);
    const auto a = init_colony(params, {Point{3, -2}}, f1, r1);
    const auto b = init_colony(params, {Point{3, -2}}, f2, r2);
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(a.nests[i].simplex.vertices == b.nests[i].simplex.vertices);
      CHECK(a.nests[i].simplex.values == b.nests[i].simplex.values);
    }
  }
}

TEST_CASE("migrate") {
  const auto donor = nest({{0, 0}, {0, 1}, {0, 2}}, {0.1, 0.5, 0.9});
  const auto target = nest({{5, 0}, {5, 1}, {5, 2}}, {1, 2, 3});

  const auto one = migrate(donor, target, 1);
  CHECK(one.simplex.values == std::vector<double>{0.5, 1, 2});
  CHECK(one.simplex.vertices[0] == Point{0, 1});
  CHECK_FALSE(contains(one.simplex, Point{0, 0}));

  const auto two = migrate(donor, target, 2);
  CHECK(two.simplex.values == std::vector<double>{0.5, 0.9, 1});
  CHECK(two.simplex.vertices[2] == Point{5, 0});

  CHECK_THROWS_AS(migrate(donor, target, 3), RankUnavailable);
  CHECK_THROWS_AS(migrate(donor, target, 0), RankUnavailable);

  // A donor vertex the target already holds is not copied twice.
  const auto sharing = nest({{0, 0}, {5, 1}, {0, 2}}, {0.1, 2, 2.5});
  const auto shared = migrate(sharing, target, 1);
  CHECK(shared.simplex.values == target.simplex.values);
}

TEST_CASE("stop_check") {
  Colony colony;
  for (int i = 0; i < 4; ++i) {
    colony.nests.push_back(nest_with_fitness(2.0, i));
  }
  CHECK(colony_spread(colony, 2) == 0.0);
  CHECK(stop_check(colony, 2, 1e-7));

  Colony pair;
  pair.nests = {nest_with_fitness(0.0, 0), nest_with_fitness(1e-3, 1)};
  CHECK(colony_spread(pair, 2) == doctest::Approx(7.0710678e-4).epsilon(1e-6));
  CHECK_FALSE(stop_check(pair, 2, 1e-7));

  Colony close;
  close.nests = {nest_with_fitness(1.05e-8, 0), nest_with_fitness(1e-8, 1),
                 nest_with_fitness(5.0, 2)};
  CHECK(colony_spread(close, 2) == doctest::Approx(3.5355e-10).epsilon(1e-4));
  CHECK(stop_check(close, 2, 1e-7));

  // Nests sharing their best vertex count once.
  Colony clones;
  clones.nests = {nest_with_fitness(0.5, 0), nest_with_fitness(0.5, 0), nest_with_fitness(0.9, 1)};
  CHECK(colony_spread(clones, 2) == doctest::Approx(std::sqrt(0.08)));
}

TEST_CASE("nmcs invariants on Shubert") {
  const auto& fn = benchmark("SH");
  HybridParams params;
  params.k = 12;
  std::size_t migrations = 0;
  std::vector<std::size_t> abandon_rounds;
  std::size_t last_iteration = 0;
  HybridObserver obs;
  obs.on_migrate = [&](const SimplexNest& donor, const SimplexNest& before,
                       const SimplexNest& after) {
    ++migrations;
    CHECK(donor.fitness() < before.fitness());
    if (!contains(before.simplex, donor.simplex.best())) {
      CHECK_FALSE(contains(after.simplex, donor.simplex.best()));
    }
    CHECK(after.simplex.vertices.size() == 3);
  };
  obs.on_abandon = [&](std::size_t t, const std::vector<std::size_t>& rebuilt,
                       std::size_t best) {
    abandon_rounds.push_back(t);
    CHECK(rebuilt.size() == 2);
    CHECK(std::find(rebuilt.begin(), rebuilt.end(), best) == rebuilt.end());
  };
  obs.on_iteration = [&](std::size_t t, const Colony& colony) {
    CHECK(colony.nests.size() == 6);
    last_iteration = t;
  };
  const auto r = nmcs_minimize(fn.spec, params, {}, 20000, 3, &obs);
  CHECK(migrations > 0);
  REQUIRE(!abandon_rounds.empty());
  for (std::size_t i = 0; i < abandon_rounds.size(); ++i) {
    CHECK(abandon_rounds[i] == 13 + 12 * i);
  }
  CHECK(abandon_rounds.size() == (last_iteration - 1) / 12);
  for (std::size_t k = 1; k < r.trace.size(); ++k) {
    CHECK(r.trace[k].best_value <= r.trace[k - 1].best_value);
  }
}

TEST_CASE("one nest reduces to plain Nelder-Mead") {
  const auto& fn = benchmark("R2");
  const Point anchor{-1.2, 1.0};
  const std::size_t budget = 400;
  const std::uint64_t seed = 21;

  HybridParams params;
  params.n_nests = 1;
  params.epsilon = 0.0;
  std::vector<FlipResult> hybrid_flips;
  HybridObserver obs;
  obs.on_flip = [&](std::size_t, std::size_t nest_index, const FlipResult& r) {
    CHECK(nest_index == 0);
    hybrid_flips.push_back(r);
  };
  const auto hybrid = nmcs_minimize(fn.spec, params, {anchor}, budget, seed, &obs);

  // The same initial simplex, built from the same scale draw.
  Rng rng(seed);
  std::uniform_real_distribution<double> scale_dist(0.0, params.init_scale_max);
  double scale = scale_dist(rng);
  while (scale == 0.0) {
    scale = scale_dist(rng);
  }
  CountedObjective f(fn.spec, budget);
  Simplex s = make_initial_simplex(anchor, scale, f);
  const Simplex start = s;
  std::size_t i = 0;
  try {
    for (;; ++i) {
      auto r = flip(s, f, search_options());
      REQUIRE(i < hybrid_flips.size());
      CHECK(r.move == hybrid_flips[i].move);
      CHECK(r.simplex.vertices == hybrid_flips[i].simplex.vertices);
      s = std::move(r.simplex);
    }
  } catch (const BudgetExhausted&) {
  }
  CHECK(i == hybrid_flips.size());

  NmsParams plain;
  plain.stop = StopRule{0.0};
  const auto nms = nms_minimize(fn.spec, start, budget - 3, plain);
  CHECK(nms.best_value == hybrid.best_value);
  CHECK(nms.best_point == hybrid.best_point);
  CHECK(hybrid.evals_used == budget);
}

TEST_CASE("constant objective stops at the first check") {
  const auto flat = testing::box("flat", 2, -5, 5, [](std::span<const double>) { return 5.0; });
  const auto r = nmcs_minimize(flat, HybridParams{}, {}, 1000, 9);
  CHECK(r.stop_rule_fired);
  CHECK(r.evals_used == 18);
  CHECK(r.best_value == 5.0);
}

TEST_CASE("hybrid parameter validation") {
  HybridParams p;
  CHECK_NOTHROW(p.validate(2));
  CHECK(p.abandon_period() == 12);
  CHECK(p.pool_size() == 2);
  p.p = 3;
  CHECK_THROWS_AS(p.validate(2), std::invalid_argument);
  p = HybridParams{};
  p.n_nests = 0;
  CHECK_THROWS_AS(p.validate(2), std::invalid_argument);
  p = HybridParams{};
  p.p_a = 0.0;
  CHECK_THROWS_AS(p.validate(2), std::invalid_argument);
  p = HybridParams{};
  p.n_nests = 20;
  CHECK(p.pool_size() == 6);
  CHECK(p.abandon_period() == 40);
}

TEST_CASE("nmcs converges on the sphere") {
  const auto r = nmcs_minimize(sphere_spec(3), HybridParams{}, {}, 5000, 2);
  CHECK(r.stop_rule_fired);
  CHECK(r.best_value < 1e-4);
  CHECK(r.evals_used <= 5000);
}
