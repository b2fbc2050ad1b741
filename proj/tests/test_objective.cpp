#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "nmcs/baselines.hpp"
#include "nmcs/cuckoo.hpp"
#include "nmcs/hybrid.hpp"
#include "nmcs/nelder_mead.hpp"

using namespace nmcs;
using testing::sphere_spec;

TEST_CASE("evaluate_counted counts and checks") {
  const auto spec = sphere_spec(2);
  EvaluationBudget budget{10, 0};
  CHECK(evaluate_counted(spec, budget, Point{0.0, 0.0}) == 0.0);
  CHECK(budget.used == 1);
  CHECK(evaluate_counted(spec, budget, Point{1.0, 2.0}) == 5.0);
  CHECK(budget.used == 2);

  EvaluationBudget spent{10, 10};
  CHECK_THROWS_AS(evaluate_counted(spec, spent, Point{1.0, 1.0}), BudgetExhausted);
  CHECK(spent.used == 10);
  CHECK_THROWS_AS(evaluate_counted(spec, budget, Point{1.0}), DimensionMismatch);
}

TEST_CASE("clamp_to_bounds") {
  const auto one = testing::box("b", 1, 0.0, 4.0, sphere);
  CHECK(clamp_to_bounds(Point{5.0}, one) == Point{4.0});
  CHECK(clamp_to_bounds(Point{2.0}, one) == Point{2.0});
  const auto two = testing::box("b", 2, 0.0, 4.0, sphere);
  CHECK(clamp_to_bounds(Point{-1.0, 5.0}, two) == Point{0.0, 4.0});

  Rng rng(3);
  std::uniform_real_distribution<double> wide(-20.0, 20.0);
  for (int i = 0; i < 1000; ++i) {
    const Point x{wide(rng), wide(rng)};
    const Point once = clamp_to_bounds(x, two);
    CHECK(clamp_to_bounds(once, two) == once);
  }
}

TEST_CASE("ObjectiveSpec validation") {
  auto spec = sphere_spec(2);
  CHECK_NOTHROW(spec.validate());
  spec.lower[1] = spec.upper[1];
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  auto no_eval = sphere_spec(2);
  no_eval.evaluator = nullptr;
  CHECK_THROWS_AS(no_eval.validate(), std::invalid_argument);
}

TEST_CASE("value_spread and StopRule") {
  const double equal[] = {2.0, 2.0, 2.0};
  CHECK(value_spread(equal) == 0.0);
  const double pair[] = {0.0, 1e-3};
  CHECK(value_spread(pair) == doctest::Approx(std::sqrt(2.0) * 5e-4).epsilon(1e-12));
  StopRule rule;
  CHECK_FALSE(rule.satisfied(pair));
  const double close[] = {1e-8, 1.05e-8};
  CHECK(rule.satisfied(close));
  CHECK(value_spread(close) == doctest::Approx(3.5355e-10).epsilon(1e-4));
  StopRule off{0.0};
  CHECK_FALSE(off.satisfied(equal));
}

namespace {

// Runs every optimizer on `spec` and hands each report to `check`.
template <class Check>
void each_optimizer(const ObjectiveSpec& spec, std::size_t budget, std::uint64_t seed,
                    Check&& check) {
  const Point anchor(spec.dimension, 3.0);
  HybridParams hp;
  check("nms", nms_minimize(spec, anchor, budget));
  check("nms_multistart", nms_multistart(spec, {anchor, Point(spec.dimension, -2.0)}, budget));
  check("cs", cs_minimize(spec, CsParams{}, budget, seed));
  check("nmcs", nmcs_minimize(spec, hp, {}, budget, seed));
  check("sa", sa_minimize(spec, SaParams{}, {anchor}, budget, seed));
  check("ga", ga_minimize(spec, GaParams{}, {}, budget, seed));
}

}  // namespace

TEST_CASE("reported evaluations match an independent call counter") {
  for (std::size_t budget : {37u, 500u}) {
    const testing::CallCounter counter;
    auto spec = sphere_spec(3);
    spec.evaluator = counter.wrap(sphere);
    std::size_t before = 0;
    each_optimizer(spec, budget, 11, [&](const char* name, const RunReport& r) {
      INFO(name << " budget " << budget);
      CHECK(r.evals_used == counter.count() - before);
      CHECK(r.evals_used <= budget);
      before = counter.count();
    });
  }
}

TEST_CASE("run reports are consistent and deterministic") {
  const auto& rosen = benchmark("R2");
  std::vector<RunReport> first;
  each_optimizer(rosen.spec, 800, 5,
                 [&](const char*, const RunReport& r) { first.push_back(r); });
  std::size_t i = 0;
  each_optimizer(rosen.spec, 800, 5, [&](const char* name, const RunReport& r) {
    INFO(name);
    CHECK(testing::same_report(r, first[i]));
    ++i;
    CHECK(r.best_value == rosen.spec.evaluator(r.best_point));
    for (std::size_t k = 1; k < r.trace.size(); ++k) {
      CHECK(r.trace[k].best_value <= r.trace[k - 1].best_value);
      CHECK(r.trace[k].evals > r.trace[k - 1].evals);
    }
    if (!r.trace.empty()) {
      CHECK(r.trace.back().best_value == r.best_value);
    }
  });
}
