#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "nmcs/benchmarks.hpp"
#include "nmcs/nelder_mead.hpp"

using namespace nmcs;

TEST_CASE("suite contents") {
  const std::vector<std::pair<std::string, std::size_t>> expected = {
      {"RC", 2}, {"B2", 2}, {"GP", 2}, {"SH", 2}, {"Z2", 2},
      {"R2", 2}, {"H34", 3}, {"S45", 4}, {"R5", 5}, {"R10", 10}};
  REQUIRE(suite().size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(suite()[i].spec.name == expected[i].first);
    CHECK(suite()[i].spec.dimension == expected[i].second);
    CHECK(&benchmark(expected[i].first) == &suite()[i]);
  }
  CHECK_THROWS_AS(benchmark("XX"), std::out_of_range);
}

TEST_CASE("stored optima evaluate to the stored value") {
  for (const auto& fn : suite()) {
    INFO(fn.spec.name);
    CHECK_FALSE(fn.optimum_points.empty());
    for (const auto& x : fn.optimum_points) {
      CHECK(std::abs(fn.spec.evaluator(x) - fn.optimum_value) <= 1e-9);
    }
    REQUIRE(fn.spec.known_optimum.has_value());
    CHECK(fn.spec.known_optimum->value == fn.optimum_value);
  }
}

TEST_CASE("function values") {
  CHECK(goldstein_price(Point{0, -1}) == doctest::Approx(3.0));
  CHECK(rosenbrock(Point(5, 1.0)) == 0.0);
  CHECK(rosenbrock(Point(10, 1.0)) == 0.0);
  CHECK(zakharov(Point{0, 0}) == 0.0);
  CHECK(branin(Point{std::numbers::pi, 2.275}) == doctest::Approx(0.397887357729738).epsilon(1e-12));
  CHECK(bohachevsky2(Point{0, 0}) == doctest::Approx(0.0));
  CHECK(shekel5(Point{4, 4, 4, 4}) == doctest::Approx(-10.1532).epsilon(1e-5));
  CHECK(hartmann3(Point{0.114614, 0.555649, 0.852547}) ==
        doctest::Approx(-3.86278).epsilon(1e-5));
}

TEST_CASE("error_vs_optimum") {
  CHECK(error_vs_optimum(benchmark("RC"), 0.397987) == doctest::Approx(1.0e-4).epsilon(0.01));
  CHECK(error_vs_optimum(benchmark("SH"), -186.7299) == doctest::Approx(1.0e-3).epsilon(0.01));
  for (const auto& fn : suite()) {
    CHECK(error_vs_optimum(fn, fn.optimum_value) == 0.0);
  }
}

// Dense random sampling followed by a Nelder-Mead polish of the best samples
// must not beat the stored optimum, and must come close to it.
TEST_CASE("random-sample oracle agrees with the stored optima") {
  for (const char* name : {"RC", "B2", "GP", "SH", "Z2", "H34", "S45"}) {
    const auto& fn = benchmark(name);
    INFO(name);
    Rng rng(31);
    std::vector<std::pair<double, Point>> samples;
    for (int i = 0; i < 20000; ++i) {
      Point x = uniform_in_bounds(fn.spec, rng);
      const double v = fn.spec.evaluator(x);
      samples.emplace_back(v, std::move(x));
    }
    std::partial_sort(samples.begin(), samples.begin() + 20, samples.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
    double best = samples.front().first;
    for (int i = 0; i < 20; ++i) {
      const auto r = nms_minimize(fn.spec, samples[static_cast<std::size_t>(i)].second, 4000);
      best = std::min(best, r.best_value);
    }
    CHECK(best >= fn.optimum_value - 1e-9);
    CHECK(best <= fn.optimum_value + 1e-5);
  }
}

TEST_CASE("evaluators are pure and bounded on their domains") {
  Rng rng(2);
  for (const auto& fn : suite()) {
    for (int i = 0; i < 200; ++i) {
      const Point x = uniform_in_bounds(fn.spec, rng);
      const double a = fn.spec.evaluator(x);
      CHECK(std::isfinite(a));
      CHECK(a == fn.spec.evaluator(x));
      CHECK(a >= fn.optimum_value - 1e-9);
    }
  }
}
