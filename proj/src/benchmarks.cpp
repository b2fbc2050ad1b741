#include "nmcs/benchmarks.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nmcs {

using std::numbers::pi;

double branin(std::span<const double> x) {
  const double a = x[1] - 5.1 / (4.0 * pi * pi) * x[0] * x[0] + 5.0 / pi * x[0] - 6.0;
  return a * a + 10.0 * (1.0 - 1.0 / (8.0 * pi)) * std::cos(x[0]) + 10.0;
}

double bohachevsky2(std::span<const double> x) {
  return x[0] * x[0] + 2.0 * x[1] * x[1] - 0.3 * std::cos(3.0 * pi * x[0]) -
         0.4 * std::cos(4.0 * pi * x[1]) + 0.7;
}

double goldstein_price(std::span<const double> x) {
  const double x1 = x[0];
  const double x2 = x[1];
  const double a = x1 + x2 + 1.0;
  const double b = 2.0 * x1 - 3.0 * x2;
  return (1.0 + a * a *
                    (19.0 - 14.0 * x1 + 3.0 * x1 * x1 - 14.0 * x2 + 6.0 * x1 * x2 +
                     3.0 * x2 * x2)) *
         (30.0 + b * b *
                     (18.0 - 32.0 * x1 + 12.0 * x1 * x1 + 48.0 * x2 - 36.0 * x1 * x2 +
                      27.0 * x2 * x2));
}

double shubert(std::span<const double> x) {
  double s1 = 0.0;
  double s2 = 0.0;
  for (int i = 1; i <= 5; ++i) {
    s1 += i * std::cos((i + 1) * x[0] + i);
    s2 += i * std::cos((i + 1) * x[1] + i);
  }
  return s1 * s2;
}

double zakharov(std::span<const double> x) {
  double sq = 0.0;
  double lin = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sq += x[i] * x[i];
    lin += 0.5 * static_cast<double>(i + 1) * x[i];
  }
  return sq + lin * lin + lin * lin * lin * lin;
}

double rosenbrock(std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double a = x[i + 1] - x[i] * x[i];
    const double b = x[i] - 1.0;
    s += 100.0 * a * a + b * b;
  }
  return s;
}

double hartmann3(std::span<const double> x) {
  static constexpr std::array<std::array<double, 3>, 4> a{{
      {3.0, 10.0, 30.0},
      {0.1, 10.0, 35.0},
      {3.0, 10.0, 30.0},
      {0.1, 10.0, 35.0},
  }};
  static constexpr std::array<double, 4> c{1.0, 1.2, 3.0, 3.2};
  static constexpr std::array<std::array<double, 3>, 4> p{{
      {0.3689, 0.1170, 0.2673},
      {0.4699, 0.4387, 0.7470},
      {0.1091, 0.8732, 0.5547},
      {0.0381, 0.5743, 0.8828},
  }};
  double s = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    double e = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
      e += a[i][j] * (x[j] - p[i][j]) * (x[j] - p[i][j]);
    }
    s += c[i] * std::exp(-e);
  }
  return -s;
}

double shekel5(std::span<const double> x) {
  static constexpr std::array<std::array<double, 4>, 5> a{{
      {4.0, 4.0, 4.0, 4.0},
      {1.0, 1.0, 1.0, 1.0},
      {8.0, 8.0, 8.0, 8.0},
      {6.0, 6.0, 6.0, 6.0},
      {3.0, 7.0, 3.0, 7.0},
  }};
  static constexpr std::array<double, 5> c{0.1, 0.2, 0.2, 0.4, 0.4};
  double s = 0.0;
  for (std::size_t i = 0; i < 5; ++i) {
    double d2 = 0.0;
    for (std::size_t j = 0; j < 4; ++j) {
      d2 += (x[j] - a[i][j]) * (x[j] - a[i][j]);
    }
    s += 1.0 / (d2 + c[i]);
  }
  return -s;
}

double sphere(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) {
    s += v * v;
  }
  return s;
}

namespace {

BenchmarkFunction make(std::string name, std::size_t d, double lo, double hi, Evaluator eval,
                       double optimum, std::vector<Point> points) {
  BenchmarkFunction fn;
  fn.spec.name = std::move(name);
  fn.spec.dimension = d;
  fn.spec.lower.assign(d, lo);
  fn.spec.upper.assign(d, hi);
  fn.spec.evaluator = std::move(eval);
  fn.spec.known_optimum = KnownOptimum{points.front(), optimum};
  fn.optimum_value = optimum;
  fn.optimum_points = std::move(points);
  return fn;
}

std::vector<BenchmarkFunction> build_suite() {
  std::vector<BenchmarkFunction> s;

  auto rc = make("RC", 2, 0.0, 0.0, branin, 0.39788735772973816,
                 {{-pi, 12.275}, {pi, 2.275}, {3.0 * pi, 2.475}});
  rc.spec.lower = {-5.0, 0.0};
  rc.spec.upper = {10.0, 15.0};
  s.push_back(std::move(rc));

  s.push_back(make("B2", 2, -5.0, 10.0, bohachevsky2, 0.0, {{0.0, 0.0}}));
  s.push_back(make("GP", 2, -2.0, 2.0, goldstein_price, 3.0, {{0.0, -1.0}}));
  // Shubert has 18 global minima; these were located by dense random
  // sampling followed by local polishing.
  s.push_back(make("SH", 2, -10.0, 10.0, shubert, -186.73090883102392,
                   {{-7.708313736827895, -7.083506408263668},
                    {-7.708313736732142, -0.8003211014534883},
                    {-7.708313735957033, 5.48286421017802},
                    {-7.083506408587889, -7.708313733785372}}));
  s.push_back(make("Z2", 2, -5.0, 10.0, zakharov, 0.0, {{0.0, 0.0}}));
  s.push_back(make("R2", 2, -5.0, 10.0, rosenbrock, 0.0, {{1.0, 1.0}}));
  s.push_back(make("H34", 3, 0.0, 1.0, hartmann3, -3.862779787332663,
                   {{0.11458885774049934, 0.5556488942725935, 0.8525469852623806}}));
  s.push_back(make("S45", 4, 0.0, 10.0, shekel5, -10.153199679058229,
                   {{4.000037150793608, 4.000133276917172, 4.000037152884639,
                     4.000133276176344}}));
  s.push_back(make("R5", 5, -5.0, 10.0, rosenbrock, 0.0, {Point(5, 1.0)}));
  s.push_back(make("R10", 10, -5.0, 10.0, rosenbrock, 0.0, {Point(10, 1.0)}));

  for (const auto& fn : s) {
    fn.spec.validate();
    for (const Point& p : fn.optimum_points) {
      if (std::abs(fn.spec.evaluator(p) - fn.optimum_value) > 1e-9) {
        throw std::logic_error(fn.spec.name + ": stored optimum does not reproduce");
      }
    }
  }
  return s;
}

}  // namespace

const std::vector<BenchmarkFunction>& suite() {
  static const std::vector<BenchmarkFunction> functions = build_suite();
  return functions;
}

const BenchmarkFunction& benchmark(std::string_view name) {
  for (const auto& fn : suite()) {
    if (fn.spec.name == name) {
      return fn;
    }
  }
  throw std::out_of_range("unknown benchmark function: " + std::string(name));
}

double error_vs_optimum(const BenchmarkFunction& fn, double value) {
  return value - fn.optimum_value;
}

}  // namespace nmcs
