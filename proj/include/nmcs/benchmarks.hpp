#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "nmcs/objective.hpp"

namespace nmcs {

struct BenchmarkFunction {
  ObjectiveSpec spec;
  double optimum_value = 0.0;
  std::vector<Point> optimum_points;
};

/// RC, B2, GP, SH, Z2, R2, H3,4, S4,5, R5 and R10 with their usual search
/// domains. Every stored optimum is re-evaluated when the suite is built.
const std::vector<BenchmarkFunction>& suite();

/// Looks a suite function up by its short name ("RC", "S45", "R10", ...).
/// Throws std::out_of_range for unknown names.
const BenchmarkFunction& benchmark(std::string_view name);

double error_vs_optimum(const BenchmarkFunction& fn, double value);

// Plain evaluators, usable with any dimension where the definition allows it.
double branin(std::span<const double> x);
double bohachevsky2(std::span<const double> x);
double goldstein_price(std::span<const double> x);
double shubert(std::span<const double> x);
double zakharov(std::span<const double> x);
double rosenbrock(std::span<const double> x);
double hartmann3(std::span<const double> x);
double shekel5(std::span<const double> x);
double sphere(std::span<const double> x);

}  // namespace nmcs
