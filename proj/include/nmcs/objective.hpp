#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nmcs {

using Point = std::vector<double>;
using Evaluator = std::function<double(std::span<const double>)>;

/// The only random engine used by the optimizers. Every run owns one,
/// seeded from its configuration.
using Rng = std::mt19937_64;

class BudgetExhausted : public std::runtime_error {
 public:
  BudgetExhausted() : std::runtime_error("evaluation budget exhausted") {}
};

class DimensionMismatch : public std::invalid_argument {
 public:
  DimensionMismatch(std::size_t expected, std::size_t got);
};

struct KnownOptimum {
  Point point;
  double value = 0.0;
};

/// A bounded objective f: R^d -> R. The evaluator must be pure and
/// thread-safe.
struct ObjectiveSpec {
  std::string name;
  std::size_t dimension = 0;
  Point lower;
  Point upper;
  Evaluator evaluator;
  std::optional<KnownOptimum> known_optimum;

  /// Throws std::invalid_argument unless the bounds describe a non-empty box
  /// of the declared dimension and an evaluator is present.
  void validate() const;
};

/// Projects each coordinate onto [lower[i], upper[i]].
Point clamp_to_bounds(std::span<const double> x, const ObjectiveSpec& spec);

/// Draws a point uniformly inside the bounds of `spec`.
Point uniform_in_bounds(const ObjectiveSpec& spec, Rng& rng);

struct EvaluationBudget {
  std::size_t max_evals = 0;
  std::size_t used = 0;

  [[nodiscard]] std::size_t remaining() const { return max_evals - used; }
  [[nodiscard]] bool exhausted() const { return used >= max_evals; }
};

struct TracePoint {
  std::size_t evals = 0;
  double best_value = 0.0;
};

struct RunReport {
  Point best_point;
  double best_value = 0.0;
  std::size_t evals_used = 0;
  std::vector<TracePoint> trace;
  std::uint64_t seed = 0;
  double wall_time = 0.0;
  // True when the optimizer's own stopping rule ended the run (as opposed to
  // the evaluation budget running out).
  bool stop_rule_fired = false;
};

/// Single evaluation under a budget.
double evaluate_counted(const ObjectiveSpec& spec, EvaluationBudget& budget,
                        std::span<const double> x);

/// Objective wrapper used by every optimizer: counts calls against a budget
/// and keeps the best point ever evaluated together with an improvement trace.
class CountedObjective {
 public:
  CountedObjective(const ObjectiveSpec& spec, std::size_t max_evals);

  double operator()(std::span<const double> x);

  [[nodiscard]] const ObjectiveSpec& spec() const { return *spec_; }
  [[nodiscard]] std::size_t dimension() const { return spec_->dimension; }
  [[nodiscard]] const EvaluationBudget& budget() const { return budget_; }
  [[nodiscard]] bool exhausted() const { return budget_.exhausted(); }
  [[nodiscard]] std::size_t remaining() const { return budget_.remaining(); }

  [[nodiscard]] Point clamp(std::span<const double> x) const {
    return clamp_to_bounds(x, *spec_);
  }

  /// Records a point evaluated outside this wrapper as a best-point
  /// candidate. Does not touch the budget.
  void note_evaluated(std::span<const double> x, double value);

  [[nodiscard]] bool has_best() const { return !best_point_.empty(); }
  [[nodiscard]] const Point& best_point() const { return best_point_; }
  [[nodiscard]] double best_value() const { return best_value_; }
  [[nodiscard]] const std::vector<TracePoint>& trace() const { return trace_; }

  [[nodiscard]] RunReport report(std::uint64_t seed, double wall_time,
                                 bool stop_rule_fired) const;

 private:
  const ObjectiveSpec* spec_;
  EvaluationBudget budget_;
  Point best_point_;
  double best_value_ = 0.0;
  std::vector<TracePoint> trace_;
};

/// Spread of a set of objective values: sqrt(sum (f_i - mean)^2).
double value_spread(std::span<const double> values);

/// Convergence rule shared by the simplex and cuckoo optimizers.
/// A non-positive tolerance disables the rule.
struct StopRule {
  double tolerance = 1e-7;

  [[nodiscard]] bool enabled() const { return tolerance > 0.0; }
  [[nodiscard]] bool satisfied(std::span<const double> values) const {
    return enabled() && value_spread(values) < tolerance;
  }
};

}  // namespace nmcs
