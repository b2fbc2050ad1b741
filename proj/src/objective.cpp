#include "nmcs/objective.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nmcs {

DimensionMismatch::DimensionMismatch(std::size_t expected, std::size_t got)
    : std::invalid_argument("dimension mismatch: expected " + std::to_string(expected) +
                            ", got " + std::to_string(got)) {}

void ObjectiveSpec::validate() const {
  if (dimension == 0) {
    throw std::invalid_argument(name + ": dimension must be positive");
  }
  if (lower.size() != dimension || upper.size() != dimension) {
    throw DimensionMismatch(dimension, lower.size() != dimension ? lower.size() : upper.size());
  }
  for (std::size_t i = 0; i < dimension; ++i) {
    if (!(lower[i] < upper[i])) {
      throw std::invalid_argument(name + ": lower bound must be below upper bound in every "
                                         "coordinate");
    }
  }
  if (!evaluator) {
    throw std::invalid_argument(name + ": missing evaluator");
  }
}

Point clamp_to_bounds(std::span<const double> x, const ObjectiveSpec& spec) {
  if (x.size() != spec.dimension) {
    throw DimensionMismatch(spec.dimension, x.size());
  }
  Point out(x.begin(), x.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::clamp(out[i], spec.lower[i], spec.upper[i]);
  }
  return out;
}

Point uniform_in_bounds(const ObjectiveSpec& spec, Rng& rng) {
  Point x(spec.dimension);
  for (std::size_t i = 0; i < spec.dimension; ++i) {
    std::uniform_real_distribution<double> coord(spec.lower[i], spec.upper[i]);
    x[i] = coord(rng);
  }
  return x;
}

double evaluate_counted(const ObjectiveSpec& spec, EvaluationBudget& budget,
                        std::span<const double> x) {
  if (x.size() != spec.dimension) {
    throw DimensionMismatch(spec.dimension, x.size());
  }
  if (budget.exhausted()) {
    throw BudgetExhausted();
  }
  ++budget.used;
  return spec.evaluator(x);
}

CountedObjective::CountedObjective(const ObjectiveSpec& spec, std::size_t max_evals)
    : spec_(&spec), budget_{max_evals, 0} {
  spec.validate();
}

double CountedObjective::operator()(std::span<const double> x) {
  const double value = evaluate_counted(*spec_, budget_, x);
  note_evaluated(x, value);
  return value;
}

void CountedObjective::note_evaluated(std::span<const double> x, double value) {
  if (best_point_.empty() || value < best_value_) {
    best_point_.assign(x.begin(), x.end());
    best_value_ = value;
    trace_.push_back({budget_.used, value});
  }
}

RunReport CountedObjective::report(std::uint64_t seed, double wall_time,
                                   bool stop_rule_fired) const {
  RunReport r;
  r.best_point = best_point_;
  r.best_value = best_value_;
  r.evals_used = budget_.used;
  r.trace = trace_;
  r.seed = seed;
  r.wall_time = wall_time;
  r.stop_rule_fired = stop_rule_fired;
  return r;
}

double value_spread(std::span<const double> values) {
  if (values.empty()) {
    return 0.0;
  }
  const double mean =
      std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) {
    sum += (v - mean) * (v - mean);
  }
  return std::sqrt(sum);
}

}  // namespace nmcs
