#pragma once

#include <atomic>
#include <memory>

#include "nmcs/benchmarks.hpp"
#include "nmcs/objective.hpp"

namespace testing {

inline nmcs::ObjectiveSpec box(std::string name, std::size_t d, double lo, double hi,
                               nmcs::Evaluator f) {
  nmcs::ObjectiveSpec s;
  s.name = std::move(name);
  s.dimension = d;
  s.lower.assign(d, lo);
  s.upper.assign(d, hi);
  s.evaluator = std::move(f);
  return s;
}

inline nmcs::ObjectiveSpec sphere_spec(std::size_t d, double lo = -10.0, double hi = 10.0) {
  return box("sphere", d, lo, hi, nmcs::sphere);
}

// Wraps an evaluator with an independent call counter.
struct CallCounter {
  std::shared_ptr<std::atomic<std::size_t>> calls = std::make_shared<std::atomic<std::size_t>>(0);

  nmcs::Evaluator wrap(nmcs::Evaluator f) const {
    auto c = calls;
    return [c, f = std::move(f)](std::span<const double> x) {
      ++*c;
      return f(x);
    };
  }
  [[nodiscard]] std::size_t count() const { return calls->load(); }
};

inline bool same_report(const nmcs::RunReport& a, const nmcs::RunReport& b) {
  if (a.best_point != b.best_point || a.best_value != b.best_value ||
      a.evals_used != b.evals_used || a.seed != b.seed ||
      a.stop_rule_fired != b.stop_rule_fired || a.trace.size() != b.trace.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    if (a.trace[i].evals != b.trace[i].evals || a.trace[i].best_value != b.trace[i].best_value) {
      return false;
    }
  }
  return true;
}

}  // namespace testing
