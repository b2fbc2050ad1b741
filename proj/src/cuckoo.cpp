#include "nmcs/cuckoo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "nmcs/stopwatch.hpp"

namespace nmcs {

void CsParams::validate(std::size_t dimension) const {
  if (n_nests < 2) {
    throw std::invalid_argument("cuckoo search needs at least two nests");
  }
  if (!(p_a > 0.0 && p_a < 1.0)) {
    throw std::invalid_argument("abandonment fraction must lie in (0, 1)");
  }
  if (!(levy_exponent > 1.0 && levy_exponent <= 2.0)) {
    throw std::invalid_argument("Levy exponent must lie in (1, 2]");
  }
  if (step_scale) {
    if (step_scale->size() != dimension) {
      throw DimensionMismatch(dimension, step_scale->size());
    }
    for (double s : *step_scale) {
      if (!(s > 0.0)) {
        throw std::invalid_argument("step scale must be positive");
      }
    }
  }
}

double mantegna_sigma(double levy_exponent) {
  const double l = levy_exponent;
  const double num = std::tgamma(1.0 + l) * std::sin(std::numbers::pi * l / 2.0);
  const double den = std::tgamma((1.0 + l) / 2.0) * l * std::pow(2.0, (l - 1.0) / 2.0);
  return std::pow(num / den, 1.0 / l);
}

Point levy_step(double levy_exponent, std::size_t dimension, Rng& rng) {
  std::normal_distribution<double> u_dist(0.0, mantegna_sigma(levy_exponent));
  std::normal_distribution<double> v_dist(0.0, 1.0);
  Point step(dimension);
  for (double& s : step) {
    const double u = u_dist(rng);
    const double v = v_dist(rng);
    s = u / std::pow(std::abs(v), 1.0 / levy_exponent);
  }
  return step;
}

namespace {

std::vector<std::size_t> order_by_value(const std::vector<Nest>& nests) {
  std::vector<std::size_t> order(nests.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return nests[a].value < nests[b].value;
  });
  return order;
}

bool converged(const std::vector<Nest>& nests, const StopRule& stop) {
  if (!stop.enabled()) {
    return false;
  }
  const auto order = order_by_value(nests);
  const std::size_t pool = std::min(nests.size(), std::max<std::size_t>(2, nests.size() / 3));
  std::vector<double> best;
  for (std::size_t i = 0; i < pool; ++i) {
    best.push_back(nests[order[i]].value);
  }
  return stop.satisfied(best);
}

}  // namespace

std::size_t abandonment_count(std::size_t n_nests, double p_a) {
  if (n_nests < 2) {
    return 0;
  }
  const auto wanted = static_cast<std::size_t>(std::ceil(p_a * static_cast<double>(n_nests)));
  return std::min(n_nests - 1, wanted);
}

std::vector<std::size_t> abandonment_targets(std::span<const double> values, double p_a) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  const std::size_t count = abandonment_count(values.size(), p_a);
  return {order.end() - static_cast<std::ptrdiff_t>(count), order.end()};
}

RunReport cs_minimize(const ObjectiveSpec& spec, const CsParams& params, std::size_t max_evals,
                      std::uint64_t seed) {
  spec.validate();
  params.validate(spec.dimension);
  const Stopwatch clock;
  Rng rng(seed);
  CountedObjective f(spec, max_evals);
  const std::size_t d = spec.dimension;
  const std::size_t n = params.n_nests;

  Point scale(d);
  if (params.step_scale) {
    scale = *params.step_scale;
  } else {
    for (std::size_t i = 0; i < d; ++i) {
      scale[i] = 0.01 * (spec.upper[i] - spec.lower[i]);
    }
  }

  std::vector<Nest> nests;
  bool fired = false;
  try {
    for (std::size_t i = 0; i < n; ++i) {
      Point x = uniform_in_bounds(spec, rng);
      const double v = f(x);
      nests.push_back({std::move(x), v});
    }
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::uniform_int_distribution<std::size_t> pick_other(0, n - 2);
    while (!f.exhausted()) {
      if (converged(nests, params.stop)) {
        fired = true;
        break;
      }
      // One generation: n cuckoo proposals, then one abandonment round.
      for (std::size_t c = 0; c < n; ++c) {
        const std::size_t i = pick(rng);
        const Point step = levy_step(params.levy_exponent, d, rng);
        Point egg = nests[i].point;
        for (std::size_t k = 0; k < d; ++k) {
          egg[k] += scale[k] * step[k];
        }
        egg = f.clamp(egg);
        const double value = f(egg);
        std::size_t j = pick_other(rng);
        if (j >= i) {
          ++j;
        }
        if (value < nests[j].value) {
          nests[j] = {std::move(egg), value};
        }
      }
      std::vector<double> values(n);
      for (std::size_t k = 0; k < n; ++k) {
        values[k] = nests[k].value;
      }
      for (std::size_t k : abandonment_targets(values, params.p_a)) {
        Point x = uniform_in_bounds(spec, rng);
        const double v = f(x);
        nests[k] = {std::move(x), v};
      }
    }
  } catch (const BudgetExhausted&) {
  }
  return f.report(seed, clock.seconds(), fired);
}

}  // namespace nmcs
