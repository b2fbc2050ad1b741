#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nmcs/objective.hpp"

namespace nmcs {

struct Nest {
  Point point;
  double value = 0.0;
};

struct CsParams {
  std::size_t n_nests = 15;
  double p_a = 0.25;
  // Per-coordinate step scale. Empty means 0.01 * (upper - lower).
  std::optional<Point> step_scale;
  double levy_exponent = 1.5;
  // Applied to the best third of the nests.
  StopRule stop{0.0};

  void validate(std::size_t dimension) const;
};

/// Scale of the numerator normal in Mantegna's Levy-stable sampler.
double mantegna_sigma(double levy_exponent);

/// One heavy-tailed step of length d: u / |v|^(1/lambda) per coordinate.
Point levy_step(double levy_exponent, std::size_t dimension, Rng& rng);

/// ceil(p_a * n), capped so that the best nest always survives.
std::size_t abandonment_count(std::size_t n_nests, double p_a);

/// Indices of the nests to rebuild: the abandonment_count() worst values.
/// The first minimum (the best nest) is never among them.
std::vector<std::size_t> abandonment_targets(std::span<const double> values, double p_a);

RunReport cs_minimize(const ObjectiveSpec& spec, const CsParams& params, std::size_t max_evals,
                      std::uint64_t seed);

}  // namespace nmcs
