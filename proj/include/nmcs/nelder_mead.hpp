#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nmcs/objective.hpp"

namespace nmcs {

/// d+1 vertices with their objective values, kept aligned.
struct Simplex {
  std::vector<Point> vertices;
  std::vector<double> values;

  [[nodiscard]] std::size_t dimension() const {
    return vertices.empty() ? 0 : vertices.size() - 1;
  }
  [[nodiscard]] const Point& best() const { return vertices.front(); }
  [[nodiscard]] double best_value() const { return values.front(); }
  [[nodiscard]] double worst_value() const { return values.back(); }

  /// Orders vertices by value, ascending. Ties keep their current order.
  void sort();
  [[nodiscard]] bool is_sorted() const;
};

/// Reflection, expansion, contraction and shrink coefficients of a flip.
struct FlipCoefficients {
  double reflect = 1.0;
  double expand = 2.0;
  double contract = 0.5;
  double shrink = 0.5;

  /// Throws std::invalid_argument unless reflect > 0, expand > 1,
  /// expand > reflect, 0 < contract < 1 and 0 < shrink < 1.
  void validate() const;
};

struct NelderMeadOptions {
  FlipCoefficients coefficients;
  // The default centroid averages all d+1 vertices. The textbook variant
  // leaves the worst vertex out.
  bool centroid_excludes_worst = false;
};

enum class FlipMove { Reflection, Expansion, OutsideContraction, InsideContraction, Shrink };

const char* to_string(FlipMove move);

struct FlipResult {
  Simplex simplex;
  std::size_t evals = 0;
  FlipMove move = FlipMove::Reflection;
};

Point centroid(const Simplex& s, bool exclude_worst = false);

/// One Nelder-Mead iteration on a sorted simplex. Trial points are clamped to
/// the objective's bounds. If the budget runs out mid-flip, BudgetExhausted
/// propagates and `s` is left as it was.
FlipResult flip(const Simplex& s, CountedObjective& f, const NelderMeadOptions& options = {});

/// Zero anchor coordinates are replaced by scale * kZeroAnchorStep.
inline constexpr double kZeroAnchorStep = 0.00025;

/// Builds the simplex whose vertex i (1..d) moves coordinate i of `anchor` to
/// anchor_i + scale * anchor_i. Vertices are clamped, evaluated and sorted.
Simplex make_initial_simplex(std::span<const double> anchor, double scale, CountedObjective& f);

/// Hyper-volume of the simplex up to the constant 1/d!: |det(v_i - v_0)|.
double simplex_volume(const Simplex& s);

/// Plain flip options with the worst vertex left out of the centroid. With
/// the all-vertex centroid a one-dimensional reflection lands on the best
/// vertex, so the simplex can only contract.
inline NelderMeadOptions search_options() { return {FlipCoefficients{}, true}; }

struct NmsParams {
  NelderMeadOptions options = search_options();
  double init_scale = 0.05;
  // Applied to the spread of the simplex's vertex values.
  StopRule stop{1e-12};
};

/// Standalone Nelder-Mead from an anchor point. The initial simplex costs d+1
/// evaluations of `max_evals`.
RunReport nms_minimize(const ObjectiveSpec& spec, std::span<const double> anchor,
                       std::size_t max_evals, const NmsParams& params = {});

/// Standalone Nelder-Mead from an already evaluated simplex; its vertices are
/// not re-evaluated and do not count against `max_evals`.
RunReport nms_minimize(const ObjectiveSpec& spec, const Simplex& start, std::size_t max_evals,
                       const NmsParams& params = {});

/// Runs independent Nelder-Mead searches from each anchor with the budget split
/// evenly between them and reports the best. Evaluations are summed.
RunReport nms_multistart(const ObjectiveSpec& spec, const std::vector<Point>& anchors,
                         std::size_t max_evals, const NmsParams& params = {});

}  // namespace nmcs
