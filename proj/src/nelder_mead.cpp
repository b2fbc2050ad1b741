#include "nmcs/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "nmcs/stopwatch.hpp"

namespace nmcs {

void Simplex::sort() {
  std::vector<std::size_t> order(vertices.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [this](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<Point> v;
  std::vector<double> f;
  v.reserve(order.size());
  f.reserve(order.size());
  for (std::size_t i : order) {
    v.push_back(std::move(vertices[i]));
    f.push_back(values[i]);
  }
  vertices = std::move(v);
  values = std::move(f);
}

bool Simplex::is_sorted() const { return std::is_sorted(values.begin(), values.end()); }

void FlipCoefficients::validate() const {
  if (!(reflect > 0.0)) {
    throw std::invalid_argument("reflection coefficient must be positive");
  }
  if (!(expand > 1.0) || !(expand > reflect)) {
    throw std::invalid_argument("expansion coefficient must exceed 1 and the reflection "
                                "coefficient");
  }
  if (!(contract > 0.0 && contract < 1.0)) {
    throw std::invalid_argument("contraction coefficient must lie in (0, 1)");
  }
  if (!(shrink > 0.0 && shrink < 1.0)) {
    throw std::invalid_argument("shrink coefficient must lie in (0, 1)");
  }
}

const char* to_string(FlipMove move) {
  switch (move) {
    case FlipMove::Reflection:
      return "reflection";
    case FlipMove::Expansion:
      return "expansion";
    case FlipMove::OutsideContraction:
      return "outside-contraction";
    case FlipMove::InsideContraction:
      return "inside-contraction";
    case FlipMove::Shrink:
      return "shrink";
  }
  return "unknown";
}

Point centroid(const Simplex& s, bool exclude_worst) {
  const std::size_t d = s.dimension();
  const std::size_t count = exclude_worst ? d : d + 1;
  Point c(d, 0.0);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      c[j] += s.vertices[i][j];
    }
  }
  for (double& v : c) {
    v /= static_cast<double>(count);
  }
  return c;
}

namespace {

// from + t * (to - from), clamped into the objective's box.
Point along(const CountedObjective& f, const Point& from, const Point& to, double t) {
  Point p(from.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = from[i] + t * (to[i] - from[i]);
  }
  return f.clamp(p);
}

}  // namespace

FlipResult flip(const Simplex& s, CountedObjective& f, const NelderMeadOptions& options) {
  const FlipCoefficients& c = options.coefficients;
  const std::size_t n = s.dimension();
  const double f_best = s.values[0];
  const double f_second_worst = s.values[n - 1];
  const double f_worst = s.values[n];

  FlipResult out{s, 0, FlipMove::Reflection};
  auto replace_worst = [&](Point p, double value, FlipMove move) {
    out.simplex.vertices[n] = std::move(p);
    out.simplex.values[n] = value;
    out.move = move;
  };

  const Point xc = centroid(s, options.centroid_excludes_worst);
  // x_r = x_c + reflect * (x_c - x_worst)
  const Point xr = along(f, xc, s.vertices[n], -c.reflect);
  const double fr = f(xr);
  out.evals = 1;

  bool shrink = false;
  if (fr < f_best) {
    const Point xe = along(f, xc, xr, c.expand);
    const double fe = f(xe);
    out.evals = 2;
    if (fe < fr) {
      replace_worst(xe, fe, FlipMove::Expansion);
    } else {
      replace_worst(xr, fr, FlipMove::Reflection);
    }
  } else if (fr < f_second_worst) {
    replace_worst(xr, fr, FlipMove::Reflection);
  } else if (fr < f_worst) {
    const Point xoc = along(f, xc, xr, c.contract);
    const double foc = f(xoc);
    out.evals = 2;
    if (foc <= fr) {
      replace_worst(xoc, foc, FlipMove::OutsideContraction);
    } else {
      shrink = true;
    }
  } else {
    const Point xic = along(f, xc, xr, -c.contract);
    const double fic = f(xic);
    out.evals = 2;
    if (fic <= f_worst) {
      replace_worst(xic, fic, FlipMove::InsideContraction);
    } else {
      shrink = true;
    }
  }

  if (shrink) {
    out.move = FlipMove::Shrink;
    const Point& best = s.vertices[0];
    for (std::size_t i = 1; i <= n; ++i) {
      out.simplex.vertices[i] = along(f, best, s.vertices[i], c.shrink);
      out.simplex.values[i] = f(out.simplex.vertices[i]);
      ++out.evals;
    }
  }
  out.simplex.sort();
  return out;
}

Simplex make_initial_simplex(std::span<const double> anchor, double scale, CountedObjective& f) {
  if (!(scale > 0.0)) {
    throw std::invalid_argument("initial simplex scale must be positive");
  }
  const std::size_t d = f.dimension();
  if (anchor.size() != d) {
    throw DimensionMismatch(d, anchor.size());
  }
  if (f.remaining() < d + 1) {
    throw BudgetExhausted();
  }
  Simplex s;
  s.vertices.reserve(d + 1);
  s.vertices.push_back(f.clamp(anchor));
  for (std::size_t i = 0; i < d; ++i) {
    Point v(anchor.begin(), anchor.end());
    v[i] = anchor[i] != 0.0 ? anchor[i] + scale * anchor[i] : scale * kZeroAnchorStep;
    s.vertices.push_back(f.clamp(v));
  }
  s.values.reserve(d + 1);
  for (const Point& v : s.vertices) {
    s.values.push_back(f(v));
  }
  s.sort();
  return s;
}

double simplex_volume(const Simplex& s) {
  const std::size_t d = s.dimension();
  std::vector<std::vector<double>> m(d, std::vector<double>(d));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      m[i][j] = s.vertices[i + 1][j] - s.vertices[0][j];
    }
  }
  // Gaussian elimination with partial pivoting.
  double det = 1.0;
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < d; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[pivot][col])) {
        pivot = r;
      }
    }
    if (m[pivot][col] == 0.0) {
      return 0.0;
    }
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t r = col + 1; r < d; ++r) {
      const double factor = m[r][col] / m[col][col];
      for (std::size_t k = col; k < d; ++k) {
        m[r][k] -= factor * m[col][k];
      }
    }
  }
  return std::abs(det);
}

namespace {

// Flips until the stop rule fires or `f` has spent `limit` evaluations in
// total. Returns whether the stop rule fired.
bool run_flips(Simplex& s, CountedObjective& f, const NmsParams& params, std::size_t limit) {
  while (f.budget().used < limit) {
    if (params.stop.satisfied(s.values)) {
      return true;
    }
    try {
      s = flip(s, f, params.options).simplex;
    } catch (const BudgetExhausted&) {
      break;
    }
  }
  return params.stop.satisfied(s.values);
}

}  // namespace

RunReport nms_minimize(const ObjectiveSpec& spec, std::span<const double> anchor,
                       std::size_t max_evals, const NmsParams& params) {
  params.options.coefficients.validate();
  const Stopwatch clock;
  CountedObjective f(spec, max_evals);
  bool fired = false;
  if (max_evals >= spec.dimension + 1) {
    Simplex s = make_initial_simplex(anchor, params.init_scale, f);
    fired = run_flips(s, f, params, max_evals);
  } else {
    // Not enough budget for a simplex: evaluate what we can of the anchor.
    if (max_evals > 0) {
      f(f.clamp(anchor));
    }
  }
  return f.report(0, clock.seconds(), fired);
}

RunReport nms_minimize(const ObjectiveSpec& spec, const Simplex& start, std::size_t max_evals,
                       const NmsParams& params) {
  params.options.coefficients.validate();
  if (start.vertices.size() != spec.dimension + 1) {
    throw DimensionMismatch(spec.dimension + 1, start.vertices.size());
  }
  const Stopwatch clock;
  CountedObjective f(spec, max_evals);
  Simplex s = start;
  s.sort();
  f.note_evaluated(s.best(), s.best_value());
  const bool fired = run_flips(s, f, params, max_evals);
  return f.report(0, clock.seconds(), fired);
}

RunReport nms_multistart(const ObjectiveSpec& spec, const std::vector<Point>& anchors,
                         std::size_t max_evals, const NmsParams& params) {
  params.options.coefficients.validate();
  if (anchors.empty()) {
    throw std::invalid_argument("nms_multistart needs at least one anchor");
  }
  const Stopwatch clock;
  CountedObjective f(spec, max_evals);
  const std::size_t share = max_evals / anchors.size();
  bool any_fired = false;
  for (std::size_t k = 0; k < anchors.size(); ++k) {
    // The last start absorbs the remainder of the integer division.
    const std::size_t limit = k + 1 == anchors.size() ? max_evals : (k + 1) * share;
    if (f.budget().used + spec.dimension + 1 > limit) {
      continue;
    }
    Simplex s = make_initial_simplex(anchors[k], params.init_scale, f);
    any_fired = run_flips(s, f, params, limit) || any_fired;
  }
  return f.report(0, clock.seconds(), any_fired);
}

}  // namespace nmcs
