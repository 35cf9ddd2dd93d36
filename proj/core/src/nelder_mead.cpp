#include "qrl/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qrl/error.hpp"

namespace qrl {

namespace {

using Point = std::vector<double>;

// base + scale * (toward - base)
Point along(const Point& base, const Point& toward, double scale) {
  Point p(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    p[i] = base[i] + scale * (toward[i] - base[i]);
  }
  return p;
}

double distance(const Point& a, const Point& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum += (a[i] - b[i]) * (a[i] - b[i]);
  }
  return std::sqrt(sum);
}

}  // namespace

NelderMeadResult nelder_mead_minimize(const Objective& f, std::span<const double> start,
                                      const NelderMeadOptions& options,
                                      std::span<const double> step_signs) {
  const std::size_t n = start.size();
  if (n == 0) {
    throw DomainError("nelder_mead_minimize: empty starting point");
  }
  if (!step_signs.empty() && step_signs.size() != n) {
    throw DomainError("nelder_mead_minimize: step_signs length mismatch");
  }

  NelderMeadResult result;
  auto eval = [&](const Point& p) {
    ++result.evaluations;
    const double v = f(p);
    // NaN sorts as worst so the simplex moves away from it.
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };

  std::vector<Point> simplex(n + 1, Point(start.begin(), start.end()));
  for (std::size_t i = 0; i < n; ++i) {
    const double sign = step_signs.empty() ? 1.0 : (step_signs[i] < 0.0 ? -1.0 : 1.0);
    simplex[i + 1][i] += sign * options.initial_step;
  }
  std::vector<double> values(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    values[i] = eval(simplex[i]);
  }

  std::vector<std::size_t> order(n + 1);
  for (; result.iterations < options.max_iterations; ++result.iterations) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    {
      std::vector<Point> s(n + 1);
      std::vector<double> v(n + 1);
      for (std::size_t i = 0; i <= n; ++i) {
        s[i] = std::move(simplex[order[i]]);
        v[i] = values[order[i]];
      }
      simplex = std::move(s);
      values = std::move(v);
    }

    double diameter = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      diameter = std::max(diameter, distance(simplex[0], simplex[i]));
    }
    if (diameter < options.diameter_tolerance) {
      result.converged = true;
      break;
    }

    Point centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        centroid[k] += simplex[i][k] / static_cast<double>(n);
      }
    }

    const Point reflected = along(centroid, simplex[n], -options.reflection);
    const double fr = eval(reflected);
    if (fr < values[0]) {
      const Point expanded = along(centroid, simplex[n], -options.reflection * options.expansion);
      const double fe = eval(expanded);
      if (fe < fr) {
        simplex[n] = expanded;
        values[n] = fe;
      } else {
        simplex[n] = reflected;
        values[n] = fr;
      }
      continue;
    }
    if (fr < values[n - 1]) {
      simplex[n] = reflected;
      values[n] = fr;
      continue;
    }

    // Outside contraction when the reflection improved on the worst vertex,
    // inside contraction otherwise.
    const bool outside = fr < values[n];
    const Point contracted = outside ? along(centroid, reflected, options.contraction)
                                     : along(centroid, simplex[n], options.contraction);
    const double fc = eval(contracted);
    if (fc < (outside ? fr : values[n])) {
      simplex[n] = contracted;
      values[n] = fc;
      continue;
    }

    for (std::size_t i = 1; i <= n; ++i) {
      simplex[i] = along(simplex[0], simplex[i], options.shrink);
      values[i] = eval(simplex[i]);
    }
  }

  const auto best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
  result.x = simplex[best];
  result.value = values[best];
  return result;
}

}  // namespace qrl
