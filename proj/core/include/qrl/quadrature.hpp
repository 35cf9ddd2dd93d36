#pragma once

#include <span>
#include <vector>

namespace qrl {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const noexcept { return nodes.size(); }
};

/// n-point Gauss-Legendre rule on [a, b].
QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// Gauss-Legendre with `per_panel` nodes on each [breaks[i], breaks[i+1]].
QuadratureRule composite_gauss_legendre(int per_panel, std::span<const double> breaks);

/// `panels` equal-width panels on [a, b] sharing `total_nodes` (rounded up to
/// a multiple of `panels`).
QuadratureRule paneled_gauss_legendre(int total_nodes, int panels, double a, double b);

/// Breaks on [lo, hi] whose widths halve toward `hi` until they reach
/// `min_width`: lo, hi - L/2, hi - L/4, ..., hi. L = hi - lo.
std::vector<double> graded_breaks(double lo, double hi, double min_width);

}  // namespace qrl
