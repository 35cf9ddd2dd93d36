#include "qrl/quadrature.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "qrl/error.hpp"

namespace qrl {

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) {
    throw DomainError(fmt::format("gauss_legendre: need at least one node, got {}", n));
  }
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-15) {
        break;
      }
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[lo] = mid - half * z;
    rule.nodes[hi] = mid + half * z;
    rule.weights[lo] = half * w;
    rule.weights[hi] = half * w;
  }
  return rule;
}

QuadratureRule composite_gauss_legendre(int per_panel, std::span<const double> breaks) {
  if (breaks.size() < 2) {
    throw DomainError("composite_gauss_legendre: need at least two breaks");
  }
  QuadratureRule rule;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) {
      throw DomainError(fmt::format("composite_gauss_legendre: breaks not increasing at {}", i));
    }
    const QuadratureRule panel = gauss_legendre(per_panel, breaks[i], breaks[i + 1]);
    rule.nodes.insert(rule.nodes.end(), panel.nodes.begin(), panel.nodes.end());
    rule.weights.insert(rule.weights.end(), panel.weights.begin(), panel.weights.end());
  }
  return rule;
}

QuadratureRule paneled_gauss_legendre(int total_nodes, int panels, double a, double b) {
  if (panels < 1) {
    throw DomainError("paneled_gauss_legendre: need at least one panel");
  }
  const int per_panel = (total_nodes + panels - 1) / panels;
  std::vector<double> breaks(static_cast<std::size_t>(panels) + 1);
  for (int i = 0; i <= panels; ++i) {
    breaks[static_cast<std::size_t>(i)] = a + (b - a) * i / panels;
  }
  return composite_gauss_legendre(per_panel, breaks);
}

std::vector<double> graded_breaks(double lo, double hi, double min_width) {
  if (!(hi > lo) || !(min_width > 0.0)) {
    throw DomainError("graded_breaks: need lo < hi and a positive minimum width");
  }
  std::vector<double> breaks{lo};
  double gap = 0.5 * (hi - lo);
  while (2.0 * gap > min_width) {
    breaks.push_back(hi - gap);
    gap *= 0.5;
  }
  breaks.push_back(hi);
  return breaks;
}

}  // namespace qrl
