#pragma once

#include <functional>
#include <span>
#include <vector>

namespace qrl {

struct NelderMeadOptions {
  double initial_step = 0.1;
  /// Stop once every vertex is within this distance of the best vertex.
  double diameter_tolerance = 1e-9;
  int max_iterations = 4000;
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

/// Minimizes f starting from an axis-aligned simplex around `start`.
/// `step_signs` (optional, same length as start) flips the direction of each
/// initial edge. Non-convergence is reported through `converged`, never thrown.
NelderMeadResult nelder_mead_minimize(const Objective& f, std::span<const double> start,
                                      const NelderMeadOptions& options = {},
                                      std::span<const double> step_signs = {});

}  // namespace qrl
