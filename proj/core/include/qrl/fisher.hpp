#pragma once

// Quantum Fisher information of the channel output with respect to the
// environment coordinates (r, theta1, theta2), its average over the prior
//   w(theta) = sin(theta1 / 2) / (2 pi)   on [0, 1/2] x [0, pi] x [0, 2 pi],
// and the maximum of that average over pure probes.
//
// For a qubit state rho with derivatives d_a rho:
//   F_ab = tr[d_a rho d_b rho] + tr[rho d_a rho rho d_b rho] / det(rho)
// and F_ab = 2 tr[d_a rho d_b rho] once rho is pure.

#include <array>
#include <span>
#include <vector>

#include "qrl/quadrature.hpp"
#include "qrl/channel.hpp"
#include "qrl/qlin.hpp"
#include "qrl/unitary.hpp"

namespace qrl {

inline constexpr double kDefaultPurityTolerance = 1e-10;

/// 3x3 real symmetric matrix indexed by (r, theta1, theta2).
struct QfiMatrix {
  std::array<std::array<double, 3>, 3> entries{};

  [[nodiscard]] double operator()(std::size_t a, std::size_t b) const { return entries[a][b]; }
  [[nodiscard]] double trace() const noexcept { return entries[0][0] + entries[1][1] + entries[2][2]; }
};

/// Mixed-state formula when det(rho) >= purity_tol, pure-state formula
/// otherwise. det(rho) comes from the closed 2x2 expression.
QfiMatrix qfi_matrix(const Matrix& rho, std::span<const Matrix> derivs,
                     double purity_tol = kDefaultPurityTolerance);

/// Same quantity for rho = (I + n . sigma)/2 and d_a rho = (d_a . sigma)/2:
///   F_ab = d_a . d_b + (n . d_a)(n . d_b) / (1 - |n|^2).
QfiMatrix qfi_from_bloch(const BlochVector& n, std::span<const BlochVector> dirs,
                         double purity_tol = kDefaultPurityTolerance);

/// QFI of N(theta) for the given unitary and probe. The derivatives are the
/// channel images of d theta / d(r, theta1, theta2).
QfiMatrix channel_qfi(const UnitaryParams& p, const ProbeState& probe, const EnvState& env,
                      double purity_tol = kDefaultPurityTolerance);

/// sin(theta1 / 2) / (2 pi).
double prior_weight(const EnvState& env);

/// Integration layout. The r axis is always composite Gauss-Legendre with
/// panels whose widths halve toward the cutoff 1/2 - eta. The angles use
/// either a fixed tensor rule with equal panels or nested adaptive
/// Gauss-Kronrod. Near-pure output directions give the angular integrand
/// peaks of width ~sqrt(eta), which the fixed rule resolves only to ~1e-3.
enum class AngularRule { tensor, adaptive };

struct QuadratureSpec {
  AngularRule angular = AngularRule::adaptive;
  int r_per_panel = 8;
  int theta1_nodes = 32;
  int theta1_panels = 2;
  int theta2_nodes = 32;
  int theta2_panels = 4;
  /// Relative tolerance of the outer (theta1) adaptive integral; the inner
  /// one runs ten times tighter.
  double angular_tolerance = 1e-6;
  int max_depth = 15;

  /// Doubles every node count and divides the adaptive tolerance by 100.
  [[nodiscard]] QuadratureSpec refined() const;
  [[nodiscard]] static QuadratureSpec tensor();
};

/// r-axis rule on [0, 1/2 - eta].
QuadratureRule radial_rule(const QuadratureSpec& quad, double eta);

/// Integral of the prior over the quadrature domain with eta = 0. Uses the
/// tensor node counts whatever the angular rule.
double prior_mass(const QuadratureSpec& quad = {});

/// Integral of tr F * w over [0, 1/2 - eta] x [0, pi] x [0, 2 pi].
/// Throws DomainError for eta outside [0, 0.4] and NumericalError naming the
/// node when the integrand is not finite.
double avg_trace_qfi(const UnitaryParams& p, const ProbeState& probe, const QuadratureSpec& quad,
                     double eta, double purity_tol = kDefaultPurityTolerance);

enum class Classification { finite, divergent };

const char* to_string(Classification c);

struct EtaPoint {
  double eta = 0.0;
  double value = 0.0;
};

struct FisherConfig {
  /// Used for the reported eta trace.
  QuadratureSpec quad;
  /// Used inside the probe search, where only the argmax matters.
  QuadratureSpec search_quad = QuadratureSpec::tensor();
  /// Cutoffs for the regularized integral, largest first.
  std::vector<double> eta_schedule{1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  /// Growth fit window: points with eta inside [lo, hi].
  double slope_window_lo = 1e-6;
  double slope_window_hi = 1e-4;
  /// Slope of F(eta) against ln(1/eta) above which the average diverges.
  double slope_threshold = 0.5;
  double purity_tol = kDefaultPurityTolerance;

  int probe_grid = 13;
  int probe_restarts = 1;
  double probe_tolerance = 1e-7;
  int max_iterations = 2000;
};

struct AvgQfiResult {
  /// eta -> 0 extrapolation when finite; the smallest-eta value when divergent.
  double value = 0.0;
  Classification classification = Classification::finite;
  ProbeState probe_opt;
  std::vector<EtaPoint> eta_trace;  ///< in schedule order
  double slope = 0.0;               ///< d F / d ln(1/eta) over the fit window
  /// 4 / value; 0 when divergent, +infinity when value is 0.
  double cr_scalar = 0.0;
  bool converged = true;
  int evaluations = 0;
};

/// Regularized trace for a fixed probe along the schedule, then classified.
AvgQfiResult evaluate_probe(const UnitaryParams& p, const ProbeState& probe, const FisherConfig& config = {});

/// Probe search (grid, then Nelder-Mead from the best seeds) of avg_trace_qfi
/// with search_quad at the smallest cutoff, followed by evaluate_probe at the optimum.
AvgQfiResult maximize_over_probe(const UnitaryParams& p, const FisherConfig& config = {});

/// Least-squares slope of value against ln(1/eta) over the points inside
/// [lo, hi]. Needs at least two such points.
double growth_slope(std::span<const EtaPoint> trace, double lo, double hi);

}  // namespace qrl
