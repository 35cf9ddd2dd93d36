#pragma once

// One-shot quantum capacity lower bound through the conditional Renyi-2
// entropy of rho_BF:
//
//   H2(B|F)  = max_sigma -D2(rho_BF || I (x) sigma_F)
//   D2       = log2 Tr[((I (x) sigma)^{-1/4} rho (I (x) sigma)^{-1/4})^2]
//   Q^{eps,n} >= H2 - (g(sqrt(eps/2) - delta*) + 4 log2(1/delta*) + 2) / n
//
// with g(x) = -log2(1 - sqrt(1 - x^2)) and delta* the minimizer of the
// correction over delta in (0, sqrt(eps/2)).

#include <cstdint>

#include "qrl/channel.hpp"
#include "qrl/qlin.hpp"
#include "qrl/unitary.hpp"

namespace qrl {

/// sigma_F = (I + p . sigma) / 2 with |p| <= 1.
struct ConditioningState {
  BlochVector bloch{0.0, 0.0, 0.0};

  [[nodiscard]] Matrix sigma() const;
};

struct OptimizerConfig {
  // Conditioning-state search.
  int sigma_grid = 9;           ///< points per axis of the Bloch-cube seed grid
  int sigma_restarts = 3;       ///< simplex refinements from the best grid seeds
  int sigma_random_restarts = 1;
  double sigma_tolerance = 1e-9;
  double radius_cap = 1.0 - 1e-7;
  double spectral_floor = kDefaultSpectralFloor;

  // Probe search.
  int probe_grid = 13;          ///< per angle; phi1 in [0, pi], phi2 in [0, 2 pi)
  int probe_restarts = 1;
  double probe_tolerance = 1e-9;

  int max_iterations = 4000;
  std::uint64_t seed = 20240531;
};

/// -log2(1 - sqrt(1 - x^2)) in bits. Throws DomainError unless 0 < x <= 1.
double g_eps(double x);

/// Sandwiched Renyi-2 divergence D2(rho || I (x) sigma) in bits. sigma's
/// spectrum is floored at `floor` before the -1/4 power.
double renyi2_divergence(const BipartiteState& rho, const ConditioningState& sigma,
                         double floor = kDefaultSpectralFloor);

struct H2Result {
  double value = 0.0;  ///< bits
  ConditioningState sigma;
  bool converged = false;
  int iterations = 0;
  int evaluations = 0;
};

/// max over sigma_F of -D2. Seeds a Bloch grid, refines the best seeds with
/// Nelder-Mead, keeps the best. The result never exceeds 1 bit (asserted).
H2Result h2_conditional(const BipartiteState& rho, const OptimizerConfig& config = {});

struct DeltaStar {
  double delta = 0.0;
  double objective = 0.0;  ///< g(sqrt(eps/2) - delta) - 4 log2(delta)
};

/// g(sqrt(eps/2) - delta) - 4 log2(delta).
double delta_objective(double epsilon, double delta);

/// Golden-section minimization of delta_objective over (0, sqrt(eps/2)) to a
/// bracket width of 1e-12. Throws DomainError unless 0 < eps < 1.
DeltaStar delta_star(double epsilon);

/// Real part of the closed-form cubic-root expression for delta*, evaluated
/// with principal complex branches. Cross-check only.
double delta_star_closed_form(double epsilon);

struct CapacityResult {
  double h2 = 0.0;
  double epsilon = 0.0;
  long long n = 1;
  double delta_star = 0.0;
  double correction = 0.0;  ///< g(sqrt(eps/2) - delta*) + 4 log2(1/delta*) + 2
  double raw_bound = 0.0;   ///< h2 - correction / n
  double clamped_bound = 0.0;
  ConditioningState sigma_opt;
  ProbeState probe_opt;
  bool converged = true;
  int evaluations = 0;
};

/// Correction term for the given epsilon (n-independent).
double bound_correction(double epsilon);

/// Throws DomainError for eps outside (0, 1) or n < 1.
CapacityResult one_shot_lower_bound(double h2, double epsilon, long long n);

struct BestProbeH2 {
  double value = 0.0;
  ProbeState probe;
  ConditioningState sigma;
  bool converged = false;
  int evaluations = 0;  ///< h2_conditional calls
};

/// max over pure probes of h2_conditional(choi_bf(stinespring_isometry(p, probe))).
BestProbeH2 best_probe_h2(const UnitaryParams& p, const OptimizerConfig& config = {});

/// h2 for a fixed probe.
H2Result probe_h2(const UnitaryParams& p, const ProbeState& probe, const OptimizerConfig& config = {});

}  // namespace qrl
