#pragma once

// Environment-parametrized channel: a fixed pure probe on A, the environment
// state on E, and a two-qubit unitary U^{AE->BF}. The probe is held fixed, so
// V|e> := U(|phi> (x) |e>) is an isometry E -> B (x) F and
//   channel    N(theta)   = Tr_F[V theta V^dagger]
//   complement N^c(theta) = Tr_B[V theta V^dagger].

#include <array>

#include "qrl/qlin.hpp"
#include "qrl/unitary.hpp"

namespace qrl {

using BlochVector = std::array<double, 3>;

/// |phi> = cos(phi1/2)|0> + exp(i phi2) sin(phi1/2)|1>.
struct ProbeState {
  double phi1 = 0.0;  ///< polar angle, [0, pi]
  double phi2 = 0.0;  ///< azimuth, [0, 2 pi)

  /// Maps arbitrary angles onto the same ray with phi1 in [0, pi] and
  /// phi2 in [0, 2 pi).
  [[nodiscard]] static ProbeState canonical(double phi1, double phi2);

  [[nodiscard]] Matrix ket() const;
  [[nodiscard]] Matrix density() const;
  [[nodiscard]] BlochVector bloch() const;
};

/// theta = I/2 + r (sin t1 cos t2 X + sin t1 sin t2 Y + cos t1 Z).
/// r is the radial coordinate in [0, 1/2]; the Bloch vector has length 2r.
struct EnvState {
  double r = 0.0;
  double theta1 = 0.0;
  double theta2 = 0.0;

  [[nodiscard]] Matrix density() const;
  [[nodiscard]] BlochVector bloch() const;
};

/// Throws DomainError when the state lies outside 0<=r<=1/2, 0<=t1<=pi,
/// 0<=t2<=2pi.
void validate(const EnvState& env);

struct ChannelIsometry {
  Matrix v;  ///< 4x2, columns V|0>, V|1> in the (B (x) F) canonical basis
  ProbeState probe;
  UnitaryParams params;
};

ChannelIsometry stinespring_isometry(const UnitaryParams& p, const ProbeState& probe);

/// Tr_F[V x V^dagger] for any 2x2 operator x (linear extension of the channel).
Matrix apply_channel(const ChannelIsometry& iso, const Matrix& x);
Matrix apply_channel(const ChannelIsometry& iso, const EnvState& env);

/// Tr_B[V x V^dagger].
Matrix apply_complement(const ChannelIsometry& iso, const Matrix& x);
Matrix apply_complement(const ChannelIsometry& iso, const EnvState& env);

/// rho_BF on (B = reference copy of E) (x) F.
struct BipartiteState {
  Matrix rho_bf;
};

/// (id (x) N^c) applied to (1/2) sum_ij |ii><jj|.
BipartiteState choi_bf(const ChannelIsometry& iso);

/// d theta / d r, d theta / d theta1, d theta / d theta2.
std::array<Matrix, 3> env_bloch_derivatives(const EnvState& env);

/// Affine action of the channel on Bloch vectors: n_out = linear * n_in + offset,
/// where rho = (I + n . sigma) / 2 on both sides.
struct BlochMap {
  std::array<BlochVector, 3> linear{};  ///< row-major 3x3
  BlochVector offset{};

  [[nodiscard]] BlochVector apply(const BlochVector& n) const noexcept;
  /// Linear part only; maps derivative directions.
  [[nodiscard]] BlochVector apply_linear(const BlochVector& d) const noexcept;
};

BlochMap bloch_map(const ChannelIsometry& iso);

/// Bloch vector of a 2x2 Hermitian operator: n_k = tr(m sigma_k).
BlochVector bloch_of(const Matrix& m);

/// Derivative directions of the environment Bloch vector 2r e(t1, t2) with
/// respect to (r, theta1, theta2).
std::array<BlochVector, 3> env_bloch_vector_derivatives(const EnvState& env);

}  // namespace qrl
