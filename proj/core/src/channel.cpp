#include "qrl/channel.hpp"

#include <cmath>

#include <fmt/format.h>

#include "qrl/error.hpp"

namespace qrl {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

Matrix from_bloch_direction(double x, double y, double z) {
  return Matrix(2, 2, {Complex(z, 0.0), Complex(x, -y), Complex(x, y), Complex(-z, 0.0)});
}

// V x V^dagger for a 2x2 operator x on E; returns the 4x4 operator on B (x) F.
Matrix conjugate(const ChannelIsometry& iso, const Matrix& x) {
  if (x.rows() != 2 || x.cols() != 2) {
    throw DimensionError(fmt::format("channel: expected a 2x2 operator, got {}x{}", x.rows(), x.cols()));
  }
  return iso.v * x * iso.v.adjoint();
}

}  // namespace

ProbeState ProbeState::canonical(double phi1, double phi2) {
  double a = std::fmod(phi1, kTwoPi);
  if (a < 0.0) {
    a += kTwoPi;
  }
  double b = phi2;
  if (a > kPi) {
    // cos((2pi - a)/2) = -cos(a/2): same ray after a global sign, azimuth shifted by pi.
    a = kTwoPi - a;
    b += kPi;
  }
  b = std::fmod(b, kTwoPi);
  if (b < 0.0) {
    b += kTwoPi;
  }
  if (b >= kTwoPi) {
    b = 0.0;
  }
  return {a, b};
}

Matrix ProbeState::ket() const {
  return Matrix::column({std::cos(0.5 * phi1), std::polar(std::sin(0.5 * phi1), phi2)});
}

Matrix ProbeState::density() const {
  const Matrix k = ket();
  return outer(k, k);
}

BlochVector ProbeState::bloch() const {
  return {std::sin(phi1) * std::cos(phi2), std::sin(phi1) * std::sin(phi2), std::cos(phi1)};
}

Matrix EnvState::density() const {
  const BlochVector n = bloch();
  Matrix m = from_bloch_direction(n[0], n[1], n[2]) * Complex(0.5);
  m += Matrix::identity(2) * Complex(0.5);
  return m;
}

BlochVector EnvState::bloch() const {
  const double s = std::sin(theta1);
  return {2.0 * r * s * std::cos(theta2), 2.0 * r * s * std::sin(theta2), 2.0 * r * std::cos(theta1)};
}

void validate(const EnvState& env) {
  if (!(env.r >= 0.0 && env.r <= 0.5)) {
    throw DomainError(fmt::format("environment: r = {} outside [0, 1/2]", env.r));
  }
  if (!(env.theta1 >= 0.0 && env.theta1 <= kPi)) {
    throw DomainError(fmt::format("environment: theta1 = {} outside [0, pi]", env.theta1));
  }
  if (!(env.theta2 >= 0.0 && env.theta2 <= kTwoPi)) {
    throw DomainError(fmt::format("environment: theta2 = {} outside [0, 2pi]", env.theta2));
  }
}

ChannelIsometry stinespring_isometry(const UnitaryParams& p, const ProbeState& probe) {
  const Matrix u = build_unitary(p);
  const Matrix phi = probe.ket();
  ChannelIsometry iso{Matrix(4, 2), probe, p};
  // Column e of V is U applied to |phi> (x) |e>.
  for (std::size_t e = 0; e < 2; ++e) {
    for (std::size_t row = 0; row < 4; ++row) {
      Complex acc = 0.0;
      for (std::size_t a = 0; a < 2; ++a) {
        acc += u(row, 2 * a + e) * phi(a, 0);
      }
      iso.v(row, e) = acc;
    }
  }
  return iso;
}

Matrix apply_channel(const ChannelIsometry& iso, const Matrix& x) {
  return partial_trace(conjugate(iso, x), Subsystem::first);
}

Matrix apply_channel(const ChannelIsometry& iso, const EnvState& env) {
  return apply_channel(iso, env.density());
}

Matrix apply_complement(const ChannelIsometry& iso, const Matrix& x) {
  return partial_trace(conjugate(iso, x), Subsystem::second);
}

Matrix apply_complement(const ChannelIsometry& iso, const EnvState& env) {
  return apply_complement(iso, env.density());
}

BipartiteState choi_bf(const ChannelIsometry& iso) {
  Matrix rho(4, 4);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      Matrix eij(2, 2);
      eij(i, j) = 1.0;
      const Matrix block = apply_complement(iso, eij);
      for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t c = 0; c < 2; ++c) {
          rho(2 * i + r, 2 * j + c) = 0.5 * block(r, c);
        }
      }
    }
  }
  return {rho};
}

std::array<Matrix, 3> env_bloch_derivatives(const EnvState& env) {
  const auto d = env_bloch_vector_derivatives(env);
  std::array<Matrix, 3> out;
  for (std::size_t a = 0; a < 3; ++a) {
    out[a] = from_bloch_direction(d[a][0], d[a][1], d[a][2]) * Complex(0.5);
  }
  return out;
}

std::array<BlochVector, 3> env_bloch_vector_derivatives(const EnvState& env) {
  const double s1 = std::sin(env.theta1);
  const double c1 = std::cos(env.theta1);
  const double s2 = std::sin(env.theta2);
  const double c2 = std::cos(env.theta2);
  const double two_r = 2.0 * env.r;
  return {{
      {2.0 * s1 * c2, 2.0 * s1 * s2, 2.0 * c1},
      {two_r * c1 * c2, two_r * c1 * s2, -two_r * s1},
      {-two_r * s1 * s2, two_r * s1 * c2, 0.0},
  }};
}

BlochVector bloch_of(const Matrix& m) {
  if (m.rows() != 2 || m.cols() != 2) {
    throw DimensionError(fmt::format("bloch_of: expected 2x2, got {}x{}", m.rows(), m.cols()));
  }
  // tr(m X) = m01 + m10, tr(m Y) = i (m01 - m10), tr(m Z) = m00 - m11.
  return {(m(0, 1) + m(1, 0)).real(), (Complex(0.0, 1.0) * (m(0, 1) - m(1, 0))).real(),
          (m(0, 0) - m(1, 1)).real()};
}

BlochMap bloch_map(const ChannelIsometry& iso) {
  BlochMap map;
  map.offset = bloch_of(apply_channel(iso, Matrix::identity(2) * Complex(0.5)));
  const std::array<Matrix, 3> paulis{pauli_x(), pauli_y(), pauli_z()};
  for (std::size_t k = 0; k < 3; ++k) {
    // n_in = e_k contributes sigma_k / 2 to the input state.
    const BlochVector column = bloch_of(apply_channel(iso, paulis[k] * Complex(0.5)));
    for (std::size_t row = 0; row < 3; ++row) {
      map.linear[row][k] = column[row];
    }
  }
  return map;
}

BlochVector BlochMap::apply(const BlochVector& n) const noexcept {
  BlochVector out = apply_linear(n);
  for (std::size_t i = 0; i < 3; ++i) {
    out[i] += offset[i];
  }
  return out;
}

BlochVector BlochMap::apply_linear(const BlochVector& d) const noexcept {
  BlochVector out{};
  for (std::size_t i = 0; i < 3; ++i) {
    out[i] = linear[i][0] * d[0] + linear[i][1] * d[1] + linear[i][2] * d[2];
  }
  return out;
}

}  // namespace qrl
