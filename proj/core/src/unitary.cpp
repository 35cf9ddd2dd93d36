#include "qrl/unitary.hpp"

#include <cmath>

#include <fmt/format.h>

#include "qrl/error.hpp"

namespace qrl {

double UnitaryParams::norm() const noexcept { return std::sqrt(alpha_x * alpha_x + alpha_y * alpha_y + alpha_z * alpha_z); }

std::optional<std::string> tetrahedron_violation(const UnitaryParams& p) {
  constexpr double tol = kTetrahedronTolerance;
  if (!std::isfinite(p.alpha_x) || !std::isfinite(p.alpha_y) || !std::isfinite(p.alpha_z)) {
    return "alpha components must be finite";
  }
  if (p.alpha_x > kHalfPi + tol) {
    return fmt::format("pi/2 >= alpha_x violated (alpha_x = {})", p.alpha_x);
  }
  if (p.alpha_y > p.alpha_x + tol) {
    return fmt::format("alpha_x >= alpha_y violated (alpha_x = {}, alpha_y = {})", p.alpha_x, p.alpha_y);
  }
  if (p.alpha_z > p.alpha_y + tol) {
    return fmt::format("alpha_y >= alpha_z violated (alpha_y = {}, alpha_z = {})", p.alpha_y, p.alpha_z);
  }
  if (p.alpha_z < -tol) {
    return fmt::format("alpha_z >= 0 violated (alpha_z = {})", p.alpha_z);
  }
  return std::nullopt;
}

void validate(const UnitaryParams& p) {
  if (auto violation = tetrahedron_violation(p)) {
    throw DomainError("tetrahedron: " + *violation);
  }
}

Matrix build_unitary(const UnitaryParams& p) {
  validate(p);
  const double outer = 0.5 * (p.alpha_x - p.alpha_y);
  const double inner = 0.5 * (p.alpha_x + p.alpha_y);
  const Complex minus_i(0.0, -1.0);
  const Complex phase = std::polar(1.0, p.alpha_z);

  Matrix u(4, 4);
  u(0, 0) = std::cos(outer);
  u(0, 3) = minus_i * std::sin(outer);
  u(3, 0) = minus_i * std::sin(outer);
  u(3, 3) = std::cos(outer);
  u(1, 1) = phase * std::cos(inner);
  u(1, 2) = minus_i * phase * std::sin(inner);
  u(2, 1) = minus_i * phase * std::sin(inner);
  u(2, 2) = phase * std::cos(inner);
  return u;
}

std::array<double, 4> eigenphases(const UnitaryParams& p) {
  const double x = p.alpha_x;
  const double y = p.alpha_y;
  const double z = p.alpha_z;
  return {0.5 * (x - y + z), 0.5 * (-x + y + z), 0.5 * (-x - y - z), 0.5 * (x + y - z)};
}

std::array<Matrix, 4> magic_basis() {
  const double h = 1.0 / std::sqrt(2.0);
  const Complex mi(0.0, -h);
  return {
      Matrix::column({h, 0.0, 0.0, h}),
      Matrix::column({mi, 0.0, 0.0, -mi}),
      Matrix::column({0.0, h, -h, 0.0}),
      Matrix::column({0.0, mi, mi, 0.0}),
  };
}

Matrix magic_basis_sum(const UnitaryParams& p) {
  validate(p);
  const auto phases = eigenphases(p);
  const auto basis = magic_basis();
  Matrix u(4, 4);
  for (std::size_t k = 0; k < 4; ++k) {
    u += std::polar(1.0, -phases[k]) * outer(basis[k], basis[k]);
  }
  return u;
}

Matrix magic_basis_reconstruction(const UnitaryParams& p) {
  return std::polar(1.0, 0.5 * p.alpha_z) * magic_basis_sum(p);
}

UnitaryParams vertex_params(Vertex v) {
  switch (v) {
    case Vertex::I:
      return {0.0, 0.0, 0.0};
    case Vertex::C:
      return {kHalfPi, 0.0, 0.0};
    case Vertex::S:
      return {kHalfPi, kHalfPi, kHalfPi};
    case Vertex::D:
      return {kHalfPi, kHalfPi, 0.0};
  }
  return {};
}

std::string_view to_string(Vertex v) {
  switch (v) {
    case Vertex::I:
      return "I";
    case Vertex::C:
      return "C";
    case Vertex::S:
      return "S";
    case Vertex::D:
      return "D";
  }
  return "?";
}

std::string_view to_string(EdgeId e) {
  switch (e) {
    case EdgeId::IC:
      return "IC";
    case EdgeId::IS:
      return "IS";
    case EdgeId::ID:
      return "ID";
    case EdgeId::CS:
      return "CS";
    case EdgeId::CD:
      return "CD";
    case EdgeId::DS:
      return "DS";
  }
  return "?";
}

std::optional<Vertex> parse_vertex(std::string_view name) {
  for (Vertex v : kAllVertices) {
    if (to_string(v) == name) {
      return v;
    }
  }
  return std::nullopt;
}

std::optional<EdgeId> parse_edge(std::string_view name) {
  for (EdgeId e : kAllEdges) {
    if (to_string(e) == name) {
      return e;
    }
  }
  // The edges are undirected; accept either spelling.
  if (name.size() == 2) {
    const char reversed[2] = {name[1], name[0]};
    for (EdgeId e : kAllEdges) {
      if (to_string(e) == std::string_view(reversed, 2)) {
        return e;
      }
    }
  }
  return std::nullopt;
}

std::array<Vertex, 2> edge_endpoints(EdgeId e) {
  switch (e) {
    case EdgeId::IC:
      return {Vertex::I, Vertex::C};
    case EdgeId::IS:
      return {Vertex::I, Vertex::S};
    case EdgeId::ID:
      return {Vertex::I, Vertex::D};
    case EdgeId::CS:
      return {Vertex::C, Vertex::S};
    case EdgeId::CD:
      return {Vertex::C, Vertex::D};
    case EdgeId::DS:
      return {Vertex::D, Vertex::S};
  }
  return {Vertex::I, Vertex::I};
}

EdgePoint edge_point(EdgeId e, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw DomainError(fmt::format("edge_point: t = {} outside [0, 1]", t));
  }
  const double a = t * kHalfPi;
  EdgePoint pt;
  pt.edge = e;
  pt.t = t;
  pt.edge_angle = a;
  switch (e) {
    case EdgeId::IC:
      pt.params = {a, 0.0, 0.0};
      break;
    case EdgeId::IS:
      pt.params = {a, a, a};
      break;
    case EdgeId::ID:
      pt.params = {a, a, 0.0};
      break;
    case EdgeId::CS:
      pt.params = {kHalfPi, a, a};
      break;
    case EdgeId::CD:
      pt.params = {kHalfPi, a, 0.0};
      break;
    case EdgeId::DS:
      pt.params = {kHalfPi, kHalfPi, a};
      break;
  }
  pt.alpha_norm = pt.params.norm();
  return pt;
}

}  // namespace qrl
