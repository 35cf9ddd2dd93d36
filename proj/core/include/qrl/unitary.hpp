#pragma once

// Two-qubit entangling unitaries U = sum_k exp(-i lambda_k) |L_k><L_k|,
// diagonal in the magic basis and parametrized by a point of the tetrahedron
// pi/2 >= alpha_x >= alpha_y >= alpha_z >= 0.

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "qrl/qlin.hpp"

namespace qrl {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kHalfPi = kPi / 2.0;

/// Slack on the tetrahedron ordering inequalities.
inline constexpr double kTetrahedronTolerance = 1e-12;

struct UnitaryParams {
  double alpha_x = 0.0;  ///< radians
  double alpha_y = 0.0;
  double alpha_z = 0.0;

  [[nodiscard]] double norm() const noexcept;
  [[nodiscard]] std::array<double, 3> as_array() const noexcept { return {alpha_x, alpha_y, alpha_z}; }
  friend bool operator==(const UnitaryParams&, const UnitaryParams&) = default;
};

/// Empty when `p` lies in the tetrahedron; otherwise the first violated
/// inequality, spelled out with the offending values.
std::optional<std::string> tetrahedron_violation(const UnitaryParams& p);

/// Throws DomainError carrying the violated inequality.
void validate(const UnitaryParams& p);

/// The canonical-basis matrix on {|00>, |01>, |10>, |11>} (probe (x) env).
Matrix build_unitary(const UnitaryParams& p);

/// Eigenphases lambda_1..lambda_4 of U in the magic basis.
std::array<double, 4> eigenphases(const UnitaryParams& p);

/// The four magic basis states as 4x1 columns.
std::array<Matrix, 4> magic_basis();

/// sum_k exp(-i lambda_k) |L_k><L_k| with the eigenphases above. Equals the
/// canonical matrix only up to the global phase exp(-i alpha_z / 2).
Matrix magic_basis_sum(const UnitaryParams& p);

/// exp(i alpha_z / 2) * magic_basis_sum(p): the canonical matrix rebuilt from
/// projectors and eigenphases alone. Used to cross-check build_unitary.
Matrix magic_basis_reconstruction(const UnitaryParams& p);

enum class Vertex { I, C, S, D };
enum class EdgeId { IC, IS, ID, CS, CD, DS };

inline constexpr std::array<Vertex, 4> kAllVertices{Vertex::I, Vertex::C, Vertex::S, Vertex::D};
inline constexpr std::array<EdgeId, 6> kAllEdges{EdgeId::IC, EdgeId::IS, EdgeId::ID,
                                                 EdgeId::CS, EdgeId::CD, EdgeId::DS};

/// I = identity, C = (pi/2, 0, 0), S = SWAP, D = (pi/2, pi/2, 0).
UnitaryParams vertex_params(Vertex v);
std::string_view to_string(Vertex v);
std::string_view to_string(EdgeId e);
std::optional<Vertex> parse_vertex(std::string_view name);
std::optional<EdgeId> parse_edge(std::string_view name);
std::array<Vertex, 2> edge_endpoints(EdgeId e);

struct EdgePoint {
  EdgeId edge = EdgeId::IC;
  double t = 0.0;
  UnitaryParams params;
  double alpha_norm = 0.0;  ///< Euclidean norm of params
  /// Running angle t * pi / 2 of the coordinate(s) that vary along the edge.
  /// Edges that share a curve in the tetrahedron plots coincide in this
  /// abscissa, not in alpha_norm.
  double edge_angle = 0.0;
};

/// Linear interpolation between the edge's endpoint vertices.
/// Throws DomainError when t is outside [0, 1].
EdgePoint edge_point(EdgeId e, double t);

}  // namespace qrl
