#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "sdtg/mesh.hpp"

namespace sdtg {

/// Scalar Lagrange-type element families on triangles.
///   P1        vertex values
///   P2        vertex values + edge midpoint values
///   P1Bubble  P1 enriched with the cubic bubble 27*l0*l1*l2 (MINI velocity)
enum class ElementKind : std::uint8_t { P1, P2, P1Bubble };

using Vec2 = std::array<double, 2>;
/// Gradient of a vector field, [component][direction].
using Mat2 = std::array<Vec2, 2>;
using Barycentric = std::array<double, 3>;

inline constexpr int kMaxLocalDofs = 6;

[[nodiscard]] constexpr int local_dof_count(ElementKind kind) {
  switch (kind) {
    case ElementKind::P1: return 3;
    case ElementKind::P2: return 6;
    case ElementKind::P1Bubble: return 4;
  }
  return 0;
}

[[nodiscard]] std::string_view to_string(ElementKind kind);

/// Affine map data of one triangle.
struct CellGeometry {
  std::array<Point, 3> p{};
  double area = 0.0;
  std::array<Vec2, 3> grad_lambda{};

  [[nodiscard]] Point map(const Barycentric& l) const {
    return {l[0] * p[0].x + l[1] * p[1].x + l[2] * p[2].x, l[0] * p[0].y + l[1] * p[1].y + l[2] * p[2].y};
  }
};

[[nodiscard]] CellGeometry cell_geometry(const Mesh& mesh, int cell);

/// Barycentric coordinates, in the owning cell, of the point xa + t (xb - xa)
/// on an interface edge.
[[nodiscard]] Barycentric interface_barycentric(const Mesh& mesh, const InterfaceEdge& edge, double t);

using LocalValues = std::array<double, kMaxLocalDofs>;
using LocalGradients = std::array<Vec2, kMaxLocalDofs>;

/// Local basis in the order vertices (0,1,2), then edges (01,12,20) for P2 or
/// the bubble for P1Bubble.
[[nodiscard]] LocalValues basis_values(ElementKind kind, const Barycentric& l);
[[nodiscard]] LocalGradients basis_gradients(ElementKind kind, const Barycentric& l, const CellGeometry& geom);

}  // namespace sdtg
