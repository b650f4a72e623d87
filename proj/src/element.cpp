#include "sdtg/element.hpp"

#include <stdexcept>

namespace sdtg {

std::string_view to_string(ElementKind kind) {
  switch (kind) {
    case ElementKind::P1: return "P1";
    case ElementKind::P2: return "P2";
    case ElementKind::P1Bubble: return "P1Bubble";
  }
  return "?";
}

CellGeometry cell_geometry(const Mesh& mesh, int cell) {
  CellGeometry g;
  g.p = mesh.cell_points(cell);
  const double det = (g.p[1].x - g.p[0].x) * (g.p[2].y - g.p[0].y) - (g.p[2].x - g.p[0].x) * (g.p[1].y - g.p[0].y);
  if (!(det > 0.0)) throw std::invalid_argument("cell_geometry: cell with non-positive area");
  g.area = 0.5 * det;
  for (int i = 0; i < 3; ++i) {
    const Point& a = g.p[(i + 1) % 3];
    const Point& b = g.p[(i + 2) % 3];
    g.grad_lambda[i] = {(a.y - b.y) / det, (b.x - a.x) / det};
  }
  return g;
}

LocalValues basis_values(ElementKind kind, const Barycentric& l) {
  LocalValues v{};
  switch (kind) {
    case ElementKind::P1:
      v[0] = l[0];
      v[1] = l[1];
      v[2] = l[2];
      break;
    case ElementKind::P2:
      for (int i = 0; i < 3; ++i) {
        v[i] = l[i] * (2.0 * l[i] - 1.0);
        v[3 + i] = 4.0 * l[i] * l[(i + 1) % 3];
      }
      break;
    case ElementKind::P1Bubble:
      v[0] = l[0];
      v[1] = l[1];
      v[2] = l[2];
      v[3] = 27.0 * l[0] * l[1] * l[2];
      break;
  }
  return v;
}

LocalGradients basis_gradients(ElementKind kind, const Barycentric& l, const CellGeometry& geom) {
  LocalGradients g{};
  const auto& gl = geom.grad_lambda;
  switch (kind) {
    case ElementKind::P1:
      for (int i = 0; i < 3; ++i) g[i] = gl[i];
      break;
    case ElementKind::P2:
      for (int i = 0; i < 3; ++i) {
        const double s = 4.0 * l[i] - 1.0;
        g[i] = {s * gl[i][0], s * gl[i][1]};
        const int j = (i + 1) % 3;
        g[3 + i] = {4.0 * (l[i] * gl[j][0] + l[j] * gl[i][0]), 4.0 * (l[i] * gl[j][1] + l[j] * gl[i][1])};
      }
      break;
    case ElementKind::P1Bubble:
      for (int i = 0; i < 3; ++i) g[i] = gl[i];
      for (int d = 0; d < 2; ++d) {
        g[3][d] = 27.0 * (l[1] * l[2] * gl[0][d] + l[0] * l[2] * gl[1][d] + l[0] * l[1] * gl[2][d]);
      }
      break;
  }
  return g;
}

Barycentric interface_barycentric(const Mesh& mesh, const InterfaceEdge& edge, double t) {
  const auto& cell = mesh.cells()[edge.cell];
  const int la = edge.local_edge;
  const int lb = (la + 1) % 3;
  const bool a_is_left = mesh.vertices()[cell[la]].x < mesh.vertices()[cell[lb]].x;
  Barycentric l{};
  l[a_is_left ? la : lb] = 1.0 - t;
  l[a_is_left ? lb : la] = t;
  return l;
}

}  // namespace sdtg
