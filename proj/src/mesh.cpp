#include "sdtg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "sdtg/errors.hpp"

namespace sdtg {

namespace {

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32U) | hi;
}

// Coordinates are computed the same way for every mesh so that two meshes
// sharing an edge of their bounding boxes agree bitwise there.
double grid_coordinate(double lo, double hi, int i, int n) {
  if (i == n) return hi;
  return lo + (hi - lo) * (static_cast<double>(i) / static_cast<double>(n));
}

}  // namespace

Mesh::Mesh(Region region, std::vector<Point> vertices, std::vector<std::array<int, 3>> cells)
    : region_(region), vertices_(std::move(vertices)), cells_(std::move(cells)) {
  if (vertices_.empty() || cells_.empty()) throw std::invalid_argument("Mesh: empty vertex or cell list");
  bbox_ = {vertices_[0].x, vertices_[0].x, vertices_[0].y, vertices_[0].y};
  for (const auto& p : vertices_) {
    bbox_.x0 = std::min(bbox_.x0, p.x);
    bbox_.x1 = std::max(bbox_.x1, p.x);
    bbox_.y0 = std::min(bbox_.y0, p.y);
    bbox_.y1 = std::max(bbox_.y1, p.y);
  }
  const auto nv = static_cast<int>(vertices_.size());
  for (const auto& c : cells_) {
    for (int v : c) {
      if (v < 0 || v >= nv) throw std::invalid_argument("Mesh: cell references unknown vertex");
    }
  }
  build_edges();
}

void Mesh::build_edges() {
  std::unordered_map<std::uint64_t, int> lookup;
  lookup.reserve(cells_.size() * 2);
  cell_edges_.resize(cells_.size());
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    const auto& cell = cells_[c];
    for (int e = 0; e < 3; ++e) {
      const int a = cell[e];
      const int b = cell[(e + 1) % 3];
      const auto [it, inserted] = lookup.try_emplace(edge_key(a, b), static_cast<int>(edges_.size()));
      if (inserted) {
        Edge edge;
        edge.vertices = {std::min(a, b), std::max(a, b)};
        edge.cells = {static_cast<int>(c), -1};
        edges_.push_back(edge);
      } else {
        auto& edge = edges_[it->second];
        if (edge.cells[1] != -1) throw std::invalid_argument("Mesh: edge shared by more than two cells");
        edge.cells[1] = static_cast<int>(c);
      }
      cell_edges_[c][e] = it->second;
    }
  }

  const bool touches_interface = bbox_.y0 == 0.0 || bbox_.y1 == 0.0;
  const BoundaryTag outer = region_ == Region::Stokes ? BoundaryTag::GammaS : BoundaryTag::GammaD;
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    auto& edge = edges_[i];
    if (edge.cells[1] != -1) continue;
    const auto& pa = vertices_[edge.vertices[0]];
    const auto& pb = vertices_[edge.vertices[1]];
    const bool on_interface = touches_interface && pa.y == 0.0 && pb.y == 0.0;
    edge.tag = on_interface ? BoundaryTag::Interface : outer;
    if (on_interface) {
      const int cell = edge.cells[0];
      int local = 0;
      while (cell_edges_[cell][local] != static_cast<int>(i)) ++local;
      interface_edges_.push_back(
          {static_cast<int>(i), cell, local, std::min(pa.x, pb.x), std::max(pa.x, pb.x)});
    }
  }
  std::sort(interface_edges_.begin(), interface_edges_.end(),
            [](const InterfaceEdge& l, const InterfaceEdge& r) { return l.xa < r.xa; });
}

double Mesh::signed_area(int cell) const {
  const auto p = cell_points(cell);
  return 0.5 * ((p[1].x - p[0].x) * (p[2].y - p[0].y) - (p[2].x - p[0].x) * (p[1].y - p[0].y));
}

std::array<Point, 3> Mesh::cell_points(int cell) const {
  const auto& c = cells_.at(static_cast<std::size_t>(cell));
  return {vertices_[c[0]], vertices_[c[1]], vertices_[c[2]]};
}

bool Mesh::is_conforming() const {
  for (const auto& edge : edges_) {
    if (edge.cells[1] != -1) continue;
    const auto& pa = vertices_[edge.vertices[0]];
    const auto& pb = vertices_[edge.vertices[1]];
    const bool on_box = (pa.x == bbox_.x0 && pb.x == bbox_.x0) || (pa.x == bbox_.x1 && pb.x == bbox_.x1) ||
                        (pa.y == bbox_.y0 && pb.y == bbox_.y0) || (pa.y == bbox_.y1 && pb.y == bbox_.y1);
    // A boundary edge inside the box means a hanging node or a hole.
    if (!on_box) return false;
  }
  return true;
}

Mesh build_rect_mesh(const Rect& rect, int nx, int ny, Diagonal diag, Region region) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("build_rect_mesh: subdivision counts must be >= 1");
  if (!(rect.x0 < rect.x1) || !(rect.y0 < rect.y1)) throw std::invalid_argument("build_rect_mesh: degenerate rectangle");

  std::vector<Point> vertices;
  vertices.reserve(static_cast<std::size_t>(nx + 1) * static_cast<std::size_t>(ny + 1));
  for (int j = 0; j <= ny; ++j) {
    const double y = grid_coordinate(rect.y0, rect.y1, j, ny);
    for (int i = 0; i <= nx; ++i) vertices.push_back({grid_coordinate(rect.x0, rect.x1, i, nx), y});
  }

  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  std::vector<std::array<int, 3>> cells;
  cells.reserve(2 * static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int a = id(i, j);
      const int b = id(i + 1, j);
      const int c = id(i + 1, j + 1);
      const int d = id(i, j + 1);
      if (diag == Diagonal::NE) {
        cells.push_back({a, b, c});
        cells.push_back({a, c, d});
      } else {
        cells.push_back({a, b, d});
        cells.push_back({b, c, d});
      }
    }
  }
  return Mesh(region, std::move(vertices), std::move(cells));
}

CoupledMeshes build_coupled_meshes(double H) {
  if (!(H > 0.0) || H > 1.0) throw std::invalid_argument("build_coupled_meshes: H must lie in (0, 1]");
  const int nx = static_cast<int>(std::lround(std::numbers::pi / H));
  const int ny = static_cast<int>(std::lround(1.0 / H));
  constexpr double pi = std::numbers::pi;
  CoupledMeshes out;
  out.nx = nx;
  out.ny = ny;
  out.stokes = std::make_shared<const Mesh>(build_rect_mesh({0.0, pi, 0.0, 1.0}, nx, ny, Diagonal::NE, Region::Stokes));
  out.darcy = std::make_shared<const Mesh>(build_rect_mesh({0.0, pi, -1.0, 0.0}, nx, ny, Diagonal::NE, Region::Darcy));
  return out;
}

InterfacePartition::InterfacePartition(std::vector<double> breakpoints) : breakpoints_(std::move(breakpoints)) {
  if (breakpoints_.size() < 2) throw std::invalid_argument("InterfacePartition: need at least two breakpoints");
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i] > breakpoints_[i - 1])) {
      throw std::invalid_argument("InterfacePartition: breakpoints must be strictly increasing");
    }
  }
}

std::size_t InterfacePartition::locate(double x) const {
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  if (it == breakpoints_.begin()) return 0;
  const auto idx = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
  return std::min(idx, segment_count() - 1);
}

InterfacePartition interface_partition(const Mesh& mesh) {
  const auto& iface = mesh.interface_edges();
  if (iface.empty()) throw InvalidMesh("interface_partition: mesh has no interface edges");
  std::vector<double> points;
  points.reserve(iface.size() + 1);
  points.push_back(iface.front().xa);
  for (const auto& e : iface) {
    if (e.xa != points.back()) throw InvalidMesh("interface_partition: interface edges are not contiguous");
    points.push_back(e.xb);
  }
  return InterfacePartition(std::move(points));
}

const char* to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::None: return "none";
    case BoundaryTag::GammaS: return "gamma_s";
    case BoundaryTag::GammaD: return "gamma_d";
    case BoundaryTag::Interface: return "interface";
  }
  return "?";
}

void write_mesh(const Mesh& mesh, std::ostream& out) {
  out.precision(17);
  out << "# region " << (mesh.region() == Region::Stokes ? "stokes" : "darcy") << '\n';
  for (const auto& p : mesh.vertices()) out << "v " << p.x << ' ' << p.y << '\n';
  for (const auto& c : mesh.cells()) out << "c " << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
  for (const auto& e : mesh.edges()) {
    if (e.tag == BoundaryTag::None) continue;
    out << "e " << e.vertices[0] << ' ' << e.vertices[1] << ' ' << to_string(e.tag) << '\n';
  }
}

}  // namespace sdtg
