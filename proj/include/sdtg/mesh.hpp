#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

namespace sdtg {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Axis-aligned rectangle [x0, x1] x [y0, y1].
struct Rect {
  double x0 = 0.0;
  double x1 = 1.0;
  double y0 = 0.0;
  double y1 = 1.0;
};

enum class Region : std::uint8_t { Stokes, Darcy };

/// Boundary classification of an edge. Interior edges carry `None`.
enum class BoundaryTag : std::uint8_t { None, GammaS, GammaD, Interface };

/// Diagonal used to split each structured cell: NE joins lower-left to
/// upper-right, NW joins lower-right to upper-left.
enum class Diagonal : std::uint8_t { NE, NW };

struct Edge {
  std::array<int, 2> vertices{};
  /// Incident cells; cells[1] == -1 on the boundary.
  std::array<int, 2> cells{-1, -1};
  BoundaryTag tag = BoundaryTag::None;
};

/// Edge of the interface together with the cell it bounds, sorted by x.
struct InterfaceEdge {
  int edge = -1;
  int cell = -1;
  /// Local edge index inside `cell` (local edge e joins local vertices e and e+1 mod 3).
  int local_edge = -1;
  double xa = 0.0;  ///< left endpoint
  double xb = 0.0;  ///< right endpoint
};

/// Conforming triangulation of one rectangular subdomain. Immutable after
/// construction; share it through `std::shared_ptr<const Mesh>`.
class Mesh {
 public:
  Mesh(Region region, std::vector<Point> vertices, std::vector<std::array<int, 3>> cells);

  [[nodiscard]] Region region() const noexcept { return region_; }
  [[nodiscard]] const std::vector<Point>& vertices() const noexcept { return vertices_; }
  [[nodiscard]] const std::vector<std::array<int, 3>>& cells() const noexcept { return cells_; }
  [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }
  /// Global edge indices of each cell, local edge e = (v_e, v_{e+1}).
  [[nodiscard]] const std::vector<std::array<int, 3>>& cell_edges() const noexcept { return cell_edges_; }
  [[nodiscard]] const std::vector<InterfaceEdge>& interface_edges() const noexcept { return interface_edges_; }

  [[nodiscard]] std::size_t vertex_count() const noexcept { return vertices_.size(); }
  [[nodiscard]] std::size_t cell_count() const noexcept { return cells_.size(); }
  [[nodiscard]] std::size_t edge_count() const noexcept { return edges_.size(); }

  [[nodiscard]] double signed_area(int cell) const;
  [[nodiscard]] std::array<Point, 3> cell_points(int cell) const;

  /// True when every interior edge has two incident cells and every boundary
  /// edge lies on the bounding box.
  [[nodiscard]] bool is_conforming() const;

 private:
  void build_edges();

  Region region_;
  std::vector<Point> vertices_;
  std::vector<std::array<int, 3>> cells_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> cell_edges_;
  std::vector<InterfaceEdge> interface_edges_;
  Rect bbox_;
};

/// Structured nx x ny triangulation of `rect`. Boundary edges on y == 0 are
/// tagged Interface, the remaining ones GammaS (Stokes) or GammaD (Darcy).
[[nodiscard]] Mesh build_rect_mesh(const Rect& rect, int nx, int ny, Diagonal diag, Region region);

struct CoupledMeshes {
  std::shared_ptr<const Mesh> stokes;
  std::shared_ptr<const Mesh> darcy;
  int nx = 0;
  int ny = 0;
};

/// Stokes mesh on [0,pi]x[0,1] and Darcy mesh on [0,pi]x[-1,0] with
/// nx = round(pi/H), ny = round(1/H) and NE diagonals.
[[nodiscard]] CoupledMeshes build_coupled_meshes(double H);

/// Sorted breakpoints of the interface partition induced by a mesh.
class InterfacePartition {
 public:
  InterfacePartition() = default;
  explicit InterfacePartition(std::vector<double> breakpoints);

  [[nodiscard]] std::span<const double> breakpoints() const noexcept { return breakpoints_; }
  [[nodiscard]] std::size_t segment_count() const noexcept {
    return breakpoints_.empty() ? 0 : breakpoints_.size() - 1;
  }
  [[nodiscard]] double front() const { return breakpoints_.front(); }
  [[nodiscard]] double back() const { return breakpoints_.back(); }
  /// Segment containing x (closed on the right for the last segment).
  [[nodiscard]] std::size_t locate(double x) const;

  friend bool operator==(const InterfacePartition&, const InterfacePartition&) = default;

 private:
  std::vector<double> breakpoints_;
};

[[nodiscard]] InterfacePartition interface_partition(const Mesh& mesh);

/// Plain-text dump: "v x y", "c a b c", "e a b tag" one record per line.
void write_mesh(const Mesh& mesh, std::ostream& out);

[[nodiscard]] const char* to_string(BoundaryTag tag);

}  // namespace sdtg
