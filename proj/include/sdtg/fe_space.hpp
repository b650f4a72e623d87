#pragma once

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <vector>

#include "sdtg/element.hpp"
#include "sdtg/mesh.hpp"

namespace sdtg {

/// Closed-form field used for data, boundary values and error norms. Scalar
/// fields use component 0 of `value` and row 0 of `gradient`.
struct AnalyticField {
  int components = 1;
  std::function<Vec2(Point)> value;
  std::function<Mat2(Point)> gradient;  ///< optional

  [[nodiscard]] static AnalyticField scalar(std::function<double(Point)> f, std::function<Vec2(Point)> grad = {});
  [[nodiscard]] static AnalyticField vector(std::function<Vec2(Point)> f, std::function<Mat2(Point)> grad = {});
  [[nodiscard]] static AnalyticField zero(int components);
};

/// Finite element space on one mesh. Scalar DOFs are numbered vertices, then
/// edges (P2), then cells (bubble); vector DOFs interleave components, i.e.
/// dof = components * scalar_dof + component.
class FESpace {
 public:
  FESpace(std::shared_ptr<const Mesh> mesh, ElementKind kind, int components,
          std::vector<BoundaryTag> dirichlet_tags);

  [[nodiscard]] const Mesh& mesh() const noexcept { return *mesh_; }
  [[nodiscard]] const std::shared_ptr<const Mesh>& mesh_ptr() const noexcept { return mesh_; }
  [[nodiscard]] ElementKind kind() const noexcept { return kind_; }
  [[nodiscard]] int components() const noexcept { return components_; }
  [[nodiscard]] int local_count() const noexcept { return local_dof_count(kind_); }
  [[nodiscard]] int scalar_dof_count() const noexcept { return static_cast<int>(points_.size()); }
  [[nodiscard]] int dof_count() const noexcept { return components_ * scalar_dof_count(); }
  [[nodiscard]] int dof(int scalar, int component) const noexcept { return components_ * scalar + component; }

  /// Global scalar DOFs of a cell in local basis order; entries past local_count() are unused.
  [[nodiscard]] std::array<int, kMaxLocalDofs> cell_scalar_dofs(int cell) const;

  /// Geometric location of each scalar DOF (cell barycenter for bubbles).
  [[nodiscard]] const std::vector<Point>& scalar_dof_points() const noexcept { return points_; }
  [[nodiscard]] bool is_bubble(int scalar) const noexcept {
    return kind_ == ElementKind::P1Bubble && scalar >= static_cast<int>(mesh_->vertex_count());
  }

  /// Sorted DOF indices (all components) constrained by the Dirichlet tags.
  [[nodiscard]] const std::vector<int>& dirichlet_dofs() const noexcept { return dirichlet_; }
  /// Sorted DOF indices whose scalar node touches an edge carrying `tag`.
  [[nodiscard]] std::vector<int> dofs_on(BoundaryTag tag) const;
  [[nodiscard]] bool is_dirichlet(int dof) const;

 private:
  std::shared_ptr<const Mesh> mesh_;
  ElementKind kind_;
  int components_;
  std::vector<Point> points_;
  std::vector<std::uint8_t> tag_mask_;  // per scalar DOF, bit per BoundaryTag
  std::vector<int> dirichlet_;
};

/// Coefficient vector over an FESpace.
class FEFunction {
 public:
  explicit FEFunction(std::shared_ptr<const FESpace> space);
  FEFunction(std::shared_ptr<const FESpace> space, Eigen::VectorXd coeffs);

  [[nodiscard]] const FESpace& space() const noexcept { return *space_; }
  [[nodiscard]] const std::shared_ptr<const FESpace>& space_ptr() const noexcept { return space_; }
  [[nodiscard]] const Eigen::VectorXd& coeffs() const noexcept { return coeffs_; }
  [[nodiscard]] Eigen::VectorXd& coeffs() noexcept { return coeffs_; }

  /// Value on `cell` at barycentric point `l` (no argument checks).
  [[nodiscard]] Vec2 value(int cell, const Barycentric& l) const;
  [[nodiscard]] Mat2 gradient(int cell, const Barycentric& l, const CellGeometry& geom) const;

 private:
  std::shared_ptr<const FESpace> space_;
  Eigen::VectorXd coeffs_;
};

/// Nodal interpolant; bubble coefficients are set to zero.
[[nodiscard]] FEFunction interpolate(const std::shared_ptr<const FESpace>& space, const AnalyticField& f);

/// Checked point evaluation. Throws std::invalid_argument for a bad cell index
/// or barycentric coordinates that do not sum to one.
[[nodiscard]] Vec2 eval_fe(const FEFunction& f, int cell, const Barycentric& l);

}  // namespace sdtg
