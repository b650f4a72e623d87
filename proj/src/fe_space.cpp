#include "sdtg/fe_space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sdtg {

namespace {

std::uint8_t tag_bit(BoundaryTag tag) { return static_cast<std::uint8_t>(1U << static_cast<unsigned>(tag)); }

}  // namespace

AnalyticField AnalyticField::scalar(std::function<double(Point)> f, std::function<Vec2(Point)> grad) {
  AnalyticField out;
  out.components = 1;
  out.value = [f = std::move(f)](Point p) { return Vec2{f(p), 0.0}; };
  if (grad) {
    out.gradient = [grad = std::move(grad)](Point p) { return Mat2{grad(p), Vec2{0.0, 0.0}}; };
  }
  return out;
}

AnalyticField AnalyticField::vector(std::function<Vec2(Point)> f, std::function<Mat2(Point)> grad) {
  AnalyticField out;
  out.components = 2;
  out.value = std::move(f);
  out.gradient = std::move(grad);
  return out;
}

AnalyticField AnalyticField::zero(int components) {
  AnalyticField out;
  out.components = components;
  out.value = [](Point) { return Vec2{0.0, 0.0}; };
  out.gradient = [](Point) { return Mat2{}; };
  return out;
}

FESpace::FESpace(std::shared_ptr<const Mesh> mesh, ElementKind kind, int components,
                 std::vector<BoundaryTag> dirichlet_tags)
    : mesh_(std::move(mesh)), kind_(kind), components_(components) {
  if (!mesh_) throw std::invalid_argument("FESpace: null mesh");
  if (components_ != 1 && components_ != 2) throw std::invalid_argument("FESpace: components must be 1 or 2");
  if (kind_ == ElementKind::P1Bubble && components_ != 2) {
    throw std::invalid_argument("FESpace: P1Bubble is only valid for velocity (2-component) spaces");
  }

  const auto& m = *mesh_;
  const auto nv = m.vertex_count();
  points_.assign(m.vertices().begin(), m.vertices().end());
  if (kind_ == ElementKind::P2) {
    for (const auto& e : m.edges()) {
      const auto& a = m.vertices()[e.vertices[0]];
      const auto& b = m.vertices()[e.vertices[1]];
      points_.push_back({0.5 * (a.x + b.x), 0.5 * (a.y + b.y)});
    }
  } else if (kind_ == ElementKind::P1Bubble) {
    for (std::size_t c = 0; c < m.cell_count(); ++c) {
      const auto p = m.cell_points(static_cast<int>(c));
      points_.push_back({(p[0].x + p[1].x + p[2].x) / 3.0, (p[0].y + p[1].y + p[2].y) / 3.0});
    }
  }

  tag_mask_.assign(points_.size(), 0);
  for (std::size_t i = 0; i < m.edge_count(); ++i) {
    const auto& e = m.edges()[i];
    if (e.tag == BoundaryTag::None) continue;
    const auto bit = tag_bit(e.tag);
    tag_mask_[e.vertices[0]] |= bit;
    tag_mask_[e.vertices[1]] |= bit;
    if (kind_ == ElementKind::P2) tag_mask_[nv + i] |= bit;
  }

  std::uint8_t dirichlet_mask = 0;
  for (auto t : dirichlet_tags) dirichlet_mask |= tag_bit(t);
  for (int s = 0; s < scalar_dof_count(); ++s) {
    if ((tag_mask_[s] & dirichlet_mask) == 0) continue;
    for (int c = 0; c < components_; ++c) dirichlet_.push_back(dof(s, c));
  }
}

std::array<int, kMaxLocalDofs> FESpace::cell_scalar_dofs(int cell) const {
  std::array<int, kMaxLocalDofs> out{};
  out.fill(-1);
  const auto& c = mesh_->cells()[cell];
  out[0] = c[0];
  out[1] = c[1];
  out[2] = c[2];
  const int nv = static_cast<int>(mesh_->vertex_count());
  if (kind_ == ElementKind::P2) {
    const auto& ce = mesh_->cell_edges()[cell];
    out[3] = nv + ce[0];
    out[4] = nv + ce[1];
    out[5] = nv + ce[2];
  } else if (kind_ == ElementKind::P1Bubble) {
    out[3] = nv + cell;
  }
  return out;
}

std::vector<int> FESpace::dofs_on(BoundaryTag tag) const {
  std::vector<int> out;
  const auto bit = tag_bit(tag);
  for (int s = 0; s < scalar_dof_count(); ++s) {
    if ((tag_mask_[s] & bit) == 0) continue;
    for (int c = 0; c < components_; ++c) out.push_back(dof(s, c));
  }
  return out;
}

bool FESpace::is_dirichlet(int d) const { return std::binary_search(dirichlet_.begin(), dirichlet_.end(), d); }

FEFunction::FEFunction(std::shared_ptr<const FESpace> space) : space_(std::move(space)) {
  if (!space_) throw std::invalid_argument("FEFunction: null space");
  coeffs_ = Eigen::VectorXd::Zero(space_->dof_count());
}

FEFunction::FEFunction(std::shared_ptr<const FESpace> space, Eigen::VectorXd coeffs)
    : space_(std::move(space)), coeffs_(std::move(coeffs)) {
  if (!space_) throw std::invalid_argument("FEFunction: null space");
  if (coeffs_.size() != space_->dof_count()) throw std::invalid_argument("FEFunction: coefficient length mismatch");
}

Vec2 FEFunction::value(int cell, const Barycentric& l) const {
  const auto& sp = *space_;
  const auto phi = basis_values(sp.kind(), l);
  const auto dofs = sp.cell_scalar_dofs(cell);
  Vec2 v{0.0, 0.0};
  for (int a = 0; a < sp.local_count(); ++a) {
    for (int c = 0; c < sp.components(); ++c) v[c] += coeffs_[sp.dof(dofs[a], c)] * phi[a];
  }
  return v;
}

Mat2 FEFunction::gradient(int cell, const Barycentric& l, const CellGeometry& geom) const {
  const auto& sp = *space_;
  const auto grad = basis_gradients(sp.kind(), l, geom);
  const auto dofs = sp.cell_scalar_dofs(cell);
  Mat2 g{};
  for (int a = 0; a < sp.local_count(); ++a) {
    for (int c = 0; c < sp.components(); ++c) {
      const double w = coeffs_[sp.dof(dofs[a], c)];
      g[c][0] += w * grad[a][0];
      g[c][1] += w * grad[a][1];
    }
  }
  return g;
}

FEFunction interpolate(const std::shared_ptr<const FESpace>& space, const AnalyticField& f) {
  if (f.components != space->components()) throw std::invalid_argument("interpolate: component mismatch");
  FEFunction out(space);
  const auto& pts = space->scalar_dof_points();
  for (int s = 0; s < space->scalar_dof_count(); ++s) {
    if (space->is_bubble(s)) continue;
    const Vec2 v = f.value(pts[s]);
    for (int c = 0; c < space->components(); ++c) out.coeffs()[space->dof(s, c)] = v[c];
  }
  return out;
}

Vec2 eval_fe(const FEFunction& f, int cell, const Barycentric& l) {
  if (cell < 0 || cell >= static_cast<int>(f.space().mesh().cell_count())) {
    throw std::invalid_argument("eval_fe: cell index out of range");
  }
  if (std::abs(l[0] + l[1] + l[2] - 1.0) > 1e-10) {
    throw std::invalid_argument("eval_fe: barycentric coordinates must sum to one");
  }
  return f.value(cell, l);
}

}  // namespace sdtg
