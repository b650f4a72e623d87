#include "sdtg/assembly.hpp"

#include <array>
#include <stdexcept>

#include "sdtg/quadrature.hpp"

namespace sdtg {

namespace {

constexpr int kMaxBlockLocal = 2 * kMaxLocalDofs;

/// Global DOFs of a cell for one field, local index = a * components + c.
struct LocalDofs {
  std::array<int, kMaxBlockLocal> dof{};
  int n = 0;
};

LocalDofs local_dofs(const FESpace& sp, int cell) {
  LocalDofs out;
  const auto s = sp.cell_scalar_dofs(cell);
  const int nc = sp.components();
  out.n = sp.local_count() * nc;
  for (int a = 0; a < sp.local_count(); ++a) {
    for (int c = 0; c < nc; ++c) out.dof[a * nc + c] = sp.dof(s[a], c);
  }
  return out;
}

std::array<int, kMaxBlockLocal> local_rows(const FieldBlock& b, const LocalDofs& d) {
  std::array<int, kMaxBlockLocal> rows{};
  rows.fill(-1);
  for (int i = 0; i < d.n; ++i) {
    const int r = b.dof_to_row[d.dof[i]];
    rows[i] = r < 0 ? -1 : b.offset + r;
  }
  return rows;
}

FieldBlock make_block(std::shared_ptr<const FESpace> space, const AnalyticField& boundary, int offset) {
  if (!space) throw std::invalid_argument("assembly: null FE space");
  FieldBlock b;
  b.offset = offset;
  const int n = space->dof_count();
  b.dof_to_row.assign(static_cast<std::size_t>(n), 0);
  b.lifted = Eigen::VectorXd::Zero(n);
  const auto& dir = space->dirichlet_dofs();
  if (!dir.empty()) {
    if (boundary.components != space->components() || !boundary.value) {
      throw std::invalid_argument("assembly: boundary data does not match the space");
    }
    const auto& pts = space->scalar_dof_points();
    for (int d : dir) {
      b.dof_to_row[d] = -1;
      b.lifted[d] = boundary.value(pts[d / space->components()])[d % space->components()];
    }
  }
  for (int d = 0; d < n; ++d) {
    if (b.dof_to_row[d] < 0) continue;
    b.dof_to_row[d] = static_cast<int>(b.row_to_dof.size());
    b.row_to_dof.push_back(d);
  }
  b.space = std::move(space);
  return b;
}

/// Adds a local block; couplings to Dirichlet columns move to the rhs.
void scatter(AssembledSystem& sys, const FieldBlock& rb, const LocalDofs& rd, const FieldBlock& cb,
             const LocalDofs& cd, const double* local, int ld) {
  for (int i = 0; i < rd.n; ++i) {
    const int r = rb.dof_to_row[rd.dof[i]];
    if (r < 0) continue;
    const int row = rb.offset + r;
    for (int j = 0; j < cd.n; ++j) {
      const double v = local[i * ld + j];
      if (v == 0.0) continue;
      const int cdof = cd.dof[j];
      const int c = cb.dof_to_row[cdof];
      if (c < 0) {
        sys.rhs[row] -= v * cb.lifted[cdof];
      } else {
        sys.matrix.add(row, cb.offset + c, v);
      }
    }
  }
}

void scatter_vector(Eigen::VectorXd& rhs, const FieldBlock& b, const LocalDofs& d, const double* local) {
  for (int i = 0; i < d.n; ++i) {
    const int r = b.dof_to_row[d.dof[i]];
    if (r >= 0) rhs[b.offset + r] += local[i];
  }
}

void add_cell_pattern(PatternBuilder& pb, const std::vector<const FieldBlock*>& blocks, int cell) {
  std::vector<int> rows;
  rows.reserve(2 * kMaxBlockLocal);
  for (const auto* b : blocks) {
    const auto d = local_dofs(*b->space, cell);
    const auto r = local_rows(*b, d);
    rows.insert(rows.end(), r.begin(), r.begin() + d.n);
  }
  pb.add(rows, rows);
}

void check_stokes(const StokesData& data) {
  if (!data.velocity || !data.pressure) throw std::invalid_argument("assembly: missing Stokes spaces");
  if (data.velocity->components() != 2 || data.pressure->components() != 1) {
    throw std::invalid_argument("assembly: Stokes spaces need a vector velocity and a scalar pressure");
  }
  if (data.velocity->mesh_ptr() != data.pressure->mesh_ptr()) {
    throw std::invalid_argument("assembly: velocity and pressure must share a mesh");
  }
  if (data.velocity->mesh().region() != Region::Stokes) throw std::invalid_argument("assembly: not a Stokes mesh");
  if (data.force.components != 2) throw std::invalid_argument("assembly: Stokes force must be a vector field");
}

void check_darcy(const DarcyData& data) {
  if (!data.head || data.head->components() != 1) throw std::invalid_argument("assembly: missing scalar head space");
  if (data.head->mesh().region() != Region::Darcy) throw std::invalid_argument("assembly: not a Darcy mesh");
  if (data.source.components != 1) throw std::invalid_argument("assembly: Darcy source must be scalar");
}

/// Stokes cell and interface contributions into an already patterned system.
void fill_stokes(AssembledSystem& sys, const FieldBlock& ub, const FieldBlock& pb, const StokesData& data,
                 const PhysicalParams& params, double robin) {
  const auto& mesh = ub.space->mesh();
  const ElementKind uk = ub.space->kind();
  const int nl = local_dof_count(uk);
  const auto& stiff = triangle_rule_deg5();
  const auto& load = triangle_rule_deg6();
  constexpr int ld = kMaxBlockLocal + 3;

  for (int cell = 0; cell < static_cast<int>(mesh.cell_count()); ++cell) {
    const auto geom = cell_geometry(mesh, cell);
    const auto ud = local_dofs(*ub.space, cell);
    const auto pd = local_dofs(*pb.space, cell);
    std::array<double, ld * ld> a{};
    std::array<double, ld * 3> bt{};  // velocity rows, pressure cols
    std::array<double, 3 * ld> b{};   // pressure rows, velocity cols
    std::array<double, kMaxBlockLocal> f{};

    for (std::size_t q = 0; q < stiff.points.size(); ++q) {
      const auto& l = stiff.points[q];
      const double w = stiff.weights[q] * geom.area;
      const auto gr = basis_gradients(uk, l, geom);
      const auto psi = basis_values(ElementKind::P1, l);
      for (int i = 0; i < nl; ++i) {
        for (int j = 0; j < nl; ++j) {
          const double dot = gr[i][0] * gr[j][0] + gr[i][1] * gr[j][1];
          for (int c = 0; c < 2; ++c) {
            for (int d = 0; d < 2; ++d) {
              const double v = params.nu * ((c == d ? dot : 0.0) + gr[i][d] * gr[j][c]);
              a[(i * 2 + c) * ld + (j * 2 + d)] += w * v;
            }
          }
        }
        for (int k = 0; k < 3; ++k) {
          for (int c = 0; c < 2; ++c) {
            const double v = -w * gr[i][c] * psi[k];
            bt[(i * 2 + c) * 3 + k] += v;
            b[k * ld + (i * 2 + c)] += v;
          }
        }
      }
    }
    for (std::size_t q = 0; q < load.points.size(); ++q) {
      const auto& l = load.points[q];
      const double w = load.weights[q] * geom.area;
      const Vec2 fx = data.force.value(geom.map(l));
      const auto phi = basis_values(uk, l);
      for (int i = 0; i < nl; ++i) {
        for (int c = 0; c < 2; ++c) f[i * 2 + c] += w * fx[c] * phi[i];
      }
    }
    scatter(sys, ub, ud, ub, ud, a.data(), ld);
    scatter(sys, ub, ud, pb, pd, bt.data(), 3);
    scatter(sys, pb, pd, ub, ud, b.data(), ld);
    scatter_vector(sys.rhs, ub, ud, f.data());
  }

  const double beta = params.bjs_coefficient();
  const auto& seg = gauss_segment5();
  for (const auto& e : mesh.interface_edges()) {
    const auto ud = local_dofs(*ub.space, e.cell);
    const double len = e.xb - e.xa;
    std::array<double, kMaxBlockLocal * kMaxBlockLocal> m{};
    for (std::size_t q = 0; q < seg.points.size(); ++q) {
      const double w = seg.weights[q] * len;
      const auto phi = basis_values(uk, interface_barycentric(mesh, e, seg.points[q]));
      for (int i = 0; i < nl; ++i) {
        for (int j = 0; j < nl; ++j) {
          m[(i * 2) * kMaxBlockLocal + j * 2] += w * beta * phi[i] * phi[j];
          m[(i * 2 + 1) * kMaxBlockLocal + j * 2 + 1] += w * robin * phi[i] * phi[j];
        }
      }
    }
    scatter(sys, ub, ud, ub, ud, m.data(), kMaxBlockLocal);
  }
}

/// Darcy cell and interface contributions; stiffness and load carry `diffusion`.
void fill_darcy(AssembledSystem& sys, const FieldBlock& hb, const DarcyData& data, const PhysicalParams& params,
                double diffusion, double mass) {
  const auto& mesh = hb.space->mesh();
  const ElementKind hk = hb.space->kind();
  const int nl = local_dof_count(hk);
  const auto& stiff = triangle_rule_deg5();
  const auto& load = triangle_rule_deg6();

  for (int cell = 0; cell < static_cast<int>(mesh.cell_count()); ++cell) {
    const auto geom = cell_geometry(mesh, cell);
    const auto hd = local_dofs(*hb.space, cell);
    std::array<double, kMaxLocalDofs * kMaxLocalDofs> a{};
    std::array<double, kMaxLocalDofs> f{};
    for (std::size_t q = 0; q < stiff.points.size(); ++q) {
      const double w = stiff.weights[q] * geom.area * diffusion * params.k;
      const auto gr = basis_gradients(hk, stiff.points[q], geom);
      for (int i = 0; i < nl; ++i) {
        for (int j = 0; j < nl; ++j) a[i * kMaxLocalDofs + j] += w * (gr[i][0] * gr[j][0] + gr[i][1] * gr[j][1]);
      }
    }
    for (std::size_t q = 0; q < load.points.size(); ++q) {
      const auto& l = load.points[q];
      const double w = load.weights[q] * geom.area * diffusion;
      const double fx = data.source.value(geom.map(l))[0];
      const auto phi = basis_values(hk, l);
      for (int i = 0; i < nl; ++i) f[i] += w * fx * phi[i];
    }
    scatter(sys, hb, hd, hb, hd, a.data(), kMaxLocalDofs);
    scatter_vector(sys.rhs, hb, hd, f.data());
  }

  if (mass == 0.0) return;
  const auto& seg = gauss_segment5();
  for (const auto& e : mesh.interface_edges()) {
    const auto hd = local_dofs(*hb.space, e.cell);
    const double len = e.xb - e.xa;
    std::array<double, kMaxLocalDofs * kMaxLocalDofs> m{};
    for (std::size_t q = 0; q < seg.points.size(); ++q) {
      const double w = seg.weights[q] * len * mass;
      const auto phi = basis_values(hk, interface_barycentric(mesh, e, seg.points[q]));
      for (int i = 0; i < nl; ++i) {
        for (int j = 0; j < nl; ++j) m[i * kMaxLocalDofs + j] += w * phi[i] * phi[j];
      }
    }
    scatter(sys, hb, hd, hb, hd, m.data(), kMaxLocalDofs);
  }
}

/// sum over interface edges of  sign * <g, N_a> on component `component` of the block.
void add_interface_load(Eigen::VectorXd& rhs, const FieldBlock& b, int component, double sign,
                        const InterfaceFunction& g) {
  const auto& mesh = b.space->mesh();
  const ElementKind kind = b.space->kind();
  const int nl = local_dof_count(kind);
  const int nc = b.space->components();
  const auto& seg = gauss_segment5();
  for (const auto& e : mesh.interface_edges()) {
    const auto d = local_dofs(*b.space, e.cell);
    const double len = e.xb - e.xa;
    std::array<double, kMaxBlockLocal> f{};
    for (std::size_t q = 0; q < seg.points.size(); ++q) {
      const double t = seg.points[q];
      const double gx = g(e.xa + t * len);
      const double w = sign * seg.weights[q] * len * gx;
      const auto phi = basis_values(kind, interface_barycentric(mesh, e, t));
      for (int i = 0; i < nl; ++i) f[i * nc + component] += w * phi[i];
    }
    scatter_vector(rhs, b, d, f.data());
  }
}

AssembledSystem stokes_system(const StokesData& data, const PhysicalParams& params, double robin) {
  check_stokes(data);
  params.validate();
  AssembledSystem sys;
  sys.blocks.push_back(make_block(data.velocity, data.boundary, 0));
  sys.blocks.push_back(make_block(data.pressure, AnalyticField::zero(1), sys.blocks[0].size()));
  const int n = sys.blocks[0].size() + sys.blocks[1].size();
  PatternBuilder pattern(n, n);
  const std::vector<const FieldBlock*> both{&sys.blocks[0], &sys.blocks[1]};
  for (int c = 0; c < static_cast<int>(data.velocity->mesh().cell_count()); ++c) add_cell_pattern(pattern, both, c);
  sys.matrix = pattern.build();
  sys.rhs = Eigen::VectorXd::Zero(n);
  fill_stokes(sys, sys.blocks[0], sys.blocks[1], data, params, robin);
  return sys;
}

AssembledSystem darcy_system(const DarcyData& data, const PhysicalParams& params, double diffusion, double mass) {
  check_darcy(data);
  params.validate();
  AssembledSystem sys;
  sys.blocks.push_back(make_block(data.head, data.boundary, 0));
  const int n = sys.blocks[0].size();
  PatternBuilder pattern(n, n);
  const std::vector<const FieldBlock*> one{&sys.blocks[0]};
  for (int c = 0; c < static_cast<int>(data.head->mesh().cell_count()); ++c) add_cell_pattern(pattern, one, c);
  sys.matrix = pattern.build();
  sys.rhs = Eigen::VectorXd::Zero(n);
  fill_darcy(sys, sys.blocks[0], data, params, diffusion, mass);
  return sys;
}

}  // namespace

FEFunction AssembledSystem::field(std::size_t b, const Eigen::VectorXd& x) const {
  if (b >= blocks.size()) throw std::out_of_range("AssembledSystem::field: bad block index");
  if (x.size() != matrix.rows()) throw std::invalid_argument("AssembledSystem::field: solution size mismatch");
  const auto& blk = blocks[b];
  Eigen::VectorXd coeffs = blk.lifted;
  for (int r = 0; r < blk.size(); ++r) coeffs[blk.row_to_dof[r]] = x[blk.offset + r];
  return {blk.space, std::move(coeffs)};
}

Eigen::VectorXd AssembledSystem::pack(const std::vector<const FEFunction*>& fields) const {
  if (fields.size() != blocks.size()) throw std::invalid_argument("AssembledSystem::pack: one field per block");
  Eigen::VectorXd x = Eigen::VectorXd::Zero(matrix.rows());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& blk = blocks[b];
    if (fields[b]->space().dof_count() != blk.space->dof_count()) {
      throw std::invalid_argument("AssembledSystem::pack: field does not match block space");
    }
    for (int r = 0; r < blk.size(); ++r) x[blk.offset + r] = fields[b]->coeffs()[blk.row_to_dof[r]];
  }
  return x;
}

StokesOperator::StokesOperator(StokesData data, const PhysicalParams& params, double robin)
    : system_(stokes_system(data, params, robin)), robin_(robin) {
  if (!(robin >= 0.0)) throw std::invalid_argument("StokesOperator: Robin weight must be non-negative");
}

Eigen::VectorXd StokesOperator::interface_load(const InterfaceFunction& g) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(system_.matrix.rows());
  add_interface_load(out, system_.blocks[0], 1, -1.0, g);
  return out;
}

Eigen::VectorXd StokesOperator::rhs(const InterfaceFunction& g) const {
  Eigen::VectorXd out = system_.rhs;
  add_interface_load(out, system_.blocks[0], 1, -1.0, g);
  return out;
}

DarcyOperator::DarcyOperator(DarcyData data, const PhysicalParams& params, double diffusion, double mass)
    : system_(darcy_system(data, params, diffusion, mass)) {
  if (!(diffusion > 0.0) || !(mass >= 0.0)) throw std::invalid_argument("DarcyOperator: bad coefficients");
}

Eigen::VectorXd DarcyOperator::interface_load(const InterfaceFunction& g) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(system_.matrix.rows());
  add_interface_load(out, system_.blocks[0], 0, 1.0, g);
  return out;
}

Eigen::VectorXd DarcyOperator::rhs(const InterfaceFunction& g) const {
  Eigen::VectorXd out = system_.rhs;
  add_interface_load(out, system_.blocks[0], 0, 1.0, g);
  return out;
}

AssembledSystem assemble_stokes_robin(const StokesData& data, const PhysicalParams& params, double delta_S,
                                      const InterfaceFunction& g_S) {
  if (!(delta_S > 0.0)) throw std::invalid_argument("assemble_stokes_robin: delta_S must be positive");
  StokesOperator op(data, params, delta_S);
  AssembledSystem sys = op.system();
  sys.rhs = op.rhs(g_S);
  return sys;
}

AssembledSystem assemble_darcy_robin(const DarcyData& data, const PhysicalParams& params, double delta_D,
                                     const InterfaceFunction& g_D) {
  if (!(delta_D > 0.0)) throw std::invalid_argument("assemble_darcy_robin: delta_D must be positive");
  DarcyOperator op(data, params, delta_D, params.g);
  AssembledSystem sys = op.system();
  sys.rhs = op.rhs(g_D);
  return sys;
}

AssembledSystem assemble_stokes_tgddm2(const StokesData& data, const PhysicalParams& params, double delta_S,
                                       const InterfaceFunction& g_S,
                                       const InterfaceFunction& coarse_normal_velocity) {
  if (!(delta_S > 0.0)) throw std::invalid_argument("assemble_stokes_tgddm2: delta_S must be positive");
  StokesOperator op(data, params, 0.0);
  AssembledSystem sys = op.system();
  sys.rhs = op.rhs([&](double x) { return g_S(x) - delta_S * coarse_normal_velocity(x); });
  return sys;
}

AssembledSystem assemble_darcy_tgddm2(const DarcyData& data, const PhysicalParams& params, double delta_D,
                                      const InterfaceFunction& g_D, const InterfaceFunction& coarse_head) {
  if (!(delta_D > 0.0)) throw std::invalid_argument("assemble_darcy_tgddm2: delta_D must be positive");
  DarcyOperator op(data, params, delta_D, 0.0);
  AssembledSystem sys = op.system();
  const double g = params.g;
  sys.rhs = op.rhs([&](double x) { return g_D(x) - g * coarse_head(x); });
  return sys;
}

AssembledSystem assemble_monolithic(const StokesData& stokes, const DarcyData& darcy, const PhysicalParams& params) {
  check_stokes(stokes);
  check_darcy(darcy);
  params.validate();
  const auto& ms = stokes.velocity->mesh();
  const auto& md = darcy.head->mesh();
  const auto& es = ms.interface_edges();
  const auto& ed = md.interface_edges();
  if (es.empty() || es.size() != ed.size()) throw std::invalid_argument("assemble_monolithic: non-matching interfaces");
  for (std::size_t i = 0; i < es.size(); ++i) {
    if (es[i].xa != ed[i].xa || es[i].xb != ed[i].xb) {
      throw std::invalid_argument("assemble_monolithic: non-matching interface edges");
    }
  }

  AssembledSystem sys;
  sys.blocks.push_back(make_block(stokes.velocity, stokes.boundary, 0));
  sys.blocks.push_back(make_block(stokes.pressure, AnalyticField::zero(1), sys.blocks[0].size()));
  sys.blocks.push_back(make_block(darcy.head, darcy.boundary, sys.blocks[0].size() + sys.blocks[1].size()));
  const auto& ub = sys.blocks[0];
  const auto& pb = sys.blocks[1];
  const auto& hb = sys.blocks[2];
  const int n = hb.offset + hb.size();

  PatternBuilder pattern(n, n);
  const std::vector<const FieldBlock*> sblocks{&ub, &pb};
  const std::vector<const FieldBlock*> dblocks{&hb};
  for (int c = 0; c < static_cast<int>(ms.cell_count()); ++c) add_cell_pattern(pattern, sblocks, c);
  for (int c = 0; c < static_cast<int>(md.cell_count()); ++c) add_cell_pattern(pattern, dblocks, c);
  for (std::size_t i = 0; i < es.size(); ++i) {
    const auto ud = local_dofs(*ub.space, es[i].cell);
    const auto hd = local_dofs(*hb.space, ed[i].cell);
    const auto ur = local_rows(ub, ud);
    const auto hr = local_rows(hb, hd);
    const std::span<const int> us(ur.data(), static_cast<std::size_t>(ud.n));
    const std::span<const int> hs(hr.data(), static_cast<std::size_t>(hd.n));
    pattern.add(us, hs);
    pattern.add(hs, us);
  }
  sys.matrix = pattern.build();
  sys.rhs = Eigen::VectorXd::Zero(n);

  fill_stokes(sys, ub, pb, stokes, params, 0.0);
  fill_darcy(sys, hb, darcy, params, params.g, 0.0);
  const double g = params.g;
  const double z = params.z;
  if (z != 0.0) add_interface_load(sys.rhs, ub, 1, -1.0, [g, z](double) { return g * z; });

  const ElementKind uk = ub.space->kind();
  const ElementKind hk = hb.space->kind();
  const int nu = local_dof_count(uk);
  const int nh = local_dof_count(hk);
  const auto& seg = gauss_segment5();
  for (std::size_t e = 0; e < es.size(); ++e) {
    const auto ud = local_dofs(*ub.space, es[e].cell);
    const auto hd = local_dofs(*hb.space, ed[e].cell);
    const double len = es[e].xb - es[e].xa;
    std::array<double, kMaxBlockLocal * kMaxLocalDofs> sd{};  // velocity rows, head cols
    std::array<double, kMaxLocalDofs * kMaxBlockLocal> ds{};  // head rows, velocity cols
    for (std::size_t q = 0; q < seg.points.size(); ++q) {
      const double t = seg.points[q];
      const double w = g * seg.weights[q] * len;
      const auto pu = basis_values(uk, interface_barycentric(ms, es[e], t));
      const auto ph = basis_values(hk, interface_barycentric(md, ed[e], t));
      for (int i = 0; i < nu; ++i) {
        for (int j = 0; j < nh; ++j) {
          sd[(i * 2 + 1) * kMaxLocalDofs + j] -= w * pu[i] * ph[j];
          ds[j * kMaxBlockLocal + i * 2 + 1] += w * pu[i] * ph[j];
        }
      }
    }
    scatter(sys, ub, ud, hb, hd, sd.data(), kMaxLocalDofs);
    scatter(sys, hb, hd, ub, ud, ds.data(), kMaxBlockLocal);
  }
  return sys;
}

Eigen::VectorXd discrete_divergence(const FEFunction& u, const FESpace& pressure) {
  if (u.space().components() != 2 || pressure.components() != 1 || u.space().mesh_ptr() != pressure.mesh_ptr()) {
    throw std::invalid_argument("discrete_divergence: incompatible spaces");
  }
  const auto& mesh = pressure.mesh();
  const auto& rule = triangle_rule_deg5();
  const int nl = pressure.local_count();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(pressure.dof_count());
  for (int c = 0; c < static_cast<int>(mesh.cell_count()); ++c) {
    const auto geom = cell_geometry(mesh, c);
    const auto s = pressure.cell_scalar_dofs(c);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& l = rule.points[q];
      const double w = rule.weights[q] * geom.area;
      const Mat2 gu = u.gradient(c, l, geom);
      const double div = gu[0][0] + gu[1][1];
      const auto psi = basis_values(pressure.kind(), l);
      for (int k = 0; k < nl; ++k) out[s[k]] += w * div * psi[k];
    }
  }
  return out;
}

SparseMatrix mass_matrix(const FESpace& space) {
  const auto& mesh = space.mesh();
  const int n = space.dof_count();
  const int nc = space.components();
  const int nl = space.local_count();
  PatternBuilder pattern(n, n);
  for (int c = 0; c < static_cast<int>(mesh.cell_count()); ++c) {
    const auto d = local_dofs(space, c);
    pattern.add(std::span<const int>(d.dof.data(), static_cast<std::size_t>(d.n)),
                std::span<const int>(d.dof.data(), static_cast<std::size_t>(d.n)));
  }
  SparseMatrix m = pattern.build();
  const auto& rule = triangle_rule_deg6();
  for (int c = 0; c < static_cast<int>(mesh.cell_count()); ++c) {
    const auto geom = cell_geometry(mesh, c);
    const auto d = local_dofs(space, c);
    std::array<double, kMaxLocalDofs * kMaxLocalDofs> local{};
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double w = rule.weights[q] * geom.area;
      const auto phi = basis_values(space.kind(), rule.points[q]);
      for (int i = 0; i < nl; ++i) {
        for (int j = 0; j < nl; ++j) local[i * kMaxLocalDofs + j] += w * phi[i] * phi[j];
      }
    }
    for (int i = 0; i < nl; ++i) {
      for (int j = 0; j < nl; ++j) {
        for (int k = 0; k < nc; ++k) m.add(d.dof[i * nc + k], d.dof[j * nc + k], local[i * kMaxLocalDofs + j]);
      }
    }
  }
  return m;
}

}  // namespace sdtg
