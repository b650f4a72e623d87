#pragma once

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <vector>

#include "sdtg/fe_space.hpp"
#include "sdtg/linalg.hpp"
#include "sdtg/params.hpp"

namespace sdtg {

/// Function of x on the interface y = 0 (TraceFunction converts implicitly).
using InterfaceFunction = std::function<double(double)>;

/// Unknowns of one FE field inside an assembled system. Dirichlet DOFs are
/// eliminated; their prescribed values live in `lifted`.
struct FieldBlock {
  std::shared_ptr<const FESpace> space;
  std::vector<int> dof_to_row;  ///< block-local row, -1 for Dirichlet DOFs
  std::vector<int> row_to_dof;
  Eigen::VectorXd lifted;       ///< Dirichlet values, zero on free DOFs
  int offset = 0;               ///< first row of the block in the system

  [[nodiscard]] int size() const noexcept { return static_cast<int>(row_to_dof.size()); }
};

struct AssembledSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
  std::vector<FieldBlock> blocks;

  /// FE function of block `b` from a solution vector (Dirichlet values restored).
  [[nodiscard]] FEFunction field(std::size_t b, const Eigen::VectorXd& x) const;
  /// Solution-vector layout of the given fields, one per block in order.
  [[nodiscard]] Eigen::VectorXd pack(const std::vector<const FEFunction*>& fields) const;
};

/// Stokes data: velocity/pressure spaces, body force and velocity boundary values on Gamma_S.
struct StokesData {
  std::shared_ptr<const FESpace> velocity;
  std::shared_ptr<const FESpace> pressure;
  AnalyticField force = AnalyticField::zero(2);
  AnalyticField boundary = AnalyticField::zero(2);
};

/// Darcy data: head space, source term and head boundary values on Gamma_D.
struct DarcyData {
  std::shared_ptr<const FESpace> head;
  AnalyticField source = AnalyticField::zero(1);
  AnalyticField boundary = AnalyticField::zero(1);
};

/// Stokes saddle-point operator
///   a_S(u,v) - b_S(v,p) + robin <u.n, v.n> + beta <u.t, v.t>,   -b_S(u,q)
/// with the interface load kept separate so repeated solves rebuild only
/// <g, v.n_S>. Blocks: 0 velocity, 1 pressure.
class StokesOperator {
 public:
  StokesOperator(StokesData data, const PhysicalParams& params, double robin);

  [[nodiscard]] const AssembledSystem& system() const noexcept { return system_; }
  [[nodiscard]] double robin() const noexcept { return robin_; }
  /// system().rhs + <g, v.n_S>.
  [[nodiscard]] Eigen::VectorXd rhs(const InterfaceFunction& g) const;
  /// <g, v.n_S> over the system rows.
  [[nodiscard]] Eigen::VectorXd interface_load(const InterfaceFunction& g) const;

  [[nodiscard]] FEFunction velocity(const Eigen::VectorXd& x) const { return system_.field(0, x); }
  [[nodiscard]] FEFunction pressure(const Eigen::VectorXd& x) const { return system_.field(1, x); }

 private:
  AssembledSystem system_;
  double robin_;
};

/// Darcy operator  diffusion * k (grad phi, grad psi) + mass <phi, psi>_Gamma
/// with volume load  diffusion * (f_D, psi). Block 0 is the head.
class DarcyOperator {
 public:
  DarcyOperator(DarcyData data, const PhysicalParams& params, double diffusion, double mass);

  [[nodiscard]] const AssembledSystem& system() const noexcept { return system_; }
  /// system().rhs + <g, psi>.
  [[nodiscard]] Eigen::VectorXd rhs(const InterfaceFunction& g) const;
  [[nodiscard]] Eigen::VectorXd interface_load(const InterfaceFunction& g) const;

  [[nodiscard]] FEFunction head(const Eigen::VectorXd& x) const { return system_.field(0, x); }

 private:
  AssembledSystem system_;
};

/// Stokes Robin subproblem with datum g_S.
[[nodiscard]] AssembledSystem assemble_stokes_robin(const StokesData& data, const PhysicalParams& params,
                                                    double delta_S, const InterfaceFunction& g_S);

/// Darcy Robin subproblem with datum g_D.
[[nodiscard]] AssembledSystem assemble_darcy_robin(const DarcyData& data, const PhysicalParams& params,
                                                   double delta_D, const InterfaceFunction& g_D);

/// Fine Stokes step of TGDDM2: no Robin term in the matrix; the load is
/// <g_S,H - delta_S u_H.n_S, v.n_S>, with `coarse_normal_velocity` = u_H.n_S.
[[nodiscard]] AssembledSystem assemble_stokes_tgddm2(const StokesData& data, const PhysicalParams& params,
                                                     double delta_S, const InterfaceFunction& g_S,
                                                     const InterfaceFunction& coarse_normal_velocity);

/// Fine Darcy step of TGDDM2: matrix delta_D a_D; load <g_D,H - g phi_H, psi> + delta_D (f_D, psi).
[[nodiscard]] AssembledSystem assemble_darcy_tgddm2(const DarcyData& data, const PhysicalParams& params,
                                                    double delta_D, const InterfaceFunction& g_D,
                                                    const InterfaceFunction& coarse_head);

/// Coupled system with blocks velocity, pressure, head. Darcy rows are scaled
/// by g so the interface coupling blocks are skew. Interface edges of the two
/// meshes must coincide; otherwise std::invalid_argument.
[[nodiscard]] AssembledSystem assemble_monolithic(const StokesData& stokes, const DarcyData& darcy,
                                                  const PhysicalParams& params);

/// L2 mass matrix over all DOFs of a space (components uncoupled).
[[nodiscard]] SparseMatrix mass_matrix(const FESpace& space);

/// Entries (q_k, div u_h) for every pressure basis function q_k.
[[nodiscard]] Eigen::VectorXd discrete_divergence(const FEFunction& u, const FESpace& pressure);

}  // namespace sdtg
