#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sdtg/assembly.hpp"
#include "sdtg/fe_space.hpp"
#include "sdtg/mesh.hpp"
#include "sdtg/params.hpp"
#include "sdtg/trace.hpp"

namespace sdtg {

/// Stokes/Darcy element triple: P2-P1-P2 (Taylor-Hood) or P1b-P1-P1 (MINI).
enum class ElementPair : std::uint8_t { TaylorHood, Mini };

[[nodiscard]] std::string_view to_string(ElementPair pair);

/// Meshes, spaces and interface partition for one mesh size.
struct Discretization {
  ElementPair pair = ElementPair::TaylorHood;
  double size = 0.0;
  CoupledMeshes meshes;
  std::shared_ptr<const FESpace> velocity;
  std::shared_ptr<const FESpace> pressure;
  std::shared_ptr<const FESpace> head;
  InterfacePartition partition;
  TraceKind trace = TraceKind::P2;
};

/// Builds both subdomain meshes with size `size` and the spaces of `pair`.
[[nodiscard]] Discretization discretize(double size, ElementPair pair);

/// Body forces and Dirichlet data of the coupled problem.
struct ProblemData {
  AnalyticField stokes_force = AnalyticField::zero(2);
  AnalyticField velocity_boundary = AnalyticField::zero(2);
  AnalyticField darcy_source = AnalyticField::zero(1);
  AnalyticField head_boundary = AnalyticField::zero(1);
};

[[nodiscard]] StokesData stokes_data(const Discretization& disc, const ProblemData& data);
[[nodiscard]] DarcyData darcy_data(const Discretization& disc, const ProblemData& data);

/// Iterate of DDM-Chen: the Robin data g^n and the fields solved with it.
struct DdmState {
  int n = 0;
  TraceFunction gS;
  TraceFunction gD;
  FEFunction uS;
  FEFunction pS;
  FEFunction phiD;
};

struct DdmReport {
  int N = 0;                   ///< number of increments computed (subdomain solves minus one)
  std::vector<double> deltas;  ///< combined L2 increment per iteration
  bool converged = false;
  bool diverged = false;       ///< aborted after sustained increment growth
  double wall_time = 0.0;      ///< assembly + factorization + iteration, seconds
  double divergence_residual = 0.0;  ///< max over Stokes solves of |B u_h|_inf / |u_h|
  std::string message;
};

struct DdmOptions {
  double tol = 1e-6;
  int max_iter = 1000;
  int divergence_window = 50;  ///< consecutive increment growths before aborting
  bool concurrent = false;     ///< solve Stokes and Darcy on separate threads
  std::optional<TraceFunction> gS0;
  std::optional<TraceFunction> gD0;
};

/// Robin data update of DDM-Chen, applied nodally on the interface nodes:
///   gS' = (dS/dD) gD - (1 + dS/dD) g phi + g z
///   gD' = -gS + (dS + dD) u.n_S + g z
[[nodiscard]] std::pair<TraceFunction, TraceFunction> update_robin(const DdmState& state, const PhysicalParams& pp,
                                                                   const RobinParams& rp);

/// Compatibility pair (gS, gD) = (dS u.n - g phi + g z, dD u.n + g phi), nodal.
[[nodiscard]] std::pair<TraceFunction, TraceFunction> compatible_robin_data(const TraceFunction& normal_velocity,
                                                                            const TraceFunction& head,
                                                                            const PhysicalParams& pp,
                                                                            const RobinParams& rp);

/// sqrt(|u' - u|^2 + |phi' - phi|^2) in L2, the DDM increment.
[[nodiscard]] double increment_norm(const DdmState& prev, const DdmState& cur);

/// True when increment_norm(prev, cur) <= tol.
[[nodiscard]] bool stopping_check(const DdmState& prev, const DdmState& cur, double tol);

/// DDM-Chen on one discretization. Zero initial data unless given in `opt`.
/// On non-convergence the last iterate is returned with converged = false.
[[nodiscard]] std::pair<DdmState, DdmReport> ddm_chen(const Discretization& disc, const PhysicalParams& pp,
                                                      const RobinParams& rp, const ProblemData& data,
                                                      const DdmOptions& opt = {});

/// Fine-grid solution of a two-grid method.
struct FineFields {
  FEFunction uS;
  FEFunction pS;
  FEFunction phiD;
};

struct FineReport {
  double wall_time = 0.0;
  double divergence_residual = 0.0;
};

/// Coarse data handed to a fine step: the Robin data and the field traces on the coarse interface.
struct CoarseTraces {
  TraceFunction gS;
  TraceFunction gD;
  TraceFunction normal_velocity;
  TraceFunction head;
};

[[nodiscard]] CoarseTraces coarse_traces(const DdmState& coarse, const Discretization& coarse_disc);

/// TGDDM1 fine step: Robin subproblems on the fine grid fed with gS_H, gD_H.
[[nodiscard]] FineFields tgddm1_fine(const Discretization& fine, const CoarseTraces& coarse, const PhysicalParams& pp,
                                     const RobinParams& rp, const ProblemData& data, bool concurrent = false,
                                     FineReport* report = nullptr);

/// TGDDM2 fine step: Robin terms moved to the load using coarse traces.
[[nodiscard]] FineFields tgddm2_fine(const Discretization& fine, const CoarseTraces& coarse, const PhysicalParams& pp,
                                     const RobinParams& rp, const ProblemData& data, bool concurrent = false,
                                     FineReport* report = nullptr);

/// CTG fine step: Stokes with <-g(phi_H - z), v.n_S>, Darcy a_D = (f_D, psi) + <u_H.n_S, psi>.
[[nodiscard]] FineFields ctg_fine(const Discretization& fine, const CoarseTraces& coarse, const PhysicalParams& pp,
                                  const ProblemData& data, bool concurrent = false, FineReport* report = nullptr);

/// Monolithic coupled solve on one discretization.
struct MonolithicSolution {
  FEFunction uS;
  FEFunction pS;
  FEFunction phiD;
  double wall_time = 0.0;
  double divergence_residual = 0.0;
};

[[nodiscard]] MonolithicSolution solve_monolithic(const Discretization& disc, const PhysicalParams& pp,
                                                  const ProblemData& data);

struct TwoGridResult {
  Discretization coarse_disc;
  Discretization fine_disc;
  DdmState coarse;             ///< coarse fields and Robin data (CTG: compatibility data, n = 0)
  DdmReport coarse_report;     ///< CTG: N = 0, wall_time of the monolithic solve
  FineFields fine;
  FineReport fine_report;

  [[nodiscard]] double wall_time() const noexcept { return coarse_report.wall_time + fine_report.wall_time; }
};

/// Two-grid runs; 0 < h <= H <= 1.
[[nodiscard]] TwoGridResult tgddm1(double H, double h, ElementPair pair, const PhysicalParams& pp,
                                   const RobinParams& rp, const ProblemData& data, const DdmOptions& opt = {});
[[nodiscard]] TwoGridResult tgddm2(double H, double h, ElementPair pair, const PhysicalParams& pp,
                                   const RobinParams& rp, const ProblemData& data, const DdmOptions& opt = {});
[[nodiscard]] TwoGridResult ctg(double H, double h, ElementPair pair, const PhysicalParams& pp,
                                const ProblemData& data, bool concurrent = false);

}  // namespace sdtg
