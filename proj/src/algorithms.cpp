#include "sdtg/algorithms.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <stdexcept>

#include "sdtg/errors.hpp"
#include "sdtg/linalg.hpp"
#include "sdtg/norms.hpp"

namespace sdtg {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

/// |B u_h|_inf / |u_h| read off the pressure rows of A x - b (no pressure DOF is eliminated).
double divergence_residual(const AssembledSystem& sys, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
  const auto& ub = sys.blocks.at(0);
  const auto& pb = sys.blocks.at(1);
  const auto ptr = sys.matrix.row_ptr();
  const auto idx = sys.matrix.col_idx();
  const auto val = sys.matrix.values();
  double rmax = 0.0;
  for (int r = pb.offset; r < pb.offset + pb.size(); ++r) {
    double s = -b[r];
    for (int k = ptr[r]; k < ptr[r + 1]; ++k) s += val[k] * x[idx[k]];
    rmax = std::max(rmax, std::abs(s));
  }
  Eigen::VectorXd u = ub.lifted;
  for (int r = 0; r < ub.size(); ++r) u[ub.row_to_dof[r]] = x[ub.offset + r];
  const double unorm = u.norm();
  return unorm > 0.0 ? rmax / unorm : rmax;
}

/// Runs `a` and `b`, on two threads when `concurrent`.
template <class A, class B>
void run_pair(bool concurrent, A&& a, B&& b) {
  if (!concurrent) {
    a();
    b();
    return;
  }
  auto fut = std::async(std::launch::async, std::forward<B>(b));
  try {
    a();
  } catch (...) {
    fut.wait();
    throw;
  }
  fut.get();
}

void check_sizes(double H, double h) {
  if (!(h > 0.0) || !(h <= H) || !(H <= 1.0)) throw std::invalid_argument("two-grid: need 0 < h <= H <= 1");
}

void check_same_trace_layout(const TraceFunction& a, const TraceFunction& b, const char* what) {
  if (a.kind() != b.kind() || !(a.partition() == b.partition())) {
    throw std::invalid_argument(std::string(what) + ": traces on different partitions or degrees");
  }
}

struct FineSolve {
  Eigen::VectorXd x;
  double divergence = 0.0;
};

FineSolve solve_stokes(const StokesOperator& op, const InterfaceFunction& g) {
  const Eigen::VectorXd b = op.rhs(g);
  const DirectSolver lu(op.system().matrix, DirectSolver::Method::LU);
  FineSolve out;
  out.x = lu.solve(b);
  out.divergence = divergence_residual(op.system(), out.x, b);
  return out;
}

Eigen::VectorXd solve_darcy(const DarcyOperator& op, const InterfaceFunction& g) {
  const Eigen::VectorXd b = op.rhs(g);
  const DirectSolver llt(op.system().matrix, DirectSolver::Method::Cholesky);
  return llt.solve(b);
}

/// Stokes operator with Robin weight `robin` and load g; Darcy operator
/// (diffusion, mass) with load gd. Used by every fine step.
FineFields fine_pair(const Discretization& fine, const PhysicalParams& pp, const ProblemData& data, double robin,
                     const InterfaceFunction& gs, double diffusion, double mass, const InterfaceFunction& gd,
                     bool concurrent, FineReport* report) {
  const auto t0 = Clock::now();
  std::optional<FEFunction> u;
  std::optional<FEFunction> p;
  std::optional<FEFunction> phi;
  double div = 0.0;
  run_pair(
      concurrent,
      [&] {
        const StokesOperator op(stokes_data(fine, data), pp, robin);
        const auto s = solve_stokes(op, gs);
        u.emplace(op.velocity(s.x));
        p.emplace(op.pressure(s.x));
        div = s.divergence;
      },
      [&] {
        const DarcyOperator op(darcy_data(fine, data), pp, diffusion, mass);
        phi.emplace(op.head(solve_darcy(op, gd)));
      });
  if (report) {
    report->wall_time = seconds_since(t0);
    report->divergence_residual = div;
  }
  return {std::move(*u), std::move(*p), std::move(*phi)};
}

}  // namespace

std::string_view to_string(ElementPair pair) {
  switch (pair) {
    case ElementPair::TaylorHood: return "P2-P1-P2";
    case ElementPair::Mini: return "P1b-P1-P1";
  }
  return "?";
}

Discretization discretize(double size, ElementPair pair) {
  Discretization d;
  d.pair = pair;
  d.size = size;
  d.meshes = build_coupled_meshes(size);
  const ElementKind uk = pair == ElementPair::TaylorHood ? ElementKind::P2 : ElementKind::P1Bubble;
  const ElementKind hk = pair == ElementPair::TaylorHood ? ElementKind::P2 : ElementKind::P1;
  d.velocity = std::make_shared<FESpace>(d.meshes.stokes, uk, 2, std::vector{BoundaryTag::GammaS});
  d.pressure = std::make_shared<FESpace>(d.meshes.stokes, ElementKind::P1, 1, std::vector<BoundaryTag>{});
  d.head = std::make_shared<FESpace>(d.meshes.darcy, hk, 1, std::vector{BoundaryTag::GammaD});
  d.partition = interface_partition(*d.meshes.stokes);
  if (!(interface_partition(*d.meshes.darcy) == d.partition)) {
    throw InvalidMesh("discretize: subdomain interfaces do not match");
  }
  d.trace = trace_kind_for(uk);
  return d;
}

StokesData stokes_data(const Discretization& disc, const ProblemData& data) {
  return {disc.velocity, disc.pressure, data.stokes_force, data.velocity_boundary};
}

DarcyData darcy_data(const Discretization& disc, const ProblemData& data) {
  return {disc.head, data.darcy_source, data.head_boundary};
}

std::pair<TraceFunction, TraceFunction> update_robin(const DdmState& state, const PhysicalParams& pp,
                                                     const RobinParams& rp) {
  const auto& part = state.gS.partition();
  const TraceFunction un = trace_normal_velocity(state.uS, part);
  const TraceFunction phi = trace_scalar(state.phiD, part);
  check_same_trace_layout(state.gS, state.gD, "update_robin");
  check_same_trace_layout(state.gS, un, "update_robin");
  const double r = rp.delta_S / rp.delta_D;
  const double gz = pp.g * pp.z;
  TraceFunction gs(part, state.gS.kind());
  TraceFunction gd(part, state.gS.kind());
  for (std::size_t i = 0; i < gs.node_count(); ++i) {
    gs.values()[i] = r * state.gD.values()[i] - (1.0 + r) * pp.g * phi.values()[i] + gz;
    gd.values()[i] = -state.gS.values()[i] + (rp.delta_S + rp.delta_D) * un.values()[i] + gz;
  }
  return {std::move(gs), std::move(gd)};
}

std::pair<TraceFunction, TraceFunction> compatible_robin_data(const TraceFunction& normal_velocity,
                                                              const TraceFunction& head, const PhysicalParams& pp,
                                                              const RobinParams& rp) {
  check_same_trace_layout(normal_velocity, head, "compatible_robin_data");
  TraceFunction gs(normal_velocity.partition(), normal_velocity.kind());
  TraceFunction gd(normal_velocity.partition(), normal_velocity.kind());
  for (std::size_t i = 0; i < gs.node_count(); ++i) {
    const double un = normal_velocity.values()[i];
    const double phi = head.values()[i];
    gs.values()[i] = rp.delta_S * un - pp.g * phi + pp.g * pp.z;
    gd.values()[i] = rp.delta_D * un + pp.g * phi;
  }
  return {std::move(gs), std::move(gd)};
}

double increment_norm(const DdmState& prev, const DdmState& cur) {
  const double du = l2_distance(cur.uS, prev.uS);
  const double dphi = l2_distance(cur.phiD, prev.phiD);
  return std::sqrt(du * du + dphi * dphi);
}

bool stopping_check(const DdmState& prev, const DdmState& cur, double tol) { return increment_norm(prev, cur) <= tol; }

std::pair<DdmState, DdmReport> ddm_chen(const Discretization& disc, const PhysicalParams& pp, const RobinParams& rp,
                                        const ProblemData& data, const DdmOptions& opt) {
  if (!(opt.tol > 0.0)) throw std::invalid_argument("ddm_chen: tol must be positive");
  if (opt.max_iter < 1) throw std::invalid_argument("ddm_chen: max_iter must be at least 1");
  pp.validate();
  rp.validate();
  const auto t0 = Clock::now();

  TraceFunction gS = opt.gS0 ? *opt.gS0 : TraceFunction(disc.partition, disc.trace);
  TraceFunction gD = opt.gD0 ? *opt.gD0 : TraceFunction(disc.partition, disc.trace);
  check_same_trace_layout(gS, TraceFunction(disc.partition, disc.trace), "ddm_chen");
  check_same_trace_layout(gD, gS, "ddm_chen");

  const StokesOperator sop(stokes_data(disc, data), pp, rp.delta_S);
  const DarcyOperator dop(darcy_data(disc, data), pp, rp.delta_D, pp.g);
  std::optional<DirectSolver> lu;
  std::optional<DirectSolver> llt;
  run_pair(
      opt.concurrent, [&] { lu.emplace(sop.system().matrix, DirectSolver::Method::LU); },
      [&] { llt.emplace(dop.system().matrix, DirectSolver::Method::Cholesky); });
  const SparseMatrix mu = mass_matrix(*disc.velocity);
  const SparseMatrix mphi = mass_matrix(*disc.head);

  DdmReport report;
  std::optional<DdmState> state;
  int growth = 0;
  for (int it = 0;; ++it) {
    Eigen::VectorXd xs;
    Eigen::VectorXd xd;
    Eigen::VectorXd bs;
    run_pair(
        opt.concurrent,
        [&] {
          bs = sop.rhs(gS);
          xs = lu->solve(bs);
        },
        [&] { xd = llt->solve(dop.rhs(gD)); });
    report.divergence_residual = std::max(report.divergence_residual, divergence_residual(sop.system(), xs, bs));
    DdmState next{it, gS, gD, sop.velocity(xs), sop.pressure(xs), dop.head(xd)};

    if (state) {
      const Eigen::VectorXd du = next.uS.coeffs() - state->uS.coeffs();
      const Eigen::VectorXd dphi = next.phiD.coeffs() - state->phiD.coeffs();
      const double delta = std::sqrt(std::max(0.0, du.dot(mu * du)) + std::max(0.0, dphi.dot(mphi * dphi)));
      if (!report.deltas.empty() && delta > report.deltas.back()) {
        ++growth;
      } else {
        growth = 0;
      }
      report.deltas.push_back(delta);
      if (delta <= opt.tol) {
        report.converged = true;
      } else if (growth >= opt.divergence_window) {
        report.diverged = true;
        report.message =
            "increment grew for " + std::to_string(growth) + " consecutive iterations (last " + sci(delta) + ")";
      } else if (static_cast<int>(report.deltas.size()) >= opt.max_iter) {
        report.message = "max_iter reached with increment " + sci(delta);
      }
    }
    state.emplace(std::move(next));
    if (report.converged || report.diverged || !report.message.empty()) break;

    auto [gs_next, gd_next] = update_robin(*state, pp, rp);
    gS = std::move(gs_next);
    gD = std::move(gd_next);
  }
  report.N = static_cast<int>(report.deltas.size());
  report.wall_time = seconds_since(t0);
  return {std::move(*state), std::move(report)};
}

CoarseTraces coarse_traces(const DdmState& coarse, const Discretization& coarse_disc) {
  return {coarse.gS, coarse.gD, trace_normal_velocity(coarse.uS, coarse_disc.partition),
          trace_scalar(coarse.phiD, coarse_disc.partition)};
}

FineFields tgddm1_fine(const Discretization& fine, const CoarseTraces& coarse, const PhysicalParams& pp,
                       const RobinParams& rp, const ProblemData& data, bool concurrent, FineReport* report) {
  rp.validate();
  return fine_pair(fine, pp, data, rp.delta_S, coarse.gS, rp.delta_D, pp.g, coarse.gD, concurrent, report);
}

FineFields tgddm2_fine(const Discretization& fine, const CoarseTraces& coarse, const PhysicalParams& pp,
                       const RobinParams& rp, const ProblemData& data, bool concurrent, FineReport* report) {
  rp.validate();
  const double ds = rp.delta_S;
  const double g = pp.g;
  const auto gs = [&](double x) { return coarse.gS(x) - ds * coarse.normal_velocity(x); };
  const auto gd = [&](double x) { return coarse.gD(x) - g * coarse.head(x); };
  return fine_pair(fine, pp, data, 0.0, gs, rp.delta_D, 0.0, gd, concurrent, report);
}

FineFields ctg_fine(const Discretization& fine, const CoarseTraces& coarse, const PhysicalParams& pp,
                    const ProblemData& data, bool concurrent, FineReport* report) {
  const double g = pp.g;
  const double z = pp.z;
  const auto gs = [&](double x) { return -g * (coarse.head(x) - z); };
  const auto gd = [&](double x) { return coarse.normal_velocity(x); };
  return fine_pair(fine, pp, data, 0.0, gs, 1.0, 0.0, gd, concurrent, report);
}

MonolithicSolution solve_monolithic(const Discretization& disc, const PhysicalParams& pp, const ProblemData& data) {
  const auto t0 = Clock::now();
  const AssembledSystem sys = assemble_monolithic(stokes_data(disc, data), darcy_data(disc, data), pp);
  Eigen::VectorXd x;
  {
    const DirectSolver lu(sys.matrix, DirectSolver::Method::LU);
    x = lu.solve(sys.rhs);
  }
  MonolithicSolution out{sys.field(0, x), sys.field(1, x), sys.field(2, x), 0.0, 0.0};
  out.wall_time = seconds_since(t0);
  out.divergence_residual = divergence_residual(sys, x, sys.rhs);
  return out;
}

TwoGridResult tgddm1(double H, double h, ElementPair pair, const PhysicalParams& pp, const RobinParams& rp,
                     const ProblemData& data, const DdmOptions& opt) {
  check_sizes(H, h);
  Discretization coarse = discretize(H, pair);
  auto [state, report] = ddm_chen(coarse, pp, rp, data, opt);
  const CoarseTraces traces = coarse_traces(state, coarse);
  Discretization fine = discretize(h, pair);
  FineReport fine_report;
  FineFields f = tgddm1_fine(fine, traces, pp, rp, data, opt.concurrent, &fine_report);
  return {std::move(coarse), std::move(fine), std::move(state), std::move(report), std::move(f), fine_report};
}

TwoGridResult tgddm2(double H, double h, ElementPair pair, const PhysicalParams& pp, const RobinParams& rp,
                     const ProblemData& data, const DdmOptions& opt) {
  check_sizes(H, h);
  Discretization coarse = discretize(H, pair);
  auto [state, report] = ddm_chen(coarse, pp, rp, data, opt);
  const CoarseTraces traces = coarse_traces(state, coarse);
  Discretization fine = discretize(h, pair);
  FineReport fine_report;
  FineFields f = tgddm2_fine(fine, traces, pp, rp, data, opt.concurrent, &fine_report);
  return {std::move(coarse), std::move(fine), std::move(state), std::move(report), std::move(f), fine_report};
}

TwoGridResult ctg(double H, double h, ElementPair pair, const PhysicalParams& pp, const ProblemData& data,
                  bool concurrent) {
  check_sizes(H, h);
  Discretization coarse = discretize(H, pair);
  MonolithicSolution mono = solve_monolithic(coarse, pp, data);
  const TraceFunction un = trace_normal_velocity(mono.uS, coarse.partition);
  const TraceFunction phi = trace_scalar(mono.phiD, coarse.partition);
  auto [gs, gd] = compatible_robin_data(un, phi, pp, RobinParams{1.0, 1.0});
  DdmReport report;
  report.converged = true;
  report.wall_time = mono.wall_time;
  report.divergence_residual = mono.divergence_residual;
  DdmState state{0, std::move(gs), std::move(gd), std::move(mono.uS), std::move(mono.pS), std::move(mono.phiD)};
  const CoarseTraces traces{state.gS, state.gD, un, phi};
  Discretization fine = discretize(h, pair);
  FineReport fine_report;
  FineFields f = ctg_fine(fine, traces, pp, data, concurrent, &fine_report);
  return {std::move(coarse), std::move(fine), std::move(state), std::move(report), std::move(f), fine_report};
}

}  // namespace sdtg
