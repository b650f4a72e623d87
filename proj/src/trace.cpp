#include "sdtg/trace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sdtg/quadrature.hpp"

namespace sdtg {

TraceKind trace_kind_for(ElementKind kind) { return kind == ElementKind::P2 ? TraceKind::P2 : TraceKind::P1; }

std::size_t trace_node_count(const InterfacePartition& partition, TraceKind kind) {
  const auto n = partition.segment_count();
  return kind == TraceKind::P2 ? 2 * n + 1 : n + 1;
}

TraceFunction::TraceFunction(InterfacePartition partition, TraceKind kind)
    : partition_(std::move(partition)), kind_(kind), values_(trace_node_count(partition_, kind_), 0.0) {}

TraceFunction::TraceFunction(InterfacePartition partition, TraceKind kind, std::vector<double> values)
    : partition_(std::move(partition)), kind_(kind), values_(std::move(values)) {
  if (values_.size() != trace_node_count(partition_, kind_)) {
    throw std::invalid_argument("TraceFunction: value count does not match partition");
  }
}

double TraceFunction::node_x(std::size_t i) const {
  const auto bp = partition_.breakpoints();
  if (kind_ == TraceKind::P1) return bp[i];
  if (i % 2 == 0) return bp[i / 2];
  return 0.5 * (bp[i / 2] + bp[i / 2 + 1]);
}

double TraceFunction::operator()(double x) const {
  const auto bp = partition_.breakpoints();
  const std::size_t seg = partition_.locate(x);
  const double x0 = bp[seg];
  const double x1 = bp[seg + 1];
  const double s = std::clamp((x - x0) / (x1 - x0), 0.0, 1.0);
  if (kind_ == TraceKind::P1) return (1.0 - s) * values_[seg] + s * values_[seg + 1];
  const double* v = &values_[2 * seg];
  return (1.0 - s) * (1.0 - 2.0 * s) * v[0] + 4.0 * s * (1.0 - s) * v[1] + s * (2.0 * s - 1.0) * v[2];
}

TraceFunction TraceFunction::interpolate(InterfacePartition partition, TraceKind kind,
                                         const std::function<double(double)>& f) {
  TraceFunction out(std::move(partition), kind);
  for (std::size_t i = 0; i < out.node_count(); ++i) out.values_[i] = f(out.node_x(i));
  return out;
}

double eval_trace(const TraceFunction& t, double x) {
  const double lo = t.partition().front();
  const double hi = t.partition().back();
  const double slack = 1e-12 * (hi - lo);
  if (!(x >= lo - slack && x <= hi + slack)) throw std::invalid_argument("eval_trace: x outside the interface");
  return t(x);
}

namespace {

// Evaluates component `comp` (scaled by `sign`) of f at the trace nodes of the
// mesh interface. The partition must be the mesh's own.
TraceFunction extract_trace(const FEFunction& f, const InterfacePartition& partition, int comp, double sign) {
  const Mesh& mesh = f.space().mesh();
  if (mesh.interface_edges().empty() || interface_partition(mesh) != partition) {
    throw std::invalid_argument("trace: partition does not belong to the function's mesh");
  }
  const TraceKind kind = trace_kind_for(f.space().kind());
  TraceFunction out(partition, kind);
  auto& vals = out.values();
  const auto& iface = mesh.interface_edges();
  for (std::size_t k = 0; k < iface.size(); ++k) {
    const auto& e = iface[k];
    const auto& cell = mesh.cells()[e.cell];
    const int la = e.local_edge;
    const int lb = (la + 1) % 3;
    const bool a_is_left = mesh.vertices()[cell[la]].x < mesh.vertices()[cell[lb]].x;
    Barycentric left{};
    Barycentric right{};
    Barycentric mid{};
    left[a_is_left ? la : lb] = 1.0;
    right[a_is_left ? lb : la] = 1.0;
    mid[la] = 0.5;
    mid[lb] = 0.5;
    if (kind == TraceKind::P1) {
      vals[k] = sign * f.value(e.cell, left)[comp];
      vals[k + 1] = sign * f.value(e.cell, right)[comp];
    } else {
      vals[2 * k] = sign * f.value(e.cell, left)[comp];
      vals[2 * k + 1] = sign * f.value(e.cell, mid)[comp];
      vals[2 * k + 2] = sign * f.value(e.cell, right)[comp];
    }
  }
  return out;
}

}  // namespace

TraceFunction trace_normal_velocity(const FEFunction& u, const InterfacePartition& partition) {
  if (u.space().components() != 2) throw std::invalid_argument("trace_normal_velocity: velocity space expected");
  if (u.space().mesh().region() != Region::Stokes) {
    throw std::invalid_argument("trace_normal_velocity: velocity must live on the Stokes mesh");
  }
  // The Stokes domain lies above the interface, so n_S = (0, -1).
  return extract_trace(u, partition, 1, -1.0);
}

TraceFunction trace_scalar(const FEFunction& phi, const InterfacePartition& partition) {
  if (phi.space().components() != 1) throw std::invalid_argument("trace_scalar: scalar space expected");
  return extract_trace(phi, partition, 0, 1.0);
}

double trace_l2_norm(const TraceFunction& t) {
  const auto& rule = gauss_segment5();
  const auto bp = t.partition().breakpoints();
  double sum = 0.0;
  for (std::size_t s = 0; s + 1 < bp.size(); ++s) {
    const double len = bp[s + 1] - bp[s];
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double v = t(bp[s] + rule.points[q] * len);
      sum += rule.weights[q] * len * v * v;
    }
  }
  return std::sqrt(sum);
}

}  // namespace sdtg
