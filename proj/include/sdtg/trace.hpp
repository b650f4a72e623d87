#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "sdtg/fe_space.hpp"
#include "sdtg/mesh.hpp"

namespace sdtg {

enum class TraceKind : std::uint8_t { P1, P2 };

/// Trace degree matching a velocity/head element: P2 for P2, P1 otherwise
/// (the MINI bubble vanishes on edges).
[[nodiscard]] TraceKind trace_kind_for(ElementKind kind);

/// Continuous piecewise polynomial on the interface partition. Nodal values
/// are stored in increasing x: breakpoints for P1; breakpoints interleaved
/// with segment midpoints for P2 (b0, m0, b1, m1, ..., bn).
class TraceFunction {
 public:
  TraceFunction(InterfacePartition partition, TraceKind kind);
  TraceFunction(InterfacePartition partition, TraceKind kind, std::vector<double> values);

  [[nodiscard]] const InterfacePartition& partition() const noexcept { return partition_; }
  [[nodiscard]] TraceKind kind() const noexcept { return kind_; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
  [[nodiscard]] std::vector<double>& values() noexcept { return values_; }
  [[nodiscard]] std::size_t node_count() const noexcept { return values_.size(); }
  [[nodiscard]] double node_x(std::size_t i) const;

  /// Unchecked evaluation; x is clamped into the partition range.
  [[nodiscard]] double operator()(double x) const;

  /// Nodal interpolant of f.
  [[nodiscard]] static TraceFunction interpolate(InterfacePartition partition, TraceKind kind,
                                                 const std::function<double(double)>& f);

 private:
  InterfacePartition partition_;
  TraceKind kind_;
  std::vector<double> values_;
};

[[nodiscard]] std::size_t trace_node_count(const InterfacePartition& partition, TraceKind kind);

/// Checked evaluation; throws std::invalid_argument outside the partition range.
[[nodiscard]] double eval_trace(const TraceFunction& t, double x);

/// Nodal values of u . n_S = -u_y on y = 0 for a velocity on the Stokes mesh.
/// Throws std::invalid_argument when `partition` is not the mesh's own.
[[nodiscard]] TraceFunction trace_normal_velocity(const FEFunction& u, const InterfacePartition& partition);

/// Nodal values of a scalar FE function on y = 0.
[[nodiscard]] TraceFunction trace_scalar(const FEFunction& phi, const InterfacePartition& partition);

/// L2(Gamma) norm by 5-point Gauss on each segment.
[[nodiscard]] double trace_l2_norm(const TraceFunction& t);

}  // namespace sdtg
