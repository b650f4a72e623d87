#include "sdtg/norms.hpp"

#include <cmath>
#include <stdexcept>

#include "sdtg/quadrature.hpp"

namespace sdtg {

namespace {

struct Accum {
  double error = 0.0;
  double reference = 0.0;
};

Accum integrate_cells(const FEFunction& f, const AnalyticField& exact, bool values, bool gradients) {
  const auto& sp = f.space();
  const auto& mesh = sp.mesh();
  const auto& rule = triangle_rule_deg6();
  const int nc = sp.components();
  Accum acc;
  for (int c = 0; c < static_cast<int>(mesh.cell_count()); ++c) {
    const auto geom = cell_geometry(mesh, c);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& l = rule.points[q];
      const double w = rule.weights[q] * geom.area;
      const Point x = geom.map(l);
      if (values) {
        const Vec2 fh = f.value(c, l);
        const Vec2 ex = exact.value(x);
        for (int k = 0; k < nc; ++k) {
          acc.error += w * (fh[k] - ex[k]) * (fh[k] - ex[k]);
          acc.reference += w * ex[k] * ex[k];
        }
      }
      if (gradients) {
        const Mat2 gh = f.gradient(c, l, geom);
        const Mat2 ge = exact.gradient(x);
        for (int k = 0; k < nc; ++k) {
          for (int d = 0; d < 2; ++d) {
            acc.error += w * (gh[k][d] - ge[k][d]) * (gh[k][d] - ge[k][d]);
            acc.reference += w * ge[k][d] * ge[k][d];
          }
        }
      }
    }
  }
  return acc;
}

Accum integrate_interface(const FEFunction& f, const AnalyticField& exact) {
  const auto& sp = f.space();
  const auto& mesh = sp.mesh();
  if (mesh.interface_edges().empty()) throw std::invalid_argument("error_norm: mesh has no interface");
  const auto& rule = gauss_segment5();
  Accum acc;
  for (const auto& e : mesh.interface_edges()) {
    const auto geom = cell_geometry(mesh, e.cell);
    const double len = e.xb - e.xa;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Barycentric l = interface_barycentric(mesh, e, rule.points[q]);
      const Point x = geom.map(l);
      const Vec2 fh = f.value(e.cell, l);
      const Vec2 ex = exact.value(x);
      const double w = rule.weights[q] * len;
      for (int k = 0; k < sp.components(); ++k) {
        acc.error += w * (fh[k] - ex[k]) * (fh[k] - ex[k]);
        acc.reference += w * ex[k] * ex[k];
      }
    }
  }
  return acc;
}

}  // namespace

ErrorNorm error_norm(const FEFunction& f, const AnalyticField& exact, NormKind kind) {
  if (exact.components != f.space().components()) throw std::invalid_argument("error_norm: component mismatch");
  const bool needs_gradient = kind == NormKind::H1 || kind == NormKind::H1Semi;
  if (needs_gradient && !exact.gradient) throw std::invalid_argument("error_norm: H1 norms need the exact gradient");
  Accum acc;
  switch (kind) {
    case NormKind::L2: acc = integrate_cells(f, exact, true, false); break;
    case NormKind::H1Semi: acc = integrate_cells(f, exact, false, true); break;
    case NormKind::H1: acc = integrate_cells(f, exact, true, true); break;
    case NormKind::InterfaceL2: acc = integrate_interface(f, exact); break;
  }
  ErrorNorm out;
  out.error = std::sqrt(acc.error);
  out.reference = std::sqrt(acc.reference);
  out.relative = out.reference > 0.0;
  return out;
}

double l2_distance(const FEFunction& a, const FEFunction& b) {
  if (a.space_ptr() != b.space_ptr()) throw std::invalid_argument("l2_distance: functions on different spaces");
  FEFunction diff(a.space_ptr(), a.coeffs() - b.coeffs());
  return l2_norm(diff);
}

double l2_norm(const FEFunction& f) {
  return error_norm(f, AnalyticField::zero(f.space().components()), NormKind::L2).error;
}

}  // namespace sdtg
