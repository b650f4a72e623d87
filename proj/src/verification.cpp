#include "sdtg/verification.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sdtg/norms.hpp"

namespace sdtg {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

double ExactSolution::v(double y) const {
  const double s = std::sin(kPi * y);
  return -2.0 * k + (k / (kPi * kPi)) * s * s;
}

double ExactSolution::dv(double y) const { return (k / kPi) * std::sin(2.0 * kPi * y); }

double ExactSolution::d2v(double y) const { return 2.0 * k * std::cos(2.0 * kPi * y); }

double ExactSolution::d3v(double y) const { return -4.0 * kPi * k * std::sin(2.0 * kPi * y); }

Vec2 ExactSolution::velocity(Point p) const { return {dv(p.y) * std::cos(p.x), v(p.y) * std::sin(p.x)}; }

Mat2 ExactSolution::velocity_gradient(Point p) const {
  const double c = std::cos(p.x);
  const double s = std::sin(p.x);
  return {Vec2{-dv(p.y) * s, d2v(p.y) * c}, Vec2{v(p.y) * c, dv(p.y) * s}};
}

double ExactSolution::pressure(Point) const { return 0.0; }

double ExactSolution::head(Point p) const { return 2.0 * std::sinh(p.y) * std::sin(p.x); }

Vec2 ExactSolution::head_gradient(Point p) const {
  return {2.0 * std::sinh(p.y) * std::cos(p.x), 2.0 * std::cosh(p.y) * std::sin(p.x)};
}

AnalyticField ExactSolution::velocity_field() const {
  const ExactSolution e = *this;
  return AnalyticField::vector([e](Point p) { return e.velocity(p); },
                               [e](Point p) { return e.velocity_gradient(p); });
}

AnalyticField ExactSolution::pressure_field() const {
  const ExactSolution e = *this;
  return AnalyticField::scalar([e](Point p) { return e.pressure(p); }, [](Point) { return Vec2{0.0, 0.0}; });
}

AnalyticField ExactSolution::head_field() const {
  const ExactSolution e = *this;
  return AnalyticField::scalar([e](Point p) { return e.head(p); }, [e](Point p) { return e.head_gradient(p); });
}

ProblemData manufactured_forcing(const PhysicalParams& pp) {
  pp.validate();
  if (pp.z != 0.0) throw std::invalid_argument("manufactured_forcing: the test problem assumes z = 0");
  const ExactSolution e{pp.k};
  const double nu = pp.nu;
  ProblemData d;
  d.stokes_force = AnalyticField::vector([e, nu](Point p) {
    return Vec2{nu * (e.dv(p.y) - e.d3v(p.y)) * std::cos(p.x), nu * (e.v(p.y) - e.d2v(p.y)) * std::sin(p.x)};
  });
  d.velocity_boundary = e.velocity_field();
  d.darcy_source = AnalyticField::scalar([](Point) { return 0.0; });
  d.head_boundary = e.head_field();
  return d;
}

ErrorRecord compute_errors(const FEFunction& uS, const FEFunction& pS, const FEFunction& phiD,
                           const ExactSolution& exact) {
  const auto eu = error_norm(uS, exact.velocity_field(), NormKind::H1);
  const auto ep = error_norm(pS, exact.pressure_field(), NormKind::L2);
  const auto eh = error_norm(phiD, exact.head_field(), NormKind::H1);
  ErrorRecord r;
  r.u_h1 = eu.value();
  r.p_l2 = ep.error;
  r.phi_h1 = eh.value();
  r.u_h1_abs = eu.error;
  r.phi_h1_abs = eh.error;
  return r;
}

ErrorRecord compute_errors(const TwoGridResult& result, const ExactSolution& exact) {
  return compute_errors(result.fine.uS, result.fine.pS, result.fine.phiD, exact);
}

ErrorRecord compute_errors(const DdmState& state, const ExactSolution& exact) {
  return compute_errors(state.uS, state.pS, state.phiD, exact);
}

std::vector<double> ConvergenceTable::column(std::string_view name) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    if (name == "err_u_h1") {
      out.push_back(r.err_u_h1);
    } else if (name == "err_p_l2") {
      out.push_back(r.err_p_l2);
    } else if (name == "err_phi_h1") {
      out.push_back(r.err_phi_h1);
    } else {
      throw std::invalid_argument("ConvergenceTable: unknown column '" + std::string(name) + "'");
    }
  }
  return out;
}

std::vector<double> ConvergenceTable::fine_sizes() const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.h);
  return out;
}

double fit_rate(const std::vector<double>& h, const std::vector<double>& err) {
  if (h.size() != err.size() || h.size() < 2) throw std::invalid_argument("fit_rate: need at least two points");
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(h[i] > 0.0) || !(err[i] > 0.0) || !std::isfinite(err[i])) {
      throw std::invalid_argument("fit_rate: sizes and errors must be positive and finite");
    }
    sx += std::log(h[i]);
    sy += std::log(err[i]);
  }
  const double n = static_cast<double>(h.size());
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double dx = std::log(h[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(err[i]) - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_rate: mesh sizes must not all coincide");
  return sxy / sxx;
}

double fit_rate(const ConvergenceTable& table, std::string_view column) {
  if (table.rows.size() < 3) throw std::invalid_argument("fit_rate: need at least three rows");
  return fit_rate(table.fine_sizes(), table.column(column));
}

}  // namespace sdtg
