#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sdtg/algorithms.hpp"
#include "sdtg/fe_space.hpp"
#include "sdtg/params.hpp"

namespace sdtg {

/// Closed-form solution of the test problem on [0,pi] x [-1,1]:
///   u_S = (v'(y) cos x, v(y) sin x),  p_S = 0,  phi_D = (e^y - e^-y) sin x,
///   v(y) = -2k + (k / pi^2) sin^2(pi y).
struct ExactSolution {
  double k = 1.0;

  [[nodiscard]] double v(double y) const;
  [[nodiscard]] double dv(double y) const;
  [[nodiscard]] double d2v(double y) const;
  [[nodiscard]] double d3v(double y) const;

  [[nodiscard]] Vec2 velocity(Point p) const;
  [[nodiscard]] Mat2 velocity_gradient(Point p) const;
  [[nodiscard]] double pressure(Point p) const;
  [[nodiscard]] double head(Point p) const;
  [[nodiscard]] Vec2 head_gradient(Point p) const;

  [[nodiscard]] AnalyticField velocity_field() const;
  [[nodiscard]] AnalyticField pressure_field() const;
  [[nodiscard]] AnalyticField head_field() const;
};

/// Forcing and Dirichlet data for ExactSolution{pp.k}. Requires pp.z == 0
/// (std::invalid_argument otherwise).
[[nodiscard]] ProblemData manufactured_forcing(const PhysicalParams& pp);

/// Errors of one solution. Velocity and head use full H1 norms relative to
/// the exact solution; the exact pressure is zero, so the pressure error is
/// the absolute L2 norm.
struct ErrorRecord {
  double u_h1 = 0.0;  ///< relative
  double p_l2 = 0.0;  ///< absolute
  double phi_h1 = 0.0;  ///< relative
  double u_h1_abs = 0.0;
  double phi_h1_abs = 0.0;
};

[[nodiscard]] ErrorRecord compute_errors(const FEFunction& uS, const FEFunction& pS, const FEFunction& phiD,
                                         const ExactSolution& exact);
[[nodiscard]] ErrorRecord compute_errors(const TwoGridResult& result, const ExactSolution& exact);
[[nodiscard]] ErrorRecord compute_errors(const DdmState& state, const ExactSolution& exact);

struct ConvergenceRow {
  double H = 0.0;
  double h = 0.0;
  int N = 0;
  double err_u_h1 = 0.0;
  double err_p_l2 = 0.0;
  double err_phi_h1 = 0.0;
  double t_coarse = 0.0;
  double t_fine = 0.0;
};

/// Rows in decreasing h.
struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;

  /// Column values by CSV name: "err_u_h1", "err_p_l2", "err_phi_h1".
  [[nodiscard]] std::vector<double> column(std::string_view name) const;
  [[nodiscard]] std::vector<double> fine_sizes() const;
};

/// Least-squares slope of log(err) against log(h). Needs >= 2 points (the
/// table overload requires >= 3 rows); non-positive values throw std::invalid_argument.
[[nodiscard]] double fit_rate(const std::vector<double>& h, const std::vector<double>& err);
[[nodiscard]] double fit_rate(const ConvergenceTable& table, std::string_view column);

}  // namespace sdtg
