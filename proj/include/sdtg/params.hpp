#pragma once

namespace sdtg {

/// Physical coefficients of the coupled problem; K = k I.
struct PhysicalParams {
  double nu = 1.0;     ///< kinematic viscosity
  double g = 1.0;      ///< gravitational acceleration
  double k = 1.0;      ///< hydraulic conductivity
  double alpha = 1.0;  ///< Beavers-Joseph-Saffman constant
  double z = 0.0;      ///< elevation datum on the interface

  /// Throws std::invalid_argument unless nu, g, k, alpha are positive.
  void validate() const;

  /// nu * alpha * sqrt(d) / sqrt(trace(Pi)) with Pi = K nu / g, d = 2.
  [[nodiscard]] double bjs_coefficient() const;
};

/// Robin weights of the decoupled subproblems.
struct RobinParams {
  double delta_S = 1.0;
  double delta_D = 1.0;

  void validate() const;
};

}  // namespace sdtg
