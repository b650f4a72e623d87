#pragma once

#include <array>
#include <vector>

namespace sdtg {

/// Quadrature on the reference triangle in barycentric coordinates. Weights
/// sum to one, so a physical integral is `area * sum(w_q f(x_q))`.
struct TriangleRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
  int degree = 0;
};

/// Quadrature on [0, 1]; weights sum to one.
struct SegmentRule {
  std::vector<double> points;
  std::vector<double> weights;
  int degree = 0;
};

/// 7-point rule, exact for degree 5. Used for stiffness, mass and interface-free bilinear forms.
[[nodiscard]] const TriangleRule& triangle_rule_deg5();
/// 12-point rule, exact for degree 6. Used for loads and error norms.
[[nodiscard]] const TriangleRule& triangle_rule_deg6();
/// 5-point Gauss-Legendre rule, exact for degree 9.
[[nodiscard]] const SegmentRule& gauss_segment5();

}  // namespace sdtg
