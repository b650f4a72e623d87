#pragma once

#include <cstdint>

#include "sdtg/fe_space.hpp"

namespace sdtg {

enum class NormKind : std::uint8_t { L2, H1Semi, H1, InterfaceL2 };

/// Result of an error-norm integration. `relative` is false when the exact
/// field has zero norm; `value()` then reports the absolute error.
struct ErrorNorm {
  double error = 0.0;
  double reference = 0.0;
  bool relative = false;

  [[nodiscard]] double value() const noexcept { return relative ? error / reference : error; }
};

/// ||f - exact|| in the requested norm, integrated with the degree-6 triangle
/// rule (5-point Gauss on interface segments). H1 norms require `exact.gradient`.
[[nodiscard]] ErrorNorm error_norm(const FEFunction& f, const AnalyticField& exact, NormKind kind);

/// ||a - b||_{L2} for two functions on the same space.
[[nodiscard]] double l2_distance(const FEFunction& a, const FEFunction& b);

/// ||f||_{L2}.
[[nodiscard]] double l2_norm(const FEFunction& f);

}  // namespace sdtg
