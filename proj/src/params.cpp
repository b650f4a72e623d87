#include "sdtg/params.hpp"

#include <cmath>
#include <stdexcept>

namespace sdtg {

void PhysicalParams::validate() const {
  if (!(nu > 0.0) || !(g > 0.0) || !(k > 0.0) || !(alpha > 0.0)) {
    throw std::invalid_argument("PhysicalParams: nu, g, k and alpha must be positive");
  }
}

double PhysicalParams::bjs_coefficient() const {
  constexpr double d = 2.0;
  const double trace_pi = d * k * nu / g;
  return nu * alpha * std::sqrt(d) / std::sqrt(trace_pi);
}

void RobinParams::validate() const {
  if (!(delta_S > 0.0) || !(delta_D > 0.0)) throw std::invalid_argument("RobinParams: deltas must be positive");
}

}  // namespace sdtg
