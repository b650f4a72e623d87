#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "sdtg/algorithms.hpp"
#include "sdtg/verification.hpp"

namespace sdtg::test {

inline constexpr double kPi = std::numbers::pi;

/// Fixed-seed generator so every property test is reproducible.
inline std::mt19937_64 rng(unsigned seed = 20240611) { return std::mt19937_64(seed); }

inline Barycentric random_barycentric(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double a = u(gen);
  double b = u(gen);
  if (a + b > 1.0) {
    a = 1.0 - a;
    b = 1.0 - b;
  }
  return {a, b, 1.0 - a - b};
}

inline ProblemData zero_data() { return ProblemData{}; }

inline double max_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace sdtg::test
