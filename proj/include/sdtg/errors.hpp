#pragma once

#include <stdexcept>
#include <string>

namespace sdtg {

/// Raised when a mesh lacks a structure an operation depends on (e.g. no interface edges).
class InvalidMesh : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Linear solver failure. `kind()` distinguishes a singular factorization from
/// a solve whose residual misses the accuracy contract.
class SolverError : public std::runtime_error {
 public:
  enum class Kind { SingularMatrix, ResidualTooLarge, NotPositiveDefinite, NoConvergence };

  SolverError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  [[nodiscard]] Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace sdtg
