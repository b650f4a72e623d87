#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sdtg {

/// Row-compressed sparse matrix with sorted, duplicate-free column indices.
/// The pattern is fixed at construction; `add` accumulates into existing entries.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols, std::vector<int> row_ptr, std::vector<int> col_idx, std::vector<double> values);

  [[nodiscard]] static SparseMatrix identity(int n);
  [[nodiscard]] static SparseMatrix from_eigen(const Eigen::SparseMatrix<double, Eigen::RowMajor, int>& m);

  [[nodiscard]] int rows() const noexcept { return rows_; }
  [[nodiscard]] int cols() const noexcept { return cols_; }
  [[nodiscard]] std::size_t nnz() const noexcept { return values_.size(); }
  [[nodiscard]] std::span<const int> row_ptr() const noexcept { return row_ptr_; }
  [[nodiscard]] std::span<const int> col_idx() const noexcept { return col_idx_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::span<double> values() noexcept { return values_; }

  /// Entry (i, j), zero when outside the pattern.
  [[nodiscard]] double coeff(int i, int j) const;
  /// Adds v to entry (i, j); throws std::out_of_range when (i, j) is not in the pattern.
  void add(int i, int j, double v);

  [[nodiscard]] Eigen::VectorXd operator*(const Eigen::VectorXd& x) const;
  [[nodiscard]] Eigen::SparseMatrix<double, Eigen::ColMajor, int> to_eigen() const;

  /// Coordinate dump, one "row col value" line per stored entry.
  void write_coordinates(std::ostream& out) const;

 private:
  [[nodiscard]] int find(int i, int j) const;

  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

/// Collects the couplings of an element loop and produces a zero-valued
/// SparseMatrix with the union pattern.
class PatternBuilder {
 public:
  PatternBuilder(int rows, int cols);
  /// Couples every entry of `rows` with every entry of `cols`; negative indices are skipped.
  void add(std::span<const int> rows, std::span<const int> cols);
  [[nodiscard]] SparseMatrix build();

 private:
  int cols_;
  std::vector<std::vector<int>> entries_;
};

struct SolveReport {
  double relative_residual = 0.0;
  int iterations = 0;  ///< 0 for direct solves (refinement steps are not counted)
  std::string method;
};

/// Factorization kept alive for repeated solves. LU (UMFPACK) handles general
/// and saddle-point matrices; Cholesky (CHOLMOD) requires SPD and reports
/// SolverError::Kind::NotPositiveDefinite otherwise. Every solve checks
/// ||Ax - b|| / ||b|| <= 1e-10, applying up to three refinement steps.
class DirectSolver {
 public:
  enum class Method { LU, Cholesky };

  DirectSolver(const SparseMatrix& a, Method method);
  ~DirectSolver();
  DirectSolver(DirectSolver&&) noexcept;
  DirectSolver& operator=(DirectSolver&&) noexcept;

  [[nodiscard]] Eigen::VectorXd solve(const Eigen::VectorXd& b, SolveReport* report = nullptr) const;
  [[nodiscard]] Method method() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

inline constexpr double kDirectResidualTolerance = 1e-10;

/// One-shot LU solve with the residual contract of DirectSolver.
[[nodiscard]] std::pair<Eigen::VectorXd, SolveReport> solve_direct(const SparseMatrix& a, const Eigen::VectorXd& b);

/// Preconditioned conjugate gradients for SPD systems. Throws
/// SolverError::Kind::NoConvergence after `rows()` iterations.
[[nodiscard]] std::pair<Eigen::VectorXd, SolveReport> solve_spd_iterative(const SparseMatrix& a,
                                                                         const Eigen::VectorXd& b, double tol);

}  // namespace sdtg
