#include "sdtg/linalg.hpp"

#include <Eigen/CholmodSupport>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/UmfPackSupport>
#include <algorithm>
#include <mutex>
#include <ostream>
#include <stdexcept>

#include "sdtg/errors.hpp"

namespace sdtg {

SparseMatrix::SparseMatrix(int rows, int cols, std::vector<int> row_ptr, std::vector<int> col_idx,
                           std::vector<double> values)
    : rows_(rows), cols_(cols), row_ptr_(std::move(row_ptr)), col_idx_(std::move(col_idx)), values_(std::move(values)) {
  if (rows_ < 0 || cols_ < 0 || row_ptr_.size() != static_cast<std::size_t>(rows_) + 1 ||
      col_idx_.size() != values_.size() || static_cast<std::size_t>(row_ptr_.back()) != col_idx_.size()) {
    throw std::invalid_argument("SparseMatrix: inconsistent CSR arrays");
  }
  for (int i = 0; i < rows_; ++i) {
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      if (col_idx_[k] < 0 || col_idx_[k] >= cols_) throw std::invalid_argument("SparseMatrix: column out of range");
      if (k > row_ptr_[i] && col_idx_[k] <= col_idx_[k - 1]) {
        throw std::invalid_argument("SparseMatrix: columns must be sorted and unique within a row");
      }
    }
  }
}

SparseMatrix SparseMatrix::identity(int n) {
  std::vector<int> ptr(static_cast<std::size_t>(n) + 1);
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int i = 0; i <= n; ++i) ptr[i] = i;
  for (int i = 0; i < n; ++i) idx[i] = i;
  return {n, n, std::move(ptr), std::move(idx), std::vector<double>(static_cast<std::size_t>(n), 1.0)};
}

SparseMatrix SparseMatrix::from_eigen(const Eigen::SparseMatrix<double, Eigen::RowMajor, int>& m) {
  Eigen::SparseMatrix<double, Eigen::RowMajor, int> c = m;
  c.makeCompressed();
  const auto n = static_cast<std::size_t>(c.rows());
  std::vector<int> ptr(c.outerIndexPtr(), c.outerIndexPtr() + n + 1);
  std::vector<int> idx(c.innerIndexPtr(), c.innerIndexPtr() + c.nonZeros());
  std::vector<double> val(c.valuePtr(), c.valuePtr() + c.nonZeros());
  return {static_cast<int>(c.rows()), static_cast<int>(c.cols()), std::move(ptr), std::move(idx), std::move(val)};
}

int SparseMatrix::find(int i, int j) const {
  if (i < 0 || i >= rows_) return -1;
  const auto begin = col_idx_.begin() + row_ptr_[i];
  const auto end = col_idx_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return -1;
  return static_cast<int>(it - col_idx_.begin());
}

double SparseMatrix::coeff(int i, int j) const {
  const int k = find(i, j);
  return k < 0 ? 0.0 : values_[k];
}

void SparseMatrix::add(int i, int j, double v) {
  const int k = find(i, j);
  if (k < 0) throw std::out_of_range("SparseMatrix::add: entry outside the sparsity pattern");
  values_[k] += v;
}

Eigen::VectorXd SparseMatrix::operator*(const Eigen::VectorXd& x) const {
  if (x.size() != cols_) throw std::invalid_argument("SparseMatrix: dimension mismatch in product");
  Eigen::VectorXd y(rows_);
  for (int i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += values_[k] * x[col_idx_[k]];
    y[i] = s;
  }
  return y;
}

Eigen::SparseMatrix<double, Eigen::ColMajor, int> SparseMatrix::to_eigen() const {
  const Eigen::Map<const Eigen::SparseMatrix<double, Eigen::RowMajor, int>> view(
      rows_, cols_, static_cast<int>(values_.size()), row_ptr_.data(), col_idx_.data(), values_.data());
  Eigen::SparseMatrix<double, Eigen::ColMajor, int> out = view;
  out.makeCompressed();
  return out;
}

void SparseMatrix::write_coordinates(std::ostream& out) const {
  out.precision(17);
  for (int i = 0; i < rows_; ++i) {
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) out << i << ' ' << col_idx_[k] << ' ' << values_[k] << '\n';
  }
}

PatternBuilder::PatternBuilder(int rows, int cols) : cols_(cols), entries_(static_cast<std::size_t>(rows)) {}

void PatternBuilder::add(std::span<const int> rows, std::span<const int> cols) {
  for (int r : rows) {
    if (r < 0) continue;
    auto& row = entries_[r];
    for (int c : cols) {
      if (c >= 0) row.push_back(c);
    }
  }
}

SparseMatrix PatternBuilder::build() {
  std::vector<int> ptr(entries_.size() + 1, 0);
  std::vector<int> idx;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    auto& row = entries_[i];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    ptr[i + 1] = ptr[i] + static_cast<int>(row.size());
  }
  idx.reserve(static_cast<std::size_t>(ptr.back()));
  for (auto& row : entries_) {
    idx.insert(idx.end(), row.begin(), row.end());
    std::vector<int>().swap(row);
  }
  std::vector<double> val(idx.size(), 0.0);
  return {static_cast<int>(entries_.size()), cols_, std::move(ptr), std::move(idx), std::move(val)};
}

namespace {

bool structurally_symmetric(const Eigen::SparseMatrix<double, Eigen::ColMajor, int>& a) {
  const Eigen::SparseMatrix<double, Eigen::ColMajor, int> t = a.transpose();
  if (t.nonZeros() != a.nonZeros()) return false;
  return std::equal(a.outerIndexPtr(), a.outerIndexPtr() + a.outerSize() + 1, t.outerIndexPtr()) &&
         std::equal(a.innerIndexPtr(), a.innerIndexPtr() + a.nonZeros(), t.innerIndexPtr());
}

}  // namespace

struct DirectSolver::Impl {
  using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

  Method method;
  SparseMatrix csr;
  ColMatrix matrix;
  Eigen::UmfPackLU<ColMatrix> lu;
  Eigen::CholmodSupernodalLLT<ColMatrix, Eigen::Lower> llt;
  mutable std::mutex mutex;

  Eigen::VectorXd raw_solve(const Eigen::VectorXd& b) const {
    std::lock_guard lock(mutex);
    Eigen::VectorXd x = method == Method::LU ? Eigen::VectorXd(lu.solve(b)) : Eigen::VectorXd(llt.solve(b));
    return x;
  }
};

DirectSolver::DirectSolver(const SparseMatrix& a, Method method) : impl_(std::make_unique<Impl>()) {
  if (a.rows() != a.cols()) throw std::invalid_argument("DirectSolver: matrix must be square");
  impl_->method = method;
  impl_->csr = a;
  impl_->matrix = a.to_eigen();
  if (method == Method::LU) {
    if (structurally_symmetric(impl_->matrix)) impl_->lu.umfpackControl()(UMFPACK_STRATEGY) = UMFPACK_STRATEGY_SYMMETRIC;
    impl_->lu.compute(impl_->matrix);
    if (impl_->lu.info() != Eigen::Success) {
      throw SolverError(SolverError::Kind::SingularMatrix, "DirectSolver: LU factorization failed (singular matrix)");
    }
  } else {
    impl_->llt.compute(impl_->matrix);
    if (impl_->llt.info() != Eigen::Success) {
      throw SolverError(SolverError::Kind::NotPositiveDefinite,
                        "DirectSolver: Cholesky factorization failed (matrix not SPD)");
    }
  }
}

DirectSolver::~DirectSolver() = default;
DirectSolver::DirectSolver(DirectSolver&&) noexcept = default;
DirectSolver& DirectSolver::operator=(DirectSolver&&) noexcept = default;

DirectSolver::Method DirectSolver::method() const noexcept { return impl_->method; }

Eigen::VectorXd DirectSolver::solve(const Eigen::VectorXd& b, SolveReport* report) const {
  if (b.size() != impl_->csr.rows()) throw std::invalid_argument("DirectSolver::solve: rhs size mismatch");
  const double bnorm = b.norm();
  Eigen::VectorXd x;
  double rel = 0.0;
  if (bnorm == 0.0) {
    x = Eigen::VectorXd::Zero(b.size());
  } else {
    x = impl_->raw_solve(b);
    Eigen::VectorXd r = b - impl_->csr * x;
    rel = r.norm() / bnorm;
    for (int step = 0; step < 3 && !(rel <= 1e-11); ++step) {
      x += impl_->raw_solve(r);
      r = b - impl_->csr * x;
      rel = r.norm() / bnorm;
    }
    if (!(rel <= kDirectResidualTolerance)) {
      throw SolverError(SolverError::Kind::ResidualTooLarge,
                        "DirectSolver: relative residual " + std::to_string(rel) + " exceeds 1e-10");
    }
  }
  if (report) {
    report->relative_residual = rel;
    report->iterations = 0;
    report->method = impl_->method == Method::LU ? "umfpack-lu" : "cholmod-llt";
  }
  return x;
}

std::pair<Eigen::VectorXd, SolveReport> solve_direct(const SparseMatrix& a, const Eigen::VectorXd& b) {
  DirectSolver solver(a, DirectSolver::Method::LU);
  SolveReport report;
  Eigen::VectorXd x = solver.solve(b, &report);
  return {std::move(x), std::move(report)};
}

std::pair<Eigen::VectorXd, SolveReport> solve_spd_iterative(const SparseMatrix& a, const Eigen::VectorXd& b,
                                                            double tol) {
  if (a.rows() != a.cols() || b.size() != a.rows()) throw std::invalid_argument("solve_spd_iterative: bad dimensions");
  if (!(tol > 0.0)) throw std::invalid_argument("solve_spd_iterative: tolerance must be positive");
  SolveReport report;
  report.method = "pcg-ichol";
  if (b.norm() == 0.0) return {Eigen::VectorXd::Zero(b.size()), report};

  const auto m = a.to_eigen();
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double, Eigen::ColMajor, int>, Eigen::Lower | Eigen::Upper,
                           Eigen::IncompleteCholesky<double, Eigen::Lower, Eigen::AMDOrdering<int>>>
      cg;
  cg.setTolerance(tol);
  cg.setMaxIterations(a.rows());
  cg.compute(m);
  if (cg.info() != Eigen::Success) {
    throw SolverError(SolverError::Kind::NotPositiveDefinite, "solve_spd_iterative: preconditioner setup failed");
  }
  Eigen::VectorXd x = cg.solve(b);
  report.iterations = static_cast<int>(cg.iterations());
  report.relative_residual = (b - a * x).norm() / b.norm();
  if (cg.info() != Eigen::Success) {
    throw SolverError(SolverError::Kind::NoConvergence, "solve_spd_iterative: no convergence within n iterations");
  }
  return {std::move(x), std::move(report)};
}

}  // namespace sdtg
