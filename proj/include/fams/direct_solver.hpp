/**
 * @file direct_solver.hpp
 * @brief Sparse direct LU factorization (coarse systems, local basis problems, reference solves).
 */
#pragma once

#include <memory>
#include <span>
#include <vector>

#include "fams/sparse_matrix.hpp"

namespace fams {

/// Sparse LU with fill-reducing column ordering. Immutable once constructed;
/// solve() is const and reentrant.
class SparseLu {
 public:
  /// Throws SingularMatrixError when a zero pivot is met.
  explicit SparseLu(const SparseMatrix& a);
  ~SparseLu();
  SparseLu(SparseLu&&) noexcept;
  SparseLu& operator=(SparseLu&&) noexcept;

  int size() const { return n_; }

  std::vector<double> solve(std::span<const double> b) const;
  /// Column-major block of right-hand sides, n x nrhs; solved in place.
  void solve_in_place(std::span<double> block, int nrhs) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int n_ = 0;
};

/// One-shot x = A^{-1} b; verifies ||Ax - b|| <= 1e-10 ||b|| and throws
/// SingularMatrixError otherwise.
std::vector<double> lu_solve(const SparseMatrix& a, std::span<const double> b);

/// True when A is numerically symmetric and a sparse Cholesky factorization succeeds.
bool cholesky_succeeds(const SparseMatrix& a, double symmetry_tol = 1e-12);

}  // namespace fams
