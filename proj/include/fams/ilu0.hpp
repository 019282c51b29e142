/**
 * @file ilu0.hpp
 * @brief Zero fill-in incomplete LU factorization used as the fine-scale smoother.
 */
#pragma once

#include <span>
#include <vector>

#include "fams/sparse_matrix.hpp"

namespace fams {

/// L (unit lower, stored strictly below the diagonal) and U (upper incl. diagonal)
/// packed into one matrix with the sparsity pattern of A.
class Ilu0Factor {
 public:
  /// Throws SingularMatrixError on a missing or zero pivot.
  explicit Ilu0Factor(const SparseMatrix& a);

  int size() const { return lu_.rows(); }
  const SparseMatrix& packed() const { return lu_; }

  /// z = (LU)^{-1} r
  void apply(std::span<const double> r, std::span<double> z) const;
  std::vector<double> apply(std::span<const double> r) const;

  SparseMatrix lower() const;  // unit diagonal included explicitly
  SparseMatrix upper() const;

 private:
  SparseMatrix lu_;
  std::vector<int> diag_;
};

}  // namespace fams
