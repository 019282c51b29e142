/**
 * @file sparse_matrix.hpp
 * @brief Compressed-row sparse matrix and the basic kernels built on it.
 */
#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fams {

/// Raised when operand shapes do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a factorization meets a zero pivot or a singular operator.
class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Triplet {
  int row;
  int col;
  double value;
};

/// Compressed-row storage with sorted, unique column indices per row.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols);
  SparseMatrix(int rows, int cols, std::vector<int> row_ptr, std::vector<int> col_idx,
               std::vector<double> values);

  /// Duplicate (row, col) entries are summed. Explicit zeros are kept.
  static SparseMatrix from_triplets(int rows, int cols, std::vector<Triplet> triplets);
  static SparseMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  std::span<const int> row_ptr() const { return row_ptr_; }
  std::span<const int> col_idx() const { return col_idx_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values_mut() { return values_; }

  std::span<const int> row_cols(int r) const {
    return {col_idx_.data() + row_ptr_[r], static_cast<std::size_t>(row_ptr_[r + 1] - row_ptr_[r])};
  }
  std::span<const double> row_values(int r) const {
    return {values_.data() + row_ptr_[r], static_cast<std::size_t>(row_ptr_[r + 1] - row_ptr_[r])};
  }

  /// Entry lookup by binary search; zero when the entry is not stored.
  double at(int r, int c) const;

  SparseMatrix transpose() const;
  std::vector<double> to_dense() const;  // row-major
  std::vector<Triplet> to_triplets() const;

  /// Drops stored entries with |value| <= tol.
  SparseMatrix pruned(double tol = 0.0) const;

  double max_abs() const;
  /// max |A(i,j) - A(j,i)| over the stored pattern of both.
  double symmetry_defect() const;

  bool operator==(const SparseMatrix& other) const = default;

 private:
  void validate() const;

  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

/// y = A x
void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y);
std::vector<double> spmv(const SparseMatrix& a, std::span<const double> x);

/// r = b - A x
std::vector<double> residual(const SparseMatrix& a, std::span<const double> x,
                             std::span<const double> b);

/// C = A B (Gustavson row-by-row product; output columns sorted).
SparseMatrix spgemm(const SparseMatrix& a, const SparseMatrix& b);

/// Principal submatrix / permutation helpers.
/// perm[old] = new. Returns P A P^T in the new ordering.
SparseMatrix permute_symmetric(const SparseMatrix& a, std::span<const int> perm);

double norm2(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
/// y += alpha x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

}  // namespace fams
