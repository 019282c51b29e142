#include "fams/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fams {

SparseMatrix::SparseMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), row_ptr_(static_cast<std::size_t>(rows) + 1, 0) {
  if (rows < 0 || cols < 0) throw DimensionError("negative matrix dimension");
}

SparseMatrix::SparseMatrix(int rows, int cols, std::vector<int> row_ptr, std::vector<int> col_idx,
                           std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  validate();
}

void SparseMatrix::validate() const {
  if (rows_ < 0 || cols_ < 0) throw DimensionError("negative matrix dimension");
  if (row_ptr_.size() != static_cast<std::size_t>(rows_) + 1 || row_ptr_.front() != 0)
    throw DimensionError("row offsets do not match row count");
  if (col_idx_.size() != values_.size() ||
      static_cast<std::size_t>(row_ptr_.back()) != col_idx_.size())
    throw DimensionError("column/value arrays do not match offsets");
  for (int r = 0; r < rows_; ++r) {
    if (row_ptr_[r + 1] < row_ptr_[r]) throw DimensionError("row offsets not monotone");
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      if (col_idx_[k] < 0 || col_idx_[k] >= cols_) throw DimensionError("column index out of range");
      if (k > row_ptr_[r] && col_idx_[k] <= col_idx_[k - 1])
        throw DimensionError("columns not sorted/unique within row");
    }
  }
}

SparseMatrix SparseMatrix::from_triplets(int rows, int cols, std::vector<Triplet> triplets) {
  for (const auto& t : triplets) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
      throw DimensionError("triplet index out of range");
  }
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<int> ptr(static_cast<std::size_t>(rows) + 1, 0);
  std::vector<int> cols_out;
  std::vector<double> vals;
  cols_out.reserve(triplets.size());
  vals.reserve(triplets.size());
  int prev_row = -1;
  int prev_col = -1;
  for (const auto& t : triplets) {
    if (t.row == prev_row && t.col == prev_col) {
      vals.back() += t.value;
      continue;
    }
    cols_out.push_back(t.col);
    vals.push_back(t.value);
    ++ptr[t.row + 1];
    prev_row = t.row;
    prev_col = t.col;
  }
  std::partial_sum(ptr.begin(), ptr.end(), ptr.begin());
  return SparseMatrix(rows, cols, std::move(ptr), std::move(cols_out), std::move(vals));
}

SparseMatrix SparseMatrix::identity(int n) {
  std::vector<int> ptr(static_cast<std::size_t>(n) + 1);
  std::iota(ptr.begin(), ptr.end(), 0);
  std::vector<int> cols(static_cast<std::size_t>(n));
  std::iota(cols.begin(), cols.end(), 0);
  return SparseMatrix(n, n, std::move(ptr), std::move(cols), std::vector<double>(n, 1.0));
}

double SparseMatrix::at(int r, int c) const {
  auto cols = row_cols(r);
  auto it = std::lower_bound(cols.begin(), cols.end(), c);
  if (it == cols.end() || *it != c) return 0.0;
  return values_[row_ptr_[r] + static_cast<int>(it - cols.begin())];
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<int> ptr(static_cast<std::size_t>(cols_) + 1, 0);
  for (int c : col_idx_) ++ptr[c + 1];
  std::partial_sum(ptr.begin(), ptr.end(), ptr.begin());
  std::vector<int> next(ptr.begin(), ptr.end() - 1);
  std::vector<int> cols(col_idx_.size());
  std::vector<double> vals(values_.size());
  for (int r = 0; r < rows_; ++r) {
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const int dst = next[col_idx_[k]]++;
      cols[dst] = r;
      vals[dst] = values_[k];
    }
  }
  return SparseMatrix(cols_, rows_, std::move(ptr), std::move(cols), std::move(vals));
}

std::vector<double> SparseMatrix::to_dense() const {
  std::vector<double> d(static_cast<std::size_t>(rows_) * cols_, 0.0);
  for (int r = 0; r < rows_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      d[static_cast<std::size_t>(r) * cols_ + col_idx_[k]] = values_[k];
  return d;
}

std::vector<Triplet> SparseMatrix::to_triplets() const {
  std::vector<Triplet> t;
  t.reserve(values_.size());
  for (int r = 0; r < rows_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) t.push_back({r, col_idx_[k], values_[k]});
  return t;
}

SparseMatrix SparseMatrix::pruned(double tol) const {
  std::vector<int> ptr(static_cast<std::size_t>(rows_) + 1, 0);
  std::vector<int> cols;
  std::vector<double> vals;
  for (int r = 0; r < rows_; ++r) {
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      if (std::abs(values_[k]) > tol) {
        cols.push_back(col_idx_[k]);
        vals.push_back(values_[k]);
      }
    }
    ptr[r + 1] = static_cast<int>(cols.size());
  }
  return SparseMatrix(rows_, cols_, std::move(ptr), std::move(cols), std::move(vals));
}

double SparseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double SparseMatrix::symmetry_defect() const {
  if (rows_ != cols_) throw DimensionError("symmetry check needs a square matrix");
  double defect = 0.0;
  for (int r = 0; r < rows_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      defect = std::max(defect, std::abs(values_[k] - at(col_idx_[k], r)));
  return defect;
}

void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y) {
  if (x.size() != static_cast<std::size_t>(a.cols()) || y.size() != static_cast<std::size_t>(a.rows()))
    throw DimensionError("spmv: vector length does not match matrix");
  const auto ptr = a.row_ptr();
  const auto cols = a.col_idx();
  const auto vals = a.values();
  for (int r = 0; r < a.rows(); ++r) {
    double sum = 0.0;
    for (int k = ptr[r]; k < ptr[r + 1]; ++k) sum += vals[k] * x[cols[k]];
    y[r] = sum;
  }
}

std::vector<double> spmv(const SparseMatrix& a, std::span<const double> x) {
  std::vector<double> y(static_cast<std::size_t>(a.rows()));
  spmv(a, x, y);
  return y;
}

std::vector<double> residual(const SparseMatrix& a, std::span<const double> x,
                             std::span<const double> b) {
  if (b.size() != static_cast<std::size_t>(a.rows())) throw DimensionError("residual: rhs length");
  auto r = spmv(a, x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  return r;
}

SparseMatrix spgemm(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("spgemm: inner dimensions differ");
  const int n = b.cols();
  std::vector<int> ptr(static_cast<std::size_t>(a.rows()) + 1, 0);
  std::vector<int> cols;
  std::vector<double> vals;
  std::vector<int> marker(static_cast<std::size_t>(n), -1);
  std::vector<double> accum(static_cast<std::size_t>(n), 0.0);
  std::vector<int> row_cols;
  for (int r = 0; r < a.rows(); ++r) {
    row_cols.clear();
    auto acols = a.row_cols(r);
    auto avals = a.row_values(r);
    for (std::size_t ka = 0; ka < acols.size(); ++ka) {
      const int mid = acols[ka];
      const double av = avals[ka];
      auto bcols = b.row_cols(mid);
      auto bvals = b.row_values(mid);
      for (std::size_t kb = 0; kb < bcols.size(); ++kb) {
        const int c = bcols[kb];
        if (marker[c] != r) {
          marker[c] = r;
          accum[c] = 0.0;
          row_cols.push_back(c);
        }
        accum[c] += av * bvals[kb];
      }
    }
    std::sort(row_cols.begin(), row_cols.end());
    for (int c : row_cols) {
      cols.push_back(c);
      vals.push_back(accum[c]);
    }
    ptr[r + 1] = static_cast<int>(cols.size());
  }
  return SparseMatrix(a.rows(), n, std::move(ptr), std::move(cols), std::move(vals));
}

SparseMatrix permute_symmetric(const SparseMatrix& a, std::span<const int> perm) {
  if (a.rows() != a.cols() || perm.size() != static_cast<std::size_t>(a.rows()))
    throw DimensionError("permute_symmetric: size mismatch");
  std::vector<Triplet> t;
  t.reserve(a.nnz());
  for (int r = 0; r < a.rows(); ++r) {
    auto cols = a.row_cols(r);
    auto vals = a.row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) t.push_back({perm[r], perm[cols[k]], vals[k]});
  }
  return SparseMatrix::from_triplets(a.rows(), a.cols(), std::move(t));
}

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw DimensionError("axpy: length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace fams
