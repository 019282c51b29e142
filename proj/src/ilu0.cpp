#include "fams/ilu0.hpp"

#include <algorithm>
#include <string>

namespace fams {

Ilu0Factor::Ilu0Factor(const SparseMatrix& a) : lu_(a) {
  if (a.rows() != a.cols()) throw DimensionError("ILU(0) needs a square matrix");
  const int n = a.rows();
  const auto ptr = lu_.row_ptr();
  const auto cols = lu_.col_idx();
  auto vals = lu_.values_mut();

  diag_.assign(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    for (int k = ptr[i]; k < ptr[i + 1]; ++k)
      if (cols[k] == i) diag_[i] = k;
    if (diag_[i] < 0) throw SingularMatrixError("ILU(0): missing diagonal in row " + std::to_string(i));
  }

  // IKJ ordering; position lookup through a dense marker of the current row.
  std::vector<int> pos(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    for (int k = ptr[i]; k < ptr[i + 1]; ++k) pos[cols[k]] = k;
    for (int kk = ptr[i]; kk < ptr[i + 1] && cols[kk] < i; ++kk) {
      const int k = cols[kk];
      const double pivot = vals[diag_[k]];
      if (pivot == 0.0) throw SingularMatrixError("ILU(0): zero pivot in row " + std::to_string(k));
      vals[kk] /= pivot;
      const double lik = vals[kk];
      for (int kj = diag_[k] + 1; kj < ptr[k + 1]; ++kj) {
        const int p = pos[cols[kj]];
        if (p >= 0) vals[p] -= lik * vals[kj];
      }
    }
    for (int k = ptr[i]; k < ptr[i + 1]; ++k) pos[cols[k]] = -1;
    if (vals[diag_[i]] == 0.0)
      throw SingularMatrixError("ILU(0): zero pivot in row " + std::to_string(i));
  }
}

void Ilu0Factor::apply(std::span<const double> r, std::span<double> z) const {
  const int n = size();
  if (r.size() != static_cast<std::size_t>(n) || z.size() != static_cast<std::size_t>(n))
    throw DimensionError("ILU(0) apply: vector length");
  const auto ptr = lu_.row_ptr();
  const auto cols = lu_.col_idx();
  const auto vals = lu_.values();
  for (int i = 0; i < n; ++i) {
    double s = r[i];
    for (int k = ptr[i]; k < diag_[i]; ++k) s -= vals[k] * z[cols[k]];
    z[i] = s;
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = z[i];
    for (int k = diag_[i] + 1; k < ptr[i + 1]; ++k) s -= vals[k] * z[cols[k]];
    z[i] = s / vals[diag_[i]];
  }
}

std::vector<double> Ilu0Factor::apply(std::span<const double> r) const {
  std::vector<double> z(r.size());
  apply(r, z);
  return z;
}

SparseMatrix Ilu0Factor::lower() const {
  std::vector<Triplet> t;
  for (int i = 0; i < size(); ++i) {
    auto cols = lu_.row_cols(i);
    auto vals = lu_.row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k)
      if (cols[k] < i) t.push_back({i, cols[k], vals[k]});
    t.push_back({i, i, 1.0});
  }
  return SparseMatrix::from_triplets(size(), size(), std::move(t));
}

SparseMatrix Ilu0Factor::upper() const {
  std::vector<Triplet> t;
  for (int i = 0; i < size(); ++i) {
    auto cols = lu_.row_cols(i);
    auto vals = lu_.row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k)
      if (cols[k] >= i) t.push_back({i, cols[k], vals[k]});
  }
  return SparseMatrix::from_triplets(size(), size(), std::move(t));
}

}  // namespace fams
