#include "fams/direct_solver.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <cmath>
#include <string>

namespace fams {

namespace {

using EigenSparse = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

EigenSparse to_eigen(const SparseMatrix& a) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(a.nnz());
  for (int r = 0; r < a.rows(); ++r) {
    auto cols = a.row_cols(r);
    auto vals = a.row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) t.emplace_back(r, cols[k], vals[k]);
  }
  EigenSparse m(a.rows(), a.cols());
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

}  // namespace

struct SparseLu::Impl {
  Eigen::SparseLU<EigenSparse, Eigen::COLAMDOrdering<int>> lu;
};

SparseLu::SparseLu(const SparseMatrix& a) : impl_(std::make_unique<Impl>()), n_(a.rows()) {
  if (a.rows() != a.cols()) throw DimensionError("LU needs a square matrix");
  if (n_ == 0) return;
  EigenSparse m = to_eigen(a);
  impl_->lu.analyzePattern(m);
  impl_->lu.factorize(m);
  if (impl_->lu.info() != Eigen::Success)
    throw SingularMatrixError("sparse LU failed: " + impl_->lu.lastErrorMessage());
}

SparseLu::~SparseLu() = default;
SparseLu::SparseLu(SparseLu&&) noexcept = default;
SparseLu& SparseLu::operator=(SparseLu&&) noexcept = default;

std::vector<double> SparseLu::solve(std::span<const double> b) const {
  if (b.size() != static_cast<std::size_t>(n_)) throw DimensionError("LU solve: rhs length");
  std::vector<double> x(b.begin(), b.end());
  solve_in_place(x, 1);
  return x;
}

void SparseLu::solve_in_place(std::span<double> block, int nrhs) const {
  if (block.size() != static_cast<std::size_t>(n_) * static_cast<std::size_t>(nrhs))
    throw DimensionError("LU solve: rhs block size");
  if (n_ == 0 || nrhs == 0) return;
  Eigen::Map<Eigen::MatrixXd> rhs(block.data(), n_, nrhs);
  Eigen::MatrixXd x = impl_->lu.solve(rhs);
  rhs = x;
}

std::vector<double> lu_solve(const SparseMatrix& a, std::span<const double> b) {
  SparseLu lu(a);
  auto x = lu.solve(b);
  const auto r = residual(a, x, b);
  const double rn = norm2(r);
  const double bn = norm2(b);
  if (!std::isfinite(rn) || rn > 1e-10 * std::max(bn, 1e-300))
    throw SingularMatrixError("LU solve residual too large (" + std::to_string(rn) +
                              "); matrix is singular or badly conditioned");
  return x;
}

bool cholesky_succeeds(const SparseMatrix& a, double symmetry_tol) {
  if (a.rows() != a.cols()) return false;
  if (a.symmetry_defect() > symmetry_tol * std::max(1.0, a.max_abs())) return false;
  Eigen::SimplicialLLT<EigenSparse> llt(to_eigen(a));
  return llt.info() == Eigen::Success;
}

}  // namespace fams
