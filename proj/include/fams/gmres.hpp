/**
 * @file gmres.hpp
 * @brief Restarted, right-preconditioned GMRES.
 *
 * Right preconditioning keeps the monitored residual equal to the true
 * residual of the unpreconditioned system, so the stopping test and the
 * reported history refer to ||b - A x||_2 directly. In floating point the
 * Arnoldi estimate can drop below the attainable accuracy of a recomputed
 * residual; convergence is declared on the estimate and the recomputed value
 * is returned in final_residual.
 */
#pragma once

#include <functional>
#include <span>
#include <vector>

#include "fams/sparse_matrix.hpp"

namespace fams {

/// y = Op(x); x and y never alias.
using LinearOperator = std::function<void(std::span<const double>, std::span<double>)>;

LinearOperator as_operator(const SparseMatrix& a);

struct GmresOptions {
  double tol = 1e-6;
  bool relative = false;  ///< compare against tol * ||b|| instead of tol
  int max_it = 500;
  int restart = 50;
  /// A restart cycle reducing the residual by less than this factor counts as stagnation.
  double stagnation_factor = 0.999;
};

struct GmresResult {
  std::vector<double> x;
  int iterations = 0;
  std::vector<double> history;  ///< residual 2-norm, entry 0 is the initial residual
  bool converged = false;
  bool breakdown = false;  ///< Krylov space became invariant (exact solve in the subspace)
  bool stagnated = false;
  double final_residual = 0.0;  ///< recomputed true residual
};

GmresResult gmres(const LinearOperator& a, std::span<const double> b, std::span<const double> x0,
                  const LinearOperator* preconditioner, const GmresOptions& options = {});

}  // namespace fams
