#include "fams/gmres.hpp"

#include <cmath>
#include <stdexcept>

namespace fams {

LinearOperator as_operator(const SparseMatrix& a) {
  return [&a](std::span<const double> x, std::span<double> y) { spmv(a, x, y); };
}

GmresResult gmres(const LinearOperator& a, std::span<const double> b, std::span<const double> x0,
                  const LinearOperator* preconditioner, const GmresOptions& options) {
  const std::size_t n = b.size();
  if (x0.size() != n) throw DimensionError("gmres: initial guess length");
  if (options.restart < 1 || options.max_it < 0 || !(options.tol > 0.0))
    throw std::invalid_argument("gmres: invalid options");

  GmresResult res;
  res.x.assign(x0.begin(), x0.end());
  const double target = options.relative ? options.tol * norm2(b) : options.tol;

  std::vector<double> r(n), w(n), z(n);
  auto true_residual = [&] {
    a(res.x, w);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - w[i];
    return norm2(r);
  };

  double beta = true_residual();
  res.history.push_back(beta);
  if (beta <= target || n == 0) {
    res.converged = true;
    res.final_residual = beta;
    return res;
  }

  const int m = options.restart;
  std::vector<std::vector<double>> v(static_cast<std::size_t>(m) + 1, std::vector<double>(n));
  std::vector<std::vector<double>> zs;  // preconditioned directions M^{-1} v_j
  if (preconditioner) zs.assign(static_cast<std::size_t>(m), std::vector<double>(n));
  std::vector<double> h(static_cast<std::size_t>(m + 1) * m, 0.0);
  auto H = [&](int i, int j) -> double& { return h[static_cast<std::size_t>(j) * (m + 1) + i]; };
  std::vector<double> cs(m), sn(m), g(static_cast<std::size_t>(m) + 1);

  while (res.iterations < options.max_it) {
    const double cycle_start = beta;
    for (std::size_t i = 0; i < n; ++i) v[0][i] = r[i] / beta;
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = beta;

    int k = 0;
    bool done = false;
    for (; k < m && res.iterations < options.max_it; ++k) {
      std::span<const double> dir = v[k];
      if (preconditioner) {
        (*preconditioner)(v[k], zs[k]);
        dir = zs[k];
      }
      a(dir, w);
      // Modified Gram-Schmidt.
      for (int i = 0; i <= k; ++i) {
        H(i, k) = dot(w, v[i]);
        axpy(-H(i, k), v[i], w);
      }
      const double hnext = norm2(w);
      H(k + 1, k) = hnext;
      const bool invariant = hnext <= 1e-14 * std::abs(H(k, k)) || hnext == 0.0;
      if (!invariant)
        for (std::size_t i = 0; i < n; ++i) v[k + 1][i] = w[i] / hnext;

      for (int i = 0; i < k; ++i) {
        const double t = cs[i] * H(i, k) + sn[i] * H(i + 1, k);
        H(i + 1, k) = -sn[i] * H(i, k) + cs[i] * H(i + 1, k);
        H(i, k) = t;
      }
      const double denom = std::hypot(H(k, k), H(k + 1, k));
      cs[k] = denom == 0.0 ? 1.0 : H(k, k) / denom;
      sn[k] = denom == 0.0 ? 0.0 : H(k + 1, k) / denom;
      H(k, k) = denom;
      H(k + 1, k) = 0.0;
      g[k + 1] = -sn[k] * g[k];
      g[k] = cs[k] * g[k];

      ++res.iterations;
      res.history.push_back(std::abs(g[k + 1]));
      if (invariant) {
        res.breakdown = true;
        ++k;
        done = true;
        break;
      }
      if (std::abs(g[k + 1]) <= target) {
        ++k;
        done = true;
        break;
      }
    }

    // Solve the k x k triangular system and update x.
    std::vector<double> y(static_cast<std::size_t>(k));
    for (int i = k - 1; i >= 0; --i) {
      double s = g[i];
      for (int j = i + 1; j < k; ++j) s -= H(i, j) * y[j];
      y[i] = H(i, i) == 0.0 ? 0.0 : s / H(i, i);
    }
    for (int j = 0; j < k; ++j) axpy(y[j], preconditioner ? zs[j] : v[j], res.x);

    beta = true_residual();
    if (done && !res.breakdown) {
      // Converged by the Arnoldi residual estimate; final_residual keeps the recomputed value.
      res.converged = true;
      break;
    }
    if (beta <= target) {
      res.converged = true;
      break;
    }
    if (done && res.breakdown) break;
    if (beta > options.stagnation_factor * cycle_start) {
      res.stagnated = true;
      break;
    }
  }
  res.final_residual = beta;
  return res;
}

}  // namespace fams
