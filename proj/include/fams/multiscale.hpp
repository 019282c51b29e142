/**
 * @file multiscale.hpp
 * @brief Prolongation (basis functions) for the four matrix-fracture coupling
 *        strategies, truncation, restriction and the coarse system.
 *
 * Basis functions are built by block back-substitution over the wirebasket
 * hierarchy: vertex and well rows are unit rows, then each lower class is
 * solved dual block by dual block, with higher-ranked neighbours entering the
 * right-hand side and lower-ranked (or otherwise neglected) couplings removed
 * from the diagonal. The strategy decides how matrix and fracture rows see each
 * other:
 *
 *   Decoupled  media independent; P^{mf} = P^{fm} = 0
 *   Frac       fractures first, matrix rows see fracture values; P^{fm} = 0
 *   Rock       matrix first, fracture rows see matrix values; P^{mf} = 0
 *   Coupled    same-class dual blocks of both media merged and solved together
 */
#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string_view>
#include <vector>

#include "fams/assembly.hpp"
#include "fams/coarsen.hpp"
#include "fams/direct_solver.hpp"
#include "fams/sparse_matrix.hpp"

namespace fams {

enum class Strategy : std::uint8_t { Decoupled, Frac, Rock, Coupled };
enum class RestrictionKind : std::uint8_t { FV, FE, MIX };

std::string_view to_string(Strategy s);
std::string_view to_string(RestrictionKind k);
/// Case-insensitive; throws InputError on unknown names.
Strategy parse_strategy(std::string_view name);
RestrictionKind parse_restriction(std::string_view name);

struct Prolongation {
  SparseMatrix p;  ///< N_fine x N_coarse
  Strategy strategy = Strategy::Decoupled;
  std::vector<int> column_node;       ///< coarse unknown -> fine node
  std::vector<Medium> column_medium;  ///< coarse unknown -> medium of its node
};

/// merged is only used by the Coupled strategy; it is computed (without cap)
/// when not supplied. Throws SingularMatrixError on a singular local block.
Prolongation build_prolongation(const FineSystem& system, const CoarseHierarchy& hierarchy, Strategy strategy,
                                const MergedDuals* merged = nullptr);

/// Removes entries with |value| < alpha and rescales each row to sum to one.
/// alpha = 0 returns P unchanged. Throws InputError for alpha outside [0, 1)
/// or when a row loses all its entries.
Prolongation truncate_rescale(const Prolongation& p, double alpha);

struct Restriction {
  SparseMatrix r;  ///< N_coarse x N_fine
  RestrictionKind kind = RestrictionKind::FV;
};

/// MIX: rows of coarse unknowns whose medium is in fv_media are finite-volume
/// indicators, the others are rows of P^T.
Restriction build_restriction(const CoarseHierarchy& hierarchy, RestrictionKind kind, const Prolongation& p,
                              const std::set<Medium>& fv_media = {Medium::Fracture, Medium::Well});

class CoarseSystem {
 public:
  /// Ac = R A P; throws SingularMatrixError when Ac cannot be factored.
  CoarseSystem(const SparseMatrix& a, const Prolongation& p, const Restriction& r);

  const SparseMatrix& matrix() const { return ac_; }
  int size() const { return ac_.rows(); }
  std::vector<double> solve(std::span<const double> rc) const { return lu_.solve(rc); }

 private:
  static SparseLu factor(const SparseMatrix& ac);

  SparseMatrix ac_;
  SparseLu lu_;
};

}  // namespace fams
