/**
 * @file solver.hpp
 * @brief Two-stage F-AMS iteration (multiscale correction followed by ILU(0)
 *        smoothing), used stand-alone (Richardson) or as a GMRES preconditioner,
 *        plus conservative flux reconstruction.
 */
#pragma once

#include <array>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "fams/assembly.hpp"
#include "fams/coarsen.hpp"
#include "fams/fracture.hpp"
#include "fams/gmres.hpp"
#include "fams/grid.hpp"
#include "fams/ilu0.hpp"
#include "fams/multiscale.hpp"

namespace fams {

enum class SolveMode : std::uint8_t { Richardson, Gmres };

std::string_view to_string(SolveMode m);
SolveMode parse_mode(std::string_view name);

struct SolverConfig {
  Strategy strategy = Strategy::Frac;
  RestrictionKind restriction = RestrictionKind::FE;
  std::set<Medium> mix_fv_media{Medium::Fracture, Medium::Well};
  double alpha = 1e-2;
  std::array<int, 3> ratio{5, 5, 5};
  int d_min = 4;
  int ratio_z = 0;  ///< 0: use ratio[2]
  std::optional<int> merge_cap;
  SolveMode mode = SolveMode::Richardson;
  double tol = 1e-6;
  int max_it = 500;
  int smoother_sweeps = 1;
  int gmres_restart = 50;
  int stagnation_window = 20;
  double stagnation_reduction = 0.01;

  /// Throws InputError on inconsistent settings.
  void validate() const;
};

/// Wall-clock seconds per stage.
struct StageTimes {
  double initialization = 0.0;
  double operators = 0.0;
  double fine_system = 0.0;
  double coarse_system = 0.0;
  double solution = 0.0;
  double smoother = 0.0;

  double sum() const { return initialization + operators + fine_system + coarse_system + solution + smoother; }
  static constexpr std::array<const char*, 6> labels{
      "Initialization", "Operators", "Fine linsys. constr.", "Coarse linsys. constr.", "Solution", "Smoother"};
  std::array<double, 6> values() const {
    return {initialization, operators, fine_system, coarse_system, solution, smoother};
  }
};

struct SolveReport {
  int iterations = 0;
  std::vector<double> history;  ///< residual 2-norm, entry 0 before the first iteration
  std::vector<double> history_time;  ///< cumulative seconds at each history entry
  bool converged = false;
  bool stagnated = false;
  double final_residual = 0.0;  ///< recomputed ||q - A p||_2 of the returned solution
  StageTimes times;
  double total_time = 0.0;
  std::optional<double> relative_error;  ///< vs a supplied reference
  int coarse_size = 0;
  std::size_t prolongation_nnz = 0;
};

struct SolveResult {
  std::vector<double> p;
  SolveReport report;
};

/// Multiscale operators for one fine system. apply() is one F-AMS iteration on
/// a residual (coarse correction, residual update, smoothing sweeps) and is a
/// fixed linear operator, so it can precondition GMRES.
class FamsPreconditioner {
 public:
  FamsPreconditioner(const StructuredGrid& grid, std::span<const FractureNetwork> networks,
                     const FineSystem& system, const SolverConfig& config, StageTimes* times = nullptr);

  /// z = P Ac^{-1} R r
  void multiscale_stage(std::span<const double> r, std::span<double> z) const;
  /// z = M^{-1} r (multiscale stage followed by smoothing of the updated residual)
  void apply(std::span<const double> r, std::span<double> z) const;
  /// P c0 with c0 the target pressures on the well columns and zero elsewhere.
  std::vector<double> initial_guess() const;

  const CoarseHierarchy& hierarchy() const { return hierarchy_; }
  const Prolongation& prolongation() const { return p_; }
  const Restriction& restriction() const { return r_; }
  const CoarseSystem& coarse() const { return *coarse_; }
  const Ilu0Factor& smoother() const { return *ilu_; }
  const SolverConfig& config() const { return config_; }

 private:
  const FineSystem& system_;
  SolverConfig config_;
  CoarseHierarchy hierarchy_;
  Prolongation p_;
  Restriction r_;
  std::optional<CoarseSystem> coarse_;
  std::optional<Ilu0Factor> ilu_;
  StageTimes* times_ = nullptr;  ///< accumulates smoother/solution time during apply()
};

/// p = 0 in cells, target pressure in pressure-well unknowns (used by the ILU(0) baseline).
std::vector<double> initial_guess(const FineSystem& system);

SolveResult fams_solve(const StructuredGrid& grid, std::span<const FractureNetwork> networks,
                       const FineSystem& system, const SolverConfig& config,
                       std::span<const double> reference = {});

/// ||p' - reference||_2 with p' the result of one multiscale stage from the initial guess.
double single_pass_error(const StructuredGrid& grid, std::span<const FractureNetwork> networks,
                         const FineSystem& system, const SolverConfig& config, std::span<const double> reference);

/// Sparse-LU reference solution.
std::vector<double> reference_solution(const FineSystem& system);

struct BaselineResult {
  std::vector<double> p;
  int iterations = 0;
  std::vector<double> history;
  bool converged = false;
  double setup_time = 0.0;
  double solve_time = 0.0;
};

/// GMRES preconditioned by ILU(0) alone.
BaselineResult ilu0_gmres(const FineSystem& system, double tol, int max_it, int restart = 50);

struct FluxField {
  std::vector<double> flux;        ///< per system connection, positive from a to b
  std::vector<double> divergence;  ///< per unknown: net outflow minus source (wells excluded)
  double max_abs_flux = 0.0;
  double max_divergence = 0.0;  ///< over source-free matrix/fracture cells
  double sources = 0.0;         ///< sum of cell sources
  double well_outflow = 0.0;    ///< sum of fluxes from cells into pressure wells
  double imbalance = 0.0;       ///< |sources - well_outflow| / (sum of |sources| + |well fluxes|)
};

/// p' must come from an FV multiscale stage. Fluxes across primal block
/// boundaries are taken from p'; inside each block a Neumann problem with those
/// boundary fluxes gives the interior pressure. Throws InputError if a local
/// problem violates compatibility.
FluxField reconstruct_flux(const FineSystem& system, const CoarseHierarchy& hierarchy,
                           std::span<const double> p_prime);

/// p' = p + P Ac^{-1} R (q - A p); requires FV restriction.
std::vector<double> conservative_pressure(const FineSystem& system, const FamsPreconditioner& pre,
                                          std::span<const double> p);

}  // namespace fams
