/**
 * @file assembly.hpp
 * @brief Fine-scale EDFM pressure system with TPFA fluxes, matrix-fracture
 *        exchange through connectivity indices, and Peaceman-type well terms.
 *
 * Unknowns are ordered [matrix cells | fracture cells, network by network |
 * pressure-controlled wells]. Every flux term is written as T (p_a - p_b), so
 * the operator is symmetric with zero row sums except in well rows.
 *
 * A pressure-controlled well keeps its own unknown p_w. Its row is
 *   sum_perf PI lambda (p_w - p_cell) + C (p_w - p_target) = 0,
 * i.e. the well node is tied to its target through the constraint
 * transmissibility C = penalty * sum_perf PI lambda. Rate-controlled wells are
 * eliminated into the right-hand side of the perforated cells.
 */
#pragma once

#include <span>
#include <vector>

#include "fams/fracture.hpp"
#include "fams/grid.hpp"
#include "fams/sparse_matrix.hpp"
#include "fams/well.hpp"

namespace fams {

enum class ConnectionKind : std::uint8_t { MatrixMatrix, FractureFracture, MatrixFracture, Well };

/// Global-index flux connection. MatrixFracture: a = matrix, b = fracture.
/// Well: a = perforated cell, b = well unknown.
struct Connection {
  int a = 0;
  int b = 0;
  double trans = 0.0;
  ConnectionKind kind = ConnectionKind::MatrixMatrix;
};

struct DofLayout {
  int n_matrix = 0;
  std::vector<int> network_offset;  ///< first global index of each network
  std::vector<int> network_size;
  int n_fracture = 0;
  int n_well = 0;

  int total() const { return n_matrix + n_fracture + n_well; }
  int fracture_begin() const { return n_matrix; }
  int well_begin() const { return n_matrix + n_fracture; }
  Medium medium(int dof) const {
    return dof < n_matrix ? Medium::Matrix : dof < n_matrix + n_fracture ? Medium::Fracture : Medium::Well;
  }
  int network_of(int dof) const;
};

struct PressureWellDof {
  int well = 0;  ///< index into the input well list
  int dof = 0;
  double target = 0.0;
  double constraint_trans = 0.0;  ///< C
};

struct FineSystem {
  SparseMatrix a;
  std::vector<double> q;
  DofLayout layout;
  std::vector<Connection> connections;
  std::vector<PressureWellDof> pressure_wells;
  double mu = 1.0;

  int size() const { return layout.total(); }
  Medium medium(int dof) const { return layout.medium(dof); }
};

struct AssemblyOptions {
  double mu = 1.0;
  double well_penalty = 1e6;
  /// Optional constant volumetric source per matrix/fracture unknown (gravity-type hook).
  std::vector<double> source;
};

/// T = area / (dist_a / k_a + dist_b / k_b). A zero distance drops that side
/// (zero-volume intersection nodes).
double tpfa_transmissibility(double area, double dist_a, double k_a, double dist_b, double k_b);

/// Harmonic mean of the matrix (normal to the plate) and fracture permeabilities.
double interface_permeability(double k_matrix, double k_fracture);

FineSystem assemble(const StructuredGrid& grid, std::span<const FractureNetwork> networks,
                    std::span<const Overlap> overlaps, std::span<const Well> wells,
                    const AssemblyOptions& options = {});

struct TRatioReport {
  double t_frac_avg = 0.0;
  double t_rock_avg = 0.0;
  double ratio = 0.0;
};

/// Mean fracture-fracture transmissibility over mean matrix-matrix transmissibility.
TRatioReport t_ratio(const FineSystem& system);

}  // namespace fams
