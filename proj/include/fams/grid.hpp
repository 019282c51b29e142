/**
 * @file grid.hpp
 * @brief Uniform Cartesian matrix grid with cell-wise diagonal permeability.
 */
#pragma once

#include <array>
#include <vector>

#include "fams/types.hpp"

namespace fams {

struct Permeability {
  double kx = 1.0;
  double ky = 1.0;
  double kz = 1.0;
};

struct GridSpec {
  int nx = 1;
  int ny = 1;
  int nz = 1;
  double hx = 1.0;
  double hy = 1.0;
  double hz = 1.0;
  /// One entry per cell, x fastest then y then z.
  std::vector<Permeability> perm;
};

/// Cells are indexed c = i + nx (j + ny k). A grid with nz == 1 is two-dimensional
/// with thickness hz.
class StructuredGrid {
 public:
  explicit StructuredGrid(GridSpec spec);

  int nx() const { return spec_.nx; }
  int ny() const { return spec_.ny; }
  int nz() const { return spec_.nz; }
  double hx() const { return spec_.hx; }
  double hy() const { return spec_.hy; }
  double hz() const { return spec_.hz; }
  int dim() const { return spec_.nz == 1 ? 2 : 3; }
  int cell_count() const { return spec_.nx * spec_.ny * spec_.nz; }

  int index(int i, int j, int k) const { return i + spec_.nx * (j + spec_.ny * k); }
  std::array<int, 3> ijk(int cell) const {
    return {cell % spec_.nx, (cell / spec_.nx) % spec_.ny, cell / (spec_.nx * spec_.ny)};
  }

  const Permeability& perm(int cell) const { return spec_.perm[cell]; }
  const std::vector<Permeability>& perms() const { return spec_.perm; }
  double volume() const { return spec_.hx * spec_.hy * spec_.hz; }
  /// Area of a face normal to the given axis (0 = x, 1 = y, 2 = z).
  double face_area(int axis) const;
  double spacing(int axis) const;
  Vec3 center(int cell) const;
  Vec3 extent() const { return {spec_.nx * spec_.hx, spec_.ny * spec_.hy, spec_.nz * spec_.hz}; }

  /// Returns a copy with every permeability component multiplied by factor.
  StructuredGrid scaled(double factor) const;
  const GridSpec& spec() const { return spec_; }

 private:
  GridSpec spec_;
};

/// Validates and builds; an empty permeability raster means homogeneous k = 1.
StructuredGrid build_grid(const GridSpec& spec);

}  // namespace fams
