#include "fams/grid.hpp"

#include <string>

namespace fams {

StructuredGrid::StructuredGrid(GridSpec spec) : spec_(std::move(spec)) {
  if (spec_.nx < 1 || spec_.ny < 1 || spec_.nz < 1) throw InputError("grid cell counts must be >= 1");
  if (!(spec_.hx > 0.0) || !(spec_.hy > 0.0) || !(spec_.hz > 0.0))
    throw InputError("grid cell sizes must be positive");
  const auto n = static_cast<std::size_t>(spec_.nx) * spec_.ny * spec_.nz;
  if (spec_.perm.empty()) spec_.perm.assign(n, Permeability{});
  if (spec_.perm.size() != n)
    throw InputError("permeability raster has " + std::to_string(spec_.perm.size()) +
                     " entries, grid has " + std::to_string(n) + " cells");
  for (std::size_t c = 0; c < n; ++c) {
    const auto& k = spec_.perm[c];
    if (!(k.kx > 0.0) || !(k.ky > 0.0) || !(k.kz > 0.0))
      throw InputError("non-positive permeability in cell " + std::to_string(c));
  }
}

double StructuredGrid::spacing(int axis) const {
  return axis == 0 ? spec_.hx : axis == 1 ? spec_.hy : spec_.hz;
}

double StructuredGrid::face_area(int axis) const {
  switch (axis) {
    case 0: return spec_.hy * spec_.hz;
    case 1: return spec_.hx * spec_.hz;
    default: return spec_.hx * spec_.hy;
  }
}

Vec3 StructuredGrid::center(int cell) const {
  const auto [i, j, k] = ijk(cell);
  return {(i + 0.5) * spec_.hx, (j + 0.5) * spec_.hy, (k + 0.5) * spec_.hz};
}

StructuredGrid StructuredGrid::scaled(double factor) const {
  GridSpec s = spec_;
  for (auto& k : s.perm) {
    k.kx *= factor;
    k.ky *= factor;
    k.kz *= factor;
  }
  return StructuredGrid(std::move(s));
}

StructuredGrid build_grid(const GridSpec& spec) { return StructuredGrid(spec); }

}  // namespace fams
