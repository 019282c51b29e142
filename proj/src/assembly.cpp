#include "fams/assembly.hpp"

#include <algorithm>
#include <string>

namespace fams {

int DofLayout::network_of(int dof) const {
  for (std::size_t n = 0; n < network_offset.size(); ++n)
    if (dof >= network_offset[n] && dof < network_offset[n] + network_size[n]) return static_cast<int>(n);
  return -1;
}

void validate_well(const Well& well) {
  if (well.perforations.empty()) throw InputError("well '" + well.name + "' has no perforations");
  for (const auto& p : well.perforations) {
    if (!(p.pi > 0.0)) throw InputError("well '" + well.name + "' has a non-positive PI");
    if (p.medium == Medium::Well) throw InputError("well '" + well.name + "' perforates another well");
  }
}

double tpfa_transmissibility(double area, double dist_a, double k_a, double dist_b, double k_b) {
  if (!(area > 0.0)) throw InputError("TPFA: face area must be positive");
  if (dist_a < 0.0 || dist_b < 0.0) throw InputError("TPFA: negative distance");
  if ((dist_a > 0.0 && !(k_a > 0.0)) || (dist_b > 0.0 && !(k_b > 0.0)))
    throw InputError("TPFA: zero permeability");
  const double resistance = (dist_a > 0.0 ? dist_a / k_a : 0.0) + (dist_b > 0.0 ? dist_b / k_b : 0.0);
  if (!(resistance > 0.0)) throw InputError("TPFA: both half-distances are zero");
  return area / resistance;
}

double interface_permeability(double k_matrix, double k_fracture) {
  if (!(k_matrix > 0.0) || !(k_fracture > 0.0)) throw InputError("interface permeability: zero permeability");
  return 2.0 * k_matrix * k_fracture / (k_matrix + k_fracture);
}

FineSystem assemble(const StructuredGrid& grid, std::span<const FractureNetwork> networks,
                    std::span<const Overlap> overlaps, std::span<const Well> wells,
                    const AssemblyOptions& options) {
  if (!(options.mu > 0.0)) throw InputError("viscosity must be positive");
  if (!(options.well_penalty > 0.0)) throw InputError("well penalty must be positive");
  FineSystem sys;
  sys.mu = options.mu;
  auto& lay = sys.layout;
  lay.n_matrix = grid.cell_count();
  for (const auto& net : networks) {
    lay.network_offset.push_back(lay.n_matrix + lay.n_fracture);
    lay.network_size.push_back(net.size());
    lay.n_fracture += net.size();
  }
  for (std::size_t w = 0; w < wells.size(); ++w) {
    validate_well(wells[w]);
    if (wells[w].control == WellControl::Pressure) {
      sys.pressure_wells.push_back({static_cast<int>(w), lay.well_begin() + lay.n_well, wells[w].value, 0.0});
      ++lay.n_well;
    }
  }
  const int n = lay.total();
  const double inv_mu = 1.0 / options.mu;

  // Matrix-matrix.
  for (int k = 0; k < grid.nz(); ++k) {
    for (int j = 0; j < grid.ny(); ++j) {
      for (int i = 0; i < grid.nx(); ++i) {
        const int c = grid.index(i, j, k);
        const auto& kc = grid.perm(c);
        if (i + 1 < grid.nx()) {
          const int d = grid.index(i + 1, j, k);
          sys.connections.push_back({c, d,
                                     inv_mu * tpfa_transmissibility(grid.face_area(0), grid.hx() / 2, kc.kx,
                                                                    grid.hx() / 2, grid.perm(d).kx),
                                     ConnectionKind::MatrixMatrix});
        }
        if (j + 1 < grid.ny()) {
          const int d = grid.index(i, j + 1, k);
          sys.connections.push_back({c, d,
                                     inv_mu * tpfa_transmissibility(grid.face_area(1), grid.hy() / 2, kc.ky,
                                                                    grid.hy() / 2, grid.perm(d).ky),
                                     ConnectionKind::MatrixMatrix});
        }
        if (k + 1 < grid.nz()) {
          const int d = grid.index(i, j, k + 1);
          sys.connections.push_back({c, d,
                                     inv_mu * tpfa_transmissibility(grid.face_area(2), grid.hz() / 2, kc.kz,
                                                                    grid.hz() / 2, grid.perm(d).kz),
                                     ConnectionKind::MatrixMatrix});
        }
      }
    }
  }

  // Fracture-fracture.
  for (std::size_t ni = 0; ni < networks.size(); ++ni) {
    const auto& net = networks[ni];
    const int off = lay.network_offset[ni];
    for (const auto& l : net.links) {
      const auto& ca = net.cells[l.a];
      const auto& cb = net.cells[l.b];
      const double t = tpfa_transmissibility(l.face_area, l.dist_a, ca.perm, l.dist_b, cb.perm);
      sys.connections.push_back({off + l.a, off + l.b, inv_mu * t, ConnectionKind::FractureFracture});
    }
  }

  // Matrix-fracture: CI * lambda^{f-m}. The interface mobility is the harmonic mean of the fracture
  // permeability and the matrix permeability normal to the plate.
  for (const auto& ov : overlaps) {
    if (ov.network < 0 || ov.network >= static_cast<int>(networks.size()))
      throw InputError("overlap references an unknown network");
    const auto& net = networks[ov.network];
    if (ov.frac_cell < 0 || ov.frac_cell >= net.size() || ov.matrix_cell < 0 || ov.matrix_cell >= lay.n_matrix)
      throw InputError("overlap references an invalid cell");
    const auto& fc = net.cells[ov.frac_cell];
    const auto& km = grid.perm(ov.matrix_cell);
    const double dx = fc.end.x - fc.start.x, dy = fc.end.y - fc.start.y;
    const double len2 = dx * dx + dy * dy;
    // Unit normal (-dy, dx) / len.
    const double kn = len2 > 0.0 ? (km.kx * dy * dy + km.ky * dx * dx) / len2 : km.kx;
    const double t = ov.ci * interface_permeability(kn, fc.perm) * inv_mu;
    sys.connections.push_back({ov.matrix_cell, lay.network_offset[ov.network] + ov.frac_cell, t,
                               ConnectionKind::MatrixFracture});
  }

  // Wells.
  sys.q.assign(static_cast<std::size_t>(n), 0.0);
  auto perforated_dof = [&](const Well& w, const Perforation& p) {
    if (p.medium == Medium::Matrix) {
      if (p.cell < 0 || p.cell >= lay.n_matrix) throw InputError("well '" + w.name + "' perforates an invalid matrix cell");
      return p.cell;
    }
    if (p.network < 0 || p.network >= static_cast<int>(networks.size()) || p.cell < 0 ||
        p.cell >= networks[p.network].size())
      throw InputError("well '" + w.name + "' perforates an invalid fracture cell");
    return lay.network_offset[p.network] + p.cell;
  };
  auto mobility = [&](const Perforation& p) {
    if (p.medium == Medium::Matrix) return grid.perm(p.cell).kx * inv_mu;
    return networks[p.network].cells[p.cell].perm * inv_mu;
  };
  std::size_t pw = 0;
  for (const auto& w : wells) {
    if (w.control == WellControl::Pressure) {
      auto& wd = sys.pressure_wells[pw++];
      double total = 0.0;
      for (const auto& p : w.perforations) {
        const double wi = p.pi * mobility(p);
        total += wi;
        sys.connections.push_back({perforated_dof(w, p), wd.dof, wi, ConnectionKind::Well});
      }
      wd.constraint_trans = options.well_penalty * total;
      sys.q[wd.dof] = wd.constraint_trans * wd.target;
    } else {
      double total = 0.0;
      for (const auto& p : w.perforations) total += p.pi * mobility(p);
      for (const auto& p : w.perforations) sys.q[perforated_dof(w, p)] += w.value * p.pi * mobility(p) / total;
    }
  }
  if (!options.source.empty()) {
    if (options.source.size() != static_cast<std::size_t>(lay.n_matrix + lay.n_fracture))
      throw InputError("source hook length must equal matrix + fracture unknowns");
    for (std::size_t i = 0; i < options.source.size(); ++i) sys.q[i] += options.source[i];
  }

  std::vector<Triplet> t;
  t.reserve(4 * sys.connections.size() + sys.pressure_wells.size());
  std::vector<double> diag(static_cast<std::size_t>(n), 0.0);
  for (const auto& c : sys.connections) {
    t.push_back({c.a, c.b, -c.trans});
    t.push_back({c.b, c.a, -c.trans});
    diag[c.a] += c.trans;
    diag[c.b] += c.trans;
  }
  for (const auto& wd : sys.pressure_wells) diag[wd.dof] += wd.constraint_trans;
  for (int i = 0; i < n; ++i) {
    if (diag[i] == 0.0)
      throw InputError("unknown " + std::to_string(i) + " (" + std::string(to_string(lay.medium(i))) +
                       ") has no connections; the system would be singular");
    t.push_back({i, i, diag[i]});
  }
  sys.a = SparseMatrix::from_triplets(n, n, std::move(t));
  return sys;
}

TRatioReport t_ratio(const FineSystem& system) {
  double tf = 0.0, tm = 0.0;
  std::size_t nf = 0, nm = 0;
  for (const auto& c : system.connections) {
    if (c.kind == ConnectionKind::FractureFracture) {
      tf += c.trans;
      ++nf;
    } else if (c.kind == ConnectionKind::MatrixMatrix) {
      tm += c.trans;
      ++nm;
    }
  }
  if (nf == 0 || nm == 0) throw InputError("T_ratio needs fracture-fracture and matrix-matrix connections");
  TRatioReport r;
  r.t_frac_avg = tf / static_cast<double>(nf);
  r.t_rock_avg = tm / static_cast<double>(nm);
  r.ratio = r.t_frac_avg / r.t_rock_avg;
  return r;
}

}  // namespace fams
