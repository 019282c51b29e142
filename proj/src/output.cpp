#include "fams/output.hpp"

#include <fstream>
#include <iomanip>

namespace fams {

namespace {

void set_precision(std::ostream& out) { out << std::setprecision(17); }

}  // namespace

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw InputError("cannot create directory '" + path.parent_path().string() + "'");
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  return out;
}

void write_vtk(std::ostream& out, const StructuredGrid& grid, std::span<const double> p, const std::string& title) {
  const int n = grid.cell_count();
  if (static_cast<int>(p.size()) < n) throw InputError("VTK: pressure vector too short");
  set_precision(out);
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET STRUCTURED_POINTS\n";
  out << "DIMENSIONS " << grid.nx() + 1 << ' ' << grid.ny() + 1 << ' ' << grid.nz() + 1 << '\n';
  out << "ORIGIN 0 0 0\n";
  out << "SPACING " << grid.hx() << ' ' << grid.hy() << ' ' << grid.hz() << '\n';
  out << "CELL_DATA " << n << '\n';
  out << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
  for (int c = 0; c < n; ++c) out << p[c] << '\n';
  out << "SCALARS kx double 1\nLOOKUP_TABLE default\n";
  for (int c = 0; c < n; ++c) out << grid.perm(c).kx << '\n';
}

void write_fracture_csv(std::ostream& out, const Problem& pb, std::span<const double> p) {
  set_precision(out);
  out << "network,cell,plate,layer,intersection,x0,y0,x1,y1,z,pressure\n";
  const auto& lay = pb.system.layout;
  for (std::size_t ni = 0; ni < pb.fractures.networks.size(); ++ni) {
    const auto& net = pb.fractures.networks[ni];
    for (int c = 0; c < net.size(); ++c) {
      const auto& fc = net.cells[c];
      out << ni << ',' << c << ',' << fc.plate << ',' << fc.layer << ',' << (fc.intersection ? 1 : 0) << ','
          << fc.start.x << ',' << fc.start.y << ',' << fc.end.x << ',' << fc.end.y << ',' << fc.centroid.z << ','
          << p[lay.network_offset[ni] + c] << '\n';
    }
  }
}

void write_well_csv(std::ostream& out, const Problem& pb, std::span<const double> p) {
  set_precision(out);
  out << "name,control,unknown,pressure,rate\n";
  const auto& sys = pb.system;
  for (std::size_t w = 0; w < pb.wells.size(); ++w) {
    const auto& well = pb.wells[w];
    if (well.control == WellControl::Rate) {
      out << well.name << ",rate,-1,," << well.value << '\n';
      continue;
    }
    for (const auto& pw : sys.pressure_wells) {
      if (pw.well != static_cast<int>(w)) continue;
      double rate = 0.0;
      for (const auto& c : sys.connections)
        if (c.kind == ConnectionKind::Well && c.b == pw.dof) rate += c.trans * (p[pw.dof] - p[c.a]);
      out << well.name << ",pressure," << pw.dof << ',' << p[pw.dof] << ',' << rate << '\n';
    }
  }
}

void write_history_csv(std::ostream& out, const SolveReport& r, bool with_time) {
  set_precision(out);
  out << (with_time ? "iteration,residual,time_s\n" : "iteration,residual\n");
  for (std::size_t i = 0; i < r.history.size(); ++i) {
    out << i << ',' << r.history[i];
    if (with_time) out << ',' << (i < r.history_time.size() ? r.history_time[i] : 0.0);
    out << '\n';
  }
}

void write_stage_csv(std::ostream& out, const SolveReport& r) {
  set_precision(out);
  out << "stage,seconds\n";
  const auto v = r.times.values();
  for (std::size_t i = 0; i < v.size(); ++i) out << '"' << StageTimes::labels[i] << "\"," << v[i] << '\n';
  out << "\"Total\"," << r.total_time << '\n';
}

void write_grids_csv(std::ostream& out, const Problem& pb, const CoarseHierarchy& h) {
  out << "unknown,medium,network,local,primal,class,dual_block\n";
  const auto& lay = pb.system.layout;
  for (int i = 0; i < h.n_fine(); ++i) {
    const Medium m = h.medium_of[i];
    int net = -1, local = i;
    if (m == Medium::Fracture) {
      net = lay.network_of(i);
      local = i - lay.network_offset[net];
    } else if (m == Medium::Well) {
      local = i - lay.well_begin();
    }
    out << i << ',' << to_string(m) << ',' << net << ',' << local << ',' << h.primal_of[i] << ','
        << to_string(h.class_of[i]) << ',' << h.dual_block_of[i] << '\n';
  }
}

}  // namespace fams
