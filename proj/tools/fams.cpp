// Command-line front end: solve, sweep, bench, grids.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fams/direct_solver.hpp"
#include "fams/experiments.hpp"
#include "fams/output.hpp"
#include "fams/scenario.hpp"
#include "fams/solver.hpp"

namespace {

using namespace fams;

struct Overrides {
  std::string strategy, restriction, ratio, dmin, mode;
  std::optional<double> alpha, tol;
  std::optional<int> max_it;
  std::optional<long long> seed;
};

void add_overrides(CLI::App* app, Overrides& o) {
  app->add_option("--strategy", o.strategy, "decoupled|frac|rock|coupled");
  app->add_option("--restriction", o.restriction, "fv|fe|mix");
  app->add_option("--alpha", o.alpha, "basis truncation threshold");
  app->add_option("--ratio", o.ratio, "matrix coarsening ratio NxNxN");
  app->add_option("--dmin", o.dmin, "fracture coarse node distance (N or inf)");
  app->add_option("--mode", o.mode, "richardson|gmres");
  app->add_option("--tol", o.tol, "absolute residual 2-norm tolerance");
  app->add_option("--max-it", o.max_it, "iteration limit");
  app->add_option("--seed", o.seed, "seed for generated permeability and fractures");
}

void apply_overrides(Scenario& s, const Overrides& o) {
  auto& c = s.solver;
  if (!o.strategy.empty()) c.strategy = parse_strategy(o.strategy);
  if (!o.restriction.empty()) c.restriction = parse_restriction(o.restriction);
  if (!o.ratio.empty()) c.ratio = parse_ratio(o.ratio);
  if (!o.dmin.empty()) c.d_min = parse_d_min(o.dmin);
  if (!o.mode.empty()) c.mode = parse_mode(o.mode);
  if (o.alpha) c.alpha = *o.alpha;
  if (o.tol) c.tol = *o.tol;
  if (o.max_it) c.max_it = *o.max_it;
  if (o.seed) {
    if (*o.seed < 0) throw InputError("--seed must be non-negative");
    s.perm.seed = static_cast<std::uint64_t>(*o.seed);
    if (s.generator) s.generator->seed = static_cast<std::uint64_t>(*o.seed);
  }
  c.validate();
}

int cmd_solve(const std::string& path, const Overrides& o, const std::filesystem::path& out, bool timing,
              bool reference, bool flux) {
  auto s = load_scenario(path);
  apply_overrides(s, o);
  const auto pb = build_problem(s);
  std::vector<double> ref;
  if (reference) ref = reference_solution(pb.system);
  auto res = fams_solve(pb.grid, pb.fractures.networks, pb.system, s.solver, ref);
  auto& rep = res.report;
  rep.times.fine_system += pb.assembly_time;
  rep.total_time += pb.assembly_time;

  auto vtk = open_output(out / "pressure.vtk");
  write_vtk(vtk, pb.grid, res.p);
  auto fr = open_output(out / "fractures.csv");
  write_fracture_csv(fr, pb, res.p);
  auto wl = open_output(out / "wells.csv");
  write_well_csv(wl, pb, res.p);
  auto hist = open_output(out / "history.csv");
  write_history_csv(hist, rep, timing);
  if (timing) {
    auto st = open_output(out / "stages.csv");
    write_stage_csv(st, rep);
  }

  std::printf("unknowns %d (matrix %d, fracture %d, well %d), coarse %d\n", pb.system.size(),
              pb.system.layout.n_matrix, pb.system.layout.n_fracture, pb.system.layout.n_well, rep.coarse_size);
  std::printf("%s %s: %d iterations, residual %.3e, %s\n", std::string(to_string(s.solver.strategy)).c_str(),
              std::string(to_string(s.solver.mode)).c_str(), rep.iterations, rep.final_residual,
              rep.converged ? "converged" : rep.stagnated ? "not converged (stagnation)" : "not converged");
  if (rep.relative_error) std::printf("relative error vs direct solve %.3e\n", *rep.relative_error);

  if (flux) {
    SolverConfig fv = s.solver;
    fv.restriction = RestrictionKind::FV;
    FamsPreconditioner pre(pb.grid, pb.fractures.networks, pb.system, fv);
    const auto pp = conservative_pressure(pb.system, pre, res.p);
    const auto f = reconstruct_flux(pb.system, pre.hierarchy(), pp);
    auto fo = open_output(out / "flux.csv");
    fo.precision(17);
    fo << "a,b,kind,flux\n";
    const char* kinds[] = {"mm", "ff", "mf", "well"};
    for (std::size_t e = 0; e < f.flux.size(); ++e) {
      const auto& c = pb.system.connections[e];
      fo << c.a << ',' << c.b << ',' << kinds[static_cast<int>(c.kind)] << ',' << f.flux[e] << '\n';
    }
    std::printf("flux: max |div| %.3e (max |flux| %.3e), global imbalance %.3e\n", f.max_divergence,
                f.max_abs_flux, f.imbalance);
  }
  return rep.converged ? 0 : 2;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

int cmd_sweep(const std::string& path, const Overrides& o, const std::filesystem::path& out, bool timing,
              const std::string& axis_name, const std::string& values, int jobs) {
  auto s = load_scenario(path);
  apply_overrides(s, o);
  const auto axis = parse_axis(axis_name);
  const auto pts = sweep_points(s, axis, split_list(values));
  const auto rows = run_sweep(pts, std::min(jobs, thread_cap()));
  auto f = open_output(out / ("sweep_" + to_string(axis) + ".csv"));
  write_sweep_csv(f, rows, timing);
  for (const auto& r : rows)
    std::printf("%s=%s: %d iterations%s\n", to_string(axis).c_str(), r.label.c_str(), r.iterations,
                r.converged ? "" : r.stagnated ? " (stagnated)" : " (not converged)");
  return 0;
}

int cmd_bench(const std::string& path, const Overrides& o, const std::filesystem::path& out, bool timing,
              const std::string& baseline) {
  auto s = load_scenario(path);
  apply_overrides(s, o);
  const auto cols = run_bench(s, parse_baseline(baseline));
  auto f = open_output(out / "bench.csv");
  write_bench_csv(f, cols, timing);
  for (const auto& c : cols)
    std::printf("%s: %d iterations, %s\n", c.name.c_str(), c.iterations, c.converged ? "converged" : "not converged");
  return 0;
}

int cmd_grids(const std::string& path, const Overrides& o, const std::filesystem::path& out) {
  auto s = load_scenario(path);
  apply_overrides(s, o);
  const auto pb = build_problem(s);
  const auto& c = s.solver;
  const auto h = build_hierarchy(pb.grid, pb.fractures.networks, pb.system, {c.ratio, c.d_min, c.ratio_z});
  auto f = open_output(out / "grids.csv");
  write_grids_csv(f, pb, h);
  std::printf("coarse unknowns %d (matrix %d, fracture %d, well %d), dual blocks %d\n", h.n_coarse(),
              h.n_coarse_matrix, h.n_coarse() - h.n_coarse_matrix - h.n_coarse_well, h.n_coarse_well,
              h.dual_block_count);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Algebraic multiscale pressure solver for fractured porous media"};
  app.require_subcommand(1);

  std::string scenario;
  Overrides o;
  std::string out = "out";
  bool no_timing = false;
  bool reference = false, flux = false;
  std::string axis, values, baseline = "ilu0-gmres";
  int jobs = 1;

  auto common = [&](CLI::App* sub) {
    sub->add_option("scenario", scenario, "scenario JSON file")->required();
    sub->add_option("--out", out, "output directory");
    sub->add_flag("--no-timing", no_timing, "omit wall-clock columns so outputs are reproducible");
    add_overrides(sub, o);
  };
  auto* solve = app.add_subcommand("solve", "run one solve");
  common(solve);
  solve->add_flag("--reference", reference, "compare with a sparse direct solve");
  solve->add_flag("--flux", flux, "final FV stage and conservative flux reconstruction");
  auto* sweep = app.add_subcommand("sweep", "parameter sweep");
  common(sweep);
  sweep->add_option("--axis", axis, "alpha|t_ratio|ratio|d_min|scale|density")->required();
  sweep->add_option("--values", values, "comma separated values replacing the scenario's list");
  sweep->add_option("--jobs", jobs, "concurrent sweep points (capped by FAMS_THREADS)");
  auto* bench = app.add_subcommand("bench", "compare with ILU(0)-preconditioned GMRES");
  common(bench);
  bench->add_option("--baseline", baseline, "ilu0-gmres|none");
  auto* grids = app.add_subcommand("grids", "dump primal/dual coarse grids");
  common(grids);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*solve) return cmd_solve(scenario, o, out, !no_timing, reference, flux);
    if (*sweep) return cmd_sweep(scenario, o, out, !no_timing, axis, values, jobs);
    if (*bench) return cmd_bench(scenario, o, out, !no_timing, baseline);
    if (*grids) return cmd_grids(scenario, o, out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "fams: error: %s\n", e.what());
    return 1;
  }
  return 1;
}
