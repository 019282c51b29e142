#include "fams/solver.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <string>

#include "fams/direct_solver.hpp"

namespace fams {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

std::string_view to_string(SolveMode m) { return m == SolveMode::Richardson ? "richardson" : "gmres"; }

SolveMode parse_mode(std::string_view name) {
  std::string n(name);
  for (auto& ch : n) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (n == "richardson") return SolveMode::Richardson;
  if (n == "gmres") return SolveMode::Gmres;
  throw InputError("unknown mode '" + std::string(name) + "' (richardson, gmres)");
}

void SolverConfig::validate() const {
  if (!(tol > 0.0)) throw InputError("tol must be positive");
  if (max_it < 0) throw InputError("max_it must be non-negative");
  for (int r : ratio)
    if (r < 1) throw InputError("coarsening ratios must be >= 1");
  if (ratio_z < 0) throw InputError("ratio_z must be >= 0");
  if (d_min < 1) throw InputError("d_min must be >= 1");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw InputError("alpha must lie in [0, 1)");
  if (smoother_sweeps < 0) throw InputError("smoother sweeps must be >= 0");
  if (gmres_restart < 1) throw InputError("GMRES restart must be >= 1");
  if (stagnation_window < 1) throw InputError("stagnation window must be >= 1");
}

FamsPreconditioner::FamsPreconditioner(const StructuredGrid& grid, std::span<const FractureNetwork> networks,
                                       const FineSystem& system, const SolverConfig& config, StageTimes* times)
    : system_(system), config_(config), times_(times) {
  StageTimes local;
  StageTimes& t = times ? *times : local;
  auto t0 = Clock::now();
  config_.validate();
  hierarchy_ = build_hierarchy(grid, networks, system, {config_.ratio, config_.d_min, config_.ratio_z});
  std::optional<MergedDuals> merged;
  if (config_.strategy == Strategy::Coupled) merged = merge_duals(hierarchy_, system, config_.merge_cap);
  t.initialization += seconds_since(t0);

  t0 = Clock::now();
  p_ = truncate_rescale(build_prolongation(system, hierarchy_, config_.strategy, merged ? &*merged : nullptr),
                        config_.alpha);
  r_ = build_restriction(hierarchy_, config_.restriction, p_, config_.mix_fv_media);
  t.operators += seconds_since(t0);

  t0 = Clock::now();
  coarse_.emplace(system.a, p_, r_);
  t.coarse_system += seconds_since(t0);

  t0 = Clock::now();
  ilu_.emplace(system.a);
  t.smoother += seconds_since(t0);
}

void FamsPreconditioner::multiscale_stage(std::span<const double> r, std::span<double> z) const {
  const auto rc = spmv(r_.r, r);
  const auto xc = coarse_->solve(rc);
  spmv(p_.p, xc, z);
}

void FamsPreconditioner::apply(std::span<const double> r, std::span<double> z) const {
  auto t0 = Clock::now();
  multiscale_stage(r, z);
  const std::size_t n = r.size();
  std::vector<double> rr(n), dz(n);
  if (times_) {
    times_->solution += seconds_since(t0);
    t0 = Clock::now();
  }
  for (int s = 0; s < config_.smoother_sweeps; ++s) {
    spmv(system_.a, z, rr);
    for (std::size_t i = 0; i < n; ++i) rr[i] = r[i] - rr[i];
    ilu_->apply(rr, dz);
    for (std::size_t i = 0; i < n; ++i) z[i] += dz[i];
  }
  if (times_) times_->smoother += seconds_since(t0);
}

std::vector<double> FamsPreconditioner::initial_guess() const {
  std::vector<double> c(static_cast<std::size_t>(hierarchy_.n_coarse()), 0.0);
  for (const auto& w : system_.pressure_wells) c[hierarchy_.coarse_of_node[w.dof]] = w.target;
  return spmv(p_.p, c);
}

std::vector<double> initial_guess(const FineSystem& system) {
  std::vector<double> p(static_cast<std::size_t>(system.size()), 0.0);
  for (const auto& w : system.pressure_wells) p[w.dof] = w.target;
  return p;
}

std::vector<double> reference_solution(const FineSystem& system) { return lu_solve(system.a, system.q); }

SolveResult fams_solve(const StructuredGrid& grid, std::span<const FractureNetwork> networks,
                       const FineSystem& system, const SolverConfig& config, std::span<const double> reference) {
  const auto start = Clock::now();
  SolveResult out;
  auto& rep = out.report;
  FamsPreconditioner pre(grid, networks, system, config, &rep.times);
  rep.coarse_size = pre.coarse().size();
  rep.prolongation_nnz = pre.prolongation().p.nnz();

  auto t0 = Clock::now();
  out.p = pre.initial_guess();
  auto r = residual(system.a, out.p, system.q);
  const std::size_t n = r.size();
  rep.times.solution += seconds_since(t0);
  const auto cfg = pre.config();

  if (cfg.mode == SolveMode::Richardson) {
    rep.history.push_back(norm2(r));
    rep.history_time.push_back(seconds_since(start));
    std::vector<double> z(n);
    while (rep.iterations < cfg.max_it && rep.history.back() > cfg.tol) {
      pre.apply(r, z);
      t0 = Clock::now();
      for (std::size_t i = 0; i < n; ++i) out.p[i] += z[i];
      r = residual(system.a, out.p, system.q);
      const double rn = norm2(r);
      ++rep.iterations;
      rep.history.push_back(rn);
      rep.times.solution += seconds_since(t0);
      rep.history_time.push_back(seconds_since(start));
      if (!std::isfinite(rn)) {
        rep.stagnated = true;
        break;
      }
      const int w = cfg.stagnation_window;
      if (rep.iterations >= w && rn > (1.0 - cfg.stagnation_reduction) * rep.history[rep.iterations - w]) {
        rep.stagnated = true;
        break;
      }
    }
    rep.converged = rep.history.back() <= cfg.tol;
    rep.final_residual = rep.history.back();
  } else {
    GmresOptions opt;
    opt.tol = cfg.tol;
    opt.max_it = cfg.max_it;
    opt.restart = cfg.gmres_restart;
    std::vector<double> stamps{seconds_since(start)};
    LinearOperator m = [&](std::span<const double> x, std::span<double> y) {
      pre.apply(x, y);
      stamps.push_back(seconds_since(start));
    };
    // GMRES time outside the preconditioner (Arnoldi, SpMV) counts as Solution.
    const StageTimes before = rep.times;
    t0 = Clock::now();
    auto g = gmres(as_operator(system.a), system.q, out.p, &m, opt);
    const double elapsed = seconds_since(t0);
    const double inside = (rep.times.solution - before.solution) + (rep.times.smoother - before.smoother);
    rep.times.solution += std::max(0.0, elapsed - inside);
    out.p = std::move(g.x);
    rep.iterations = g.iterations;
    rep.history = std::move(g.history);
    stamps.resize(rep.history.size(), stamps.back());
    rep.history_time = std::move(stamps);
    rep.converged = g.converged;
    rep.stagnated = !g.converged;
    rep.final_residual = g.final_residual;
  }

  if (!reference.empty()) {
    if (reference.size() != n) throw InputError("reference solution has the wrong length");
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = out.p[i] - reference[i];
    const double rn = norm2(reference);
    rep.relative_error = rn > 0.0 ? norm2(d) / rn : norm2(d);
  }
  rep.total_time = seconds_since(start);
  return out;
}

double single_pass_error(const StructuredGrid& grid, std::span<const FractureNetwork> networks,
                         const FineSystem& system, const SolverConfig& config, std::span<const double> reference) {
  FamsPreconditioner pre(grid, networks, system, config);
  auto p = pre.initial_guess();
  if (reference.size() != p.size()) throw InputError("reference solution has the wrong length");
  const auto r = residual(system.a, p, system.q);
  std::vector<double> z(p.size());
  pre.multiscale_stage(r, z);
  for (std::size_t i = 0; i < p.size(); ++i) p[i] += z[i] - reference[i];
  return norm2(p);
}

BaselineResult ilu0_gmres(const FineSystem& system, double tol, int max_it, int restart) {
  BaselineResult out;
  auto t0 = Clock::now();
  Ilu0Factor ilu(system.a);
  out.setup_time = seconds_since(t0);
  t0 = Clock::now();
  LinearOperator m = [&](std::span<const double> x, std::span<double> y) { ilu.apply(x, y); };
  GmresOptions opt;
  opt.tol = tol;
  opt.max_it = max_it;
  opt.restart = restart;
  auto g = gmres(as_operator(system.a), system.q, initial_guess(system), &m, opt);
  out.solve_time = seconds_since(t0);
  out.p = std::move(g.x);
  out.iterations = g.iterations;
  out.history = std::move(g.history);
  out.converged = g.converged;
  return out;
}

std::vector<double> conservative_pressure(const FineSystem& system, const FamsPreconditioner& pre,
                                          std::span<const double> p) {
  if (pre.restriction().kind != RestrictionKind::FV)
    throw InputError("conservative flux reconstruction requires the FV restriction");
  const auto r = residual(system.a, p, system.q);
  std::vector<double> out(p.begin(), p.end()), z(p.size());
  pre.multiscale_stage(r, z);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += z[i];
  return out;
}

FluxField reconstruct_flux(const FineSystem& system, const CoarseHierarchy& h, std::span<const double> pp) {
  const int n = system.size();
  if (static_cast<int>(pp.size()) != n || h.n_fine() != n) throw InputError("flux reconstruction: size mismatch");
  const auto& conns = system.connections;
  const int nb = h.n_coarse();

  // Cells per primal block and internal connections per block.
  std::vector<std::vector<int>> cells(nb);
  for (int i = 0; i < n; ++i)
    if (h.medium_of[i] != Medium::Well) cells[h.primal_of[i]].push_back(i);
  std::vector<std::vector<int>> internal(nb);
  std::vector<double> b(n, 0.0);
  for (int i = 0; i < n; ++i) b[i] = system.q[i];
  FluxField f;
  f.flux.assign(conns.size(), 0.0);
  for (std::size_t e = 0; e < conns.size(); ++e) {
    const auto& c = conns[e];
    const int ba = h.primal_of[c.a], bb = h.primal_of[c.b];
    if (ba == bb && h.medium_of[c.a] != Medium::Well && h.medium_of[c.b] != Medium::Well) {
      internal[ba].push_back(static_cast<int>(e));
    } else {
      const double fl = c.trans * (pp[c.a] - pp[c.b]);
      f.flux[e] = fl;
      b[c.a] -= fl;
      b[c.b] += fl;
    }
  }

  std::vector<int> loc(n, -1), comp;
  std::vector<std::vector<int>> adj;
  for (int blk = 0; blk < nb; ++blk) {
    const auto& cs = cells[blk];
    if (cs.empty()) continue;
    const int m = static_cast<int>(cs.size());
    for (int k = 0; k < m; ++k) loc[cs[k]] = k;
    adj.assign(m, {});
    std::vector<Triplet> t;
    for (int e : internal[blk]) {
      const auto& c = conns[e];
      const int ka = loc[c.a], kb = loc[c.b];
      adj[ka].push_back(kb);
      adj[kb].push_back(ka);
      t.push_back({ka, ka, c.trans});
      t.push_back({kb, kb, c.trans});
      t.push_back({ka, kb, -c.trans});
      t.push_back({kb, ka, -c.trans});
    }
    // Components; pin the first unknown of each.
    comp.assign(m, -1);
    std::vector<int> pins;
    for (int s = 0; s < m; ++s) {
      if (comp[s] >= 0) continue;
      const int id = static_cast<int>(pins.size());
      pins.push_back(s);
      std::vector<int> stack{s};
      comp[s] = id;
      while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int v : adj[u])
          if (comp[v] < 0) {
            comp[v] = id;
            stack.push_back(v);
          }
      }
    }
    std::vector<double> sum(pins.size(), 0.0), scale(pins.size(), 0.0);
    for (int k = 0; k < m; ++k) {
      sum[comp[k]] += b[cs[k]];
      scale[comp[k]] += std::abs(b[cs[k]]) + std::abs(system.q[cs[k]]);
    }
    for (std::size_t c = 0; c < pins.size(); ++c)
      if (std::abs(sum[c]) > 1e-8 * std::max(scale[c], 1e-300) && std::abs(sum[c]) > 1e-300)
        throw InputError("flux reconstruction: incompatible local Neumann problem in primal block " +
                         std::to_string(blk) + " (imbalance " + std::to_string(sum[c]) + ")");
    std::vector<char> pinned(m, 0);
    for (int s : pins) pinned[s] = 1;
    std::vector<Triplet> tt;
    tt.reserve(t.size() + pins.size());
    for (const auto& x : t)
      if (!pinned[x.row]) tt.push_back(x);
    std::vector<double> rhs(m);
    for (int k = 0; k < m; ++k) rhs[k] = pinned[k] ? pp[cs[k]] : b[cs[k]];
    for (int s : pins) tt.push_back({s, s, 1.0});
    const auto x = SparseLu(SparseMatrix::from_triplets(m, m, std::move(tt))).solve(rhs);
    for (int e : internal[blk]) {
      const auto& c = conns[e];
      f.flux[e] = c.trans * (x[loc[c.a]] - x[loc[c.b]]);
    }
    for (int k = 0; k < m; ++k) loc[cs[k]] = -1;
  }

  f.divergence.assign(n, 0.0);
  double gross = 0.0;
  for (std::size_t e = 0; e < conns.size(); ++e) {
    const auto& c = conns[e];
    f.divergence[c.a] += f.flux[e];
    f.divergence[c.b] -= f.flux[e];
    f.max_abs_flux = std::max(f.max_abs_flux, std::abs(f.flux[e]));
    if (c.kind == ConnectionKind::Well) {
      f.well_outflow += f.flux[e];
      gross += std::abs(f.flux[e]);
    }
  }
  for (int i = 0; i < n; ++i) {
    if (h.medium_of[i] == Medium::Well) {
      f.divergence[i] = 0.0;
      continue;
    }
    f.divergence[i] -= system.q[i];
    f.sources += system.q[i];
    gross += std::abs(system.q[i]);
    if (system.q[i] == 0.0) f.max_divergence = std::max(f.max_divergence, std::abs(f.divergence[i]));
  }
  const double denom = std::max(gross, 1e-300);
  f.imbalance = std::abs(f.sources - f.well_outflow) / denom;
  return f;
}

}  // namespace fams
