#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fams/direct_solver.hpp"
#include "fams/solver.hpp"
#include "support.hpp"

using namespace fams;

namespace {

constexpr Strategy kAll[] = {Strategy::Decoupled, Strategy::Frac, Strategy::Rock, Strategy::Coupled};

double relative_error(std::span<const double> p, std::span<const double> ref) {
  std::vector<double> d(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) d[i] = p[i] - ref[i];
  return norm2(d) / norm2(ref);
}

SolveResult solve(const Problem& pb, const SolverConfig& cfg, std::span<const double> ref = {}) {
  return fams_solve(pb.grid, pb.fractures.networks, pb.system, cfg, ref);
}

const char* kSmall3d = R"({
  "grid": { "n": [16, 16, 16], "h": [1, 1, 1],
            "perm": { "type": "patchy", "mean_log": 0, "sigma_log": 1, "block": [4, 4, 4], "seed": 2 } },
  "fractures": { "aperture": 1e-3, "t_ratio": 100,
                 "plates": [ { "start": [2.2, 3.1], "end": [13.8, 12.7] }, { "start": [3.1, 12.4], "end": [10.2, 4.6] } ] },
  "wells": [ { "name": "a", "control": "pressure", "value": 1, "column": [0, 0] },
             { "name": "b", "control": "pressure", "value": 0, "column": [15, 15] } ],
  "solver": { "strategy": "coupled", "ratio": [4, 4, 4], "dmin": 4, "mode": "gmres", "max_it": 200 } })";

}  // namespace

TEST_CASE("configuration") {
  SolverConfig c;
  CHECK(c.tol == 1e-6);
  CHECK(c.alpha == 1e-2);
  CHECK(c.smoother_sweeps == 1);
  CHECK_NOTHROW(c.validate());
  c.tol = 0.0;
  CHECK_THROWS_AS(c.validate(), InputError);
  c = {};
  c.ratio = {0, 5, 5};
  CHECK_THROWS_AS(c.validate(), InputError);
  c = {};
  c.alpha = 1.0;
  CHECK_THROWS_AS(c.validate(), InputError);
  CHECK(parse_mode("GMRES") == SolveMode::Gmres);
  CHECK_THROWS_AS(parse_mode("cg"), InputError);
}

TEST_CASE("equal well pressures converge in one iteration") {
  auto pb = test::problem_from(R"({ "grid": { "n": [15, 15, 1], "h": [1, 1, 1],
      "perm": { "type": "patchy", "mean_log": 0, "sigma_log": 1, "block": [3, 3, 1], "seed": 1 } },
    "fractures": { "aperture": 1e-3, "t_ratio": 100, "plates": [ { "start": [3.5, 7.5], "end": [11.5, 7.5] } ] },
    "wells": [ { "name": "a", "control": "pressure", "value": 1, "cells": [[0, 0, 0]] },
               { "name": "b", "control": "pressure", "value": 1, "cells": [[14, 14, 0]] } ] })");
  SolverConfig cfg;
  cfg.ratio = {5, 5, 1};
  for (auto st : kAll) {
    cfg.strategy = st;
    auto res = solve(pb, cfg);
    CHECK(res.report.converged);
    CHECK(res.report.iterations == 1);
    for (int i = 0; i < pb.system.layout.well_begin(); ++i) CHECK(res.p[i] == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("fig1 converges to the direct solution") {
  auto s = test::scenario_file("fig1.json");
  auto pb = build_problem(s);
  const auto ref = reference_solution(pb.system);
  for (auto mode : {SolveMode::Richardson, SolveMode::Gmres})
    for (auto st : kAll) {
      auto cfg = s.solver;
      cfg.mode = mode;
      cfg.strategy = st;
      auto res = solve(pb, cfg, ref);
      CAPTURE(to_string(st));
      CHECK(res.report.converged);
      CHECK(res.report.final_residual <= 1e-6);
      CHECK(norm2(residual(pb.system.a, res.p, pb.system.q)) <= 1e-6);
      CHECK(*res.report.relative_error <= 1e-6);
      CHECK(relative_error(res.p, ref) == doctest::Approx(*res.report.relative_error));
      CHECK(res.report.history.size() == static_cast<std::size_t>(res.report.iterations) + 1);
      CHECK(res.report.history_time.size() == res.report.history.size());
      for (double t : res.report.times.values()) CHECK(t >= 0.0);
    }
}

TEST_CASE("more fracture coarse nodes need fewer Frac iterations") {
  auto s = test::scenario_file("hetero_2d.json");
  auto pb = build_problem(s);
  auto cfg = s.solver;
  cfg.strategy = Strategy::Frac;
  cfg.alpha = 0.0;
  cfg.d_min = kInfiniteDistance;
  auto one = solve(pb, cfg);
  cfg.d_min = 20;
  auto many = solve(pb, cfg);
  CHECK(many.report.coarse_size > one.report.coarse_size + 10);
  CHECK(one.report.converged);
  CHECK(many.report.converged);
  CHECK(many.report.iterations < one.report.iterations);
}

TEST_CASE("preconditioner properties") {
  auto pb = test::fig1();
  SolverConfig cfg;
  cfg.ratio = {5, 5, 1};
  FamsPreconditioner pre(pb.grid, pb.fractures.networks, pb.system, cfg);
  const int n = pb.system.size();
  std::vector<double> zero(n, 0.0), z(n, 1.0);
  pre.apply(zero, z);
  for (double v : z) CHECK(v == 0.0);

  // Stationarity at the exact solution.
  const auto ref = reference_solution(pb.system);
  const auto r = residual(pb.system.a, ref, pb.system.q);
  pre.apply(r, z);
  CHECK(norm2(z) <= 1e-12 * norm2(ref));

  // Linearity.
  std::vector<double> a(n), b(n), ab(n), za(n), zb(n), zab(n);
  for (int i = 0; i < n; ++i) {
    a[i] = std::sin(i * 0.7);
    b[i] = std::cos(i * 0.3);
    ab[i] = 2.0 * a[i] - 3.0 * b[i];
  }
  pre.apply(a, za);
  pre.apply(b, zb);
  pre.apply(ab, zab);
  for (int i = 0; i < n; ++i) CHECK(zab[i] == doctest::Approx(2.0 * za[i] - 3.0 * zb[i]).epsilon(1e-10).scale(1.0));
}

TEST_CASE("single-pass error") {
  auto pb = test::fig1();
  const auto ref = reference_solution(pb.system);
  SolverConfig cfg;
  cfg.ratio = {1, 1, 1};
  cfg.d_min = 1;
  cfg.alpha = 0.0;
  for (auto st : kAll) {
    cfg.strategy = st;
    CHECK(single_pass_error(pb.grid, pb.fractures.networks, pb.system, cfg, ref) <= 1e-10);
  }
  cfg.ratio = {5, 5, 1};
  cfg.strategy = Strategy::Rock;
  cfg.d_min = kInfiniteDistance;
  const double e1 = single_pass_error(pb.grid, pb.fractures.networks, pb.system, cfg, ref);
  cfg.d_min = 2;
  const double e2 = single_pass_error(pb.grid, pb.fractures.networks, pb.system, cfg, ref);
  CHECK(std::abs(e1 - e2) <= 1e-12);
  CHECK(e1 > 1e-3);
}

TEST_CASE("Decoupled on an unfractured domain follows the classic iteration path") {
  auto pb = test::problem_from(R"({ "grid": { "n": [30, 30, 1], "h": [1, 1, 1],
      "perm": { "type": "patchy", "mean_log": 0, "sigma_log": 2, "block": [3, 3, 1], "seed": 6 } },
    "wells": [ { "name": "a", "control": "pressure", "value": 1, "cells": [[0, 0, 0]] },
               { "name": "b", "control": "pressure", "value": 0, "cells": [[29, 29, 0]] } ] })");
  SolverConfig cfg;
  cfg.ratio = {6, 6, 1};
  cfg.strategy = Strategy::Decoupled;
  auto ref = solve(pb, cfg);
  CHECK(ref.report.converged);
  for (auto st : kAll) {
    cfg.strategy = st;
    auto res = solve(pb, cfg);
    CHECK(res.report.history == ref.report.history);
    CHECK(res.p == ref.p);
  }
}

TEST_CASE("stagnation is detected and reported") {
  auto pb = test::fig1();
  SolverConfig cfg;
  cfg.ratio = {5, 5, 1};
  cfg.tol = 1e-30;
  cfg.max_it = 1000;
  auto res = solve(pb, cfg);
  CHECK_FALSE(res.report.converged);
  CHECK(res.report.stagnated);
  CHECK(res.report.iterations < 1000);
  const int w = cfg.stagnation_window;
  const auto& h = res.report.history;
  CHECK(h.back() > 0.99 * h[h.size() - 1 - w]);
}

TEST_CASE("stage timings partition the total") {
  auto s = test::scenario_file("hetero_2d.json");
  auto pb = build_problem(s);
  for (auto mode : {SolveMode::Richardson, SolveMode::Gmres}) {
    auto cfg = s.solver;
    cfg.mode = mode;
    auto res = solve(pb, cfg);
    const double sum = res.report.times.sum();
    CHECK(sum <= res.report.total_time * 1.05);
    CHECK(sum >= res.report.total_time * 0.95);
  }
}

TEST_CASE("GMRES iteration counts are flat in the contrast and similar across strategies") {
  auto s = test::scenario_from(kSmall3d);
  std::vector<int> its;
  for (double t : {1e1, 1e2, 1e4, 1e8}) {
    s.t_ratio = t;
    auto res = solve(build_problem(s), s.solver);
    CHECK(res.report.converged);
    its.push_back(res.report.iterations);
  }
  CHECK(*std::max_element(its.begin(), its.end()) <= 2 * *std::min_element(its.begin(), its.end()));

  auto h = test::scenario_file("hetero_2d.json");
  auto pb = build_problem(h);
  its.clear();
  for (auto st : kAll) {
    auto cfg = h.solver;
    cfg.mode = SolveMode::Gmres;
    cfg.strategy = st;
    its.push_back(solve(pb, cfg).report.iterations);
  }
  const double lo = *std::min_element(its.begin(), its.end()), hi = *std::max_element(its.begin(), its.end());
  CHECK(hi <= 1.3 * lo);
}

TEST_CASE("F-AMS beats ILU(0) alone on a contrasted case") {
  auto s = test::scenario_file("hetero_2d.json");
  auto pb = build_problem(s);
  auto cfg = s.solver;
  cfg.mode = SolveMode::Gmres;
  auto fams = solve(pb, cfg);
  auto ilu = ilu0_gmres(pb.system, cfg.tol, 2000);
  CHECK(fams.report.converged);
  CHECK(fams.report.iterations <= ilu.iterations);
}

TEST_CASE("conservative flux reconstruction") {
  SUBCASE("fig1") {
    auto s = test::scenario_file("fig1.json");
    auto pb = build_problem(s);
    auto cfg = s.solver;
    auto res = solve(pb, cfg);
    CHECK_THROWS_AS(conservative_pressure(pb.system, FamsPreconditioner(pb.grid, pb.fractures.networks, pb.system, cfg),
                                          res.p),
                    InputError);
    cfg.restriction = RestrictionKind::FV;
    FamsPreconditioner pre(pb.grid, pb.fractures.networks, pb.system, cfg);
    const auto pp = conservative_pressure(pb.system, pre, res.p);
    const auto f = reconstruct_flux(pb.system, pre.hierarchy(), pp);
    CHECK(f.max_abs_flux > 0.0);
    CHECK(f.max_divergence <= 1e-10 * f.max_abs_flux);
    CHECK(f.imbalance <= 1e-10);
    for (int i = 0; i < pb.system.layout.well_begin(); ++i)
      CHECK(std::abs(f.divergence[i]) <= 1e-10 * f.max_abs_flux + std::abs(pb.system.q[i]));
  }
  SUBCASE("uniform flow between face wells gives a constant flux") {
    auto pb = test::problem_from(R"({ "grid": { "n": [10, 4, 1], "h": [1, 1, 1], "perm": { "type": "uniform", "k": 1 } },
      "wells": [ { "name": "a", "control": "pressure", "value": 1, "pi": 1e3,
                   "cells": [[0, 0, 0], [0, 1, 0], [0, 2, 0], [0, 3, 0]] },
                 { "name": "b", "control": "pressure", "value": 0, "pi": 1e3,
                   "cells": [[9, 0, 0], [9, 1, 0], [9, 2, 0], [9, 3, 0]] } ] })");
    SolverConfig cfg;
    cfg.ratio = {5, 2, 1};
    cfg.alpha = 0.0;
    auto res = solve(pb, cfg);
    cfg.restriction = RestrictionKind::FV;
    FamsPreconditioner pre(pb.grid, pb.fractures.networks, pb.system, cfg);
    const auto f = reconstruct_flux(pb.system, pre.hierarchy(), conservative_pressure(pb.system, pre, res.p));
    double ref = 0.0;
    for (std::size_t k = 0; k < pb.system.connections.size(); ++k) {
      const auto& c = pb.system.connections[k];
      if (c.kind != ConnectionKind::MatrixMatrix) continue;
      const auto a = pb.grid.ijk(c.a), b = pb.grid.ijk(c.b);
      if (a[1] != b[1]) {
        CHECK(std::abs(f.flux[k]) <= 1e-9);
        continue;
      }
      if (ref == 0.0) ref = f.flux[k];
      CHECK(f.flux[k] == doctest::Approx(ref).epsilon(1e-6));
    }
    CHECK(ref > 0.0);
  }
}
