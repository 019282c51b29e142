#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "fams/assembly.hpp"
#include "fams/direct_solver.hpp"
#include "support.hpp"

using namespace fams;

namespace {

StructuredGrid grid2d(int nx, int ny, std::vector<Permeability> k = {}) {
  return build_grid(GridSpec{nx, ny, 1, 1.0, 1.0, 1.0, std::move(k)});
}

Well column_well(const StructuredGrid& g, int i, double p, double pi = 1.0) {
  Well w{"w" + std::to_string(i), {}, WellControl::Pressure, p};
  for (int j = 0; j < g.ny(); ++j) w.perforations.push_back({Medium::Matrix, -1, g.index(i, j, 0), pi});
  return w;
}

std::vector<double> dense_solve(const FineSystem& s) {
  const int n = s.size();
  const auto d = s.a.to_dense();
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = d[i * n + j];
  Eigen::VectorXd q = Eigen::Map<const Eigen::VectorXd>(s.q.data(), n);
  Eigen::VectorXd x = a.fullPivLu().solve(q);
  return {x.data(), x.data() + n};
}

}  // namespace

TEST_CASE("TPFA transmissibility") {
  CHECK(tpfa_transmissibility(1.0, 0.5, 1.0, 0.5, 3.0) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(tpfa_transmissibility(1.0, 0.5, 7.0, 0.5, 7.0) == doctest::Approx(7.0).epsilon(1e-14));
  CHECK(tpfa_transmissibility(2.0, 0.3, 1.0, 0.7, 5.0) == tpfa_transmissibility(2.0, 0.7, 5.0, 0.3, 1.0));
  CHECK(tpfa_transmissibility(1.0, 0.0, 1.0, 0.5, 2.0) == doctest::Approx(4.0));
  CHECK_THROWS_AS(tpfa_transmissibility(1.0, 0.5, 0.0, 0.5, 1.0), InputError);
  CHECK(interface_permeability(1.0, 1.0) == 1.0);
  CHECK(interface_permeability(1.0, 1e6) == doctest::Approx(2.0).epsilon(1e-5));
}

TEST_CASE("two cells without wells give the pure Neumann operator") {
  auto g = grid2d(2, 1, {{1.0, 1.0, 1.0}, {3.0, 3.0, 3.0}});
  auto s = assemble(g, {}, {}, {});
  CHECK(s.size() == 2);
  CHECK(s.a.at(0, 0) == doctest::Approx(1.5));
  CHECK(s.a.at(0, 1) == doctest::Approx(-1.5));
  CHECK(s.a.at(1, 0) == doctest::Approx(-1.5));
  CHECK(s.a.at(1, 1) == doctest::Approx(1.5));
  CHECK_THROWS_AS(lu_solve(s.a, std::vector<double>{1.0, -1.0}), SingularMatrixError);
}

TEST_CASE("fig1 system") {
  auto pb = test::fig1();
  const auto& s = pb.system;
  CHECK(s.layout.n_matrix == 225);
  CHECK(s.layout.n_fracture == 21);
  CHECK(s.layout.n_well == 2);
  CHECK(s.size() == 248);
  CHECK(t_ratio(s).ratio == doctest::Approx(100.0).epsilon(1e-10));

  CHECK(s.a.symmetry_defect() <= 1e-12 * s.a.max_abs());
  for (int i = 0; i < s.layout.well_begin(); ++i) {
    double sum = 0.0;
    for (double v : s.a.row_values(i)) sum += v;
    bool perforated = false;
    for (const auto& c : s.connections) perforated |= c.kind == ConnectionKind::Well && c.a == i;
    if (!perforated) CHECK(std::abs(sum) <= 1e-12 * s.a.max_abs());
  }
  // A^{ww} is diagonal.
  for (int w = s.layout.well_begin(); w < s.size(); ++w)
    for (int j : s.a.row_cols(w)) CHECK((j == w || j < s.layout.well_begin()));

  const auto p = lu_solve(s.a, s.q);
  const auto [lo, hi] = std::minmax_element(p.begin(), p.end());
  CHECK(*lo >= -1e-12);
  CHECK(*hi <= 1.0 + 1e-12);
  // The penalty row ties each well unknown to its target.
  CHECK(p[s.pressure_wells[0].dof] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(p[s.pressure_wells[1].dof] == doctest::Approx(0.0).epsilon(1e-5));
}

TEST_CASE("3x3 grid between a left and a right face well is linear in x") {
  auto g = grid2d(3, 3);
  const std::vector<Well> wells{column_well(g, 0, 1.0, 1e3), column_well(g, 2, 0.0, 1e3)};
  auto s = assemble(g, {}, {}, wells);
  const auto p = lu_solve(s.a, s.q);
  const auto ref = dense_solve(s);
  for (int c = 0; c < s.size(); ++c) CHECK(p[c] == doctest::Approx(ref[c]).epsilon(1e-10));
  for (int j = 0; j < 3; ++j) {
    const double p0 = p[g.index(0, j, 0)], p1 = p[g.index(1, j, 0)], p2 = p[g.index(2, j, 0)];
    CHECK(p1 - p0 == doctest::Approx(p2 - p1).epsilon(1e-12));
    CHECK(p1 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p0 == doctest::Approx(p[g.index(0, 0, 0)]).epsilon(1e-12));
  }
}

TEST_CASE("T ratio") {
  const char* json = R"({
    "grid": { "n": [9, 9, 1], "h": [1, 1, 1], "perm": { "type": "uniform", "k": 1 } },
    "fractures": { "aperture": 1e-3, "perm": 1e3, "plates": [ { "start": [1, 4.5], "end": [8, 4.5] } ] },
    "wells": [ { "name": "a", "control": "pressure", "value": 1, "cells": [[0, 0, 0]] } ]
  })";
  auto s = test::scenario_from(json);
  CHECK(t_ratio(build_problem(s).system).ratio == doctest::Approx(1.0).epsilon(1e-12));
  for (auto& pl : s.plates) pl.perm *= 100.0;
  const auto r = t_ratio(build_problem(s).system);
  CHECK(r.ratio == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(r.ratio == doctest::Approx(r.t_frac_avg / r.t_rock_avg).epsilon(1e-15));

  auto g = grid2d(3, 3);
  const std::vector<Well> w{column_well(g, 0, 1.0)};
  CHECK_THROWS_AS(t_ratio(assemble(g, {}, {}, w)), InputError);
}

TEST_CASE("uniform permeability scaling scales A and keeps the pressure solution") {
  auto pb = test::problem_from(test::kTwoNetworks);
  const double c = 50.0;
  auto nets = pb.fractures.networks;
  for (auto& n : nets)
    for (auto& cell : n.cells) cell.perm *= c;
  auto scaled = assemble(pb.grid.scaled(c), nets, pb.fractures.overlaps, pb.wells);
  const auto da = pb.system.a.to_dense(), db = scaled.a.to_dense();
  for (std::size_t e = 0; e < da.size(); ++e) CHECK(db[e] == doctest::Approx(c * da[e]).epsilon(1e-12));
  const auto p0 = lu_solve(pb.system.a, pb.system.q), p1 = lu_solve(scaled.a, scaled.q);
  for (std::size_t i = 0; i < p0.size(); ++i) CHECK(std::abs(p0[i] - p1[i]) <= 1e-9);
}

TEST_CASE("rate wells are eliminated into the right-hand side") {
  auto g = grid2d(4, 1);
  const std::vector<Well> wells{{"inj", {{Medium::Matrix, -1, 0, 1.0}}, WellControl::Rate, 2.0},
                                {"prod", {{Medium::Matrix, -1, 3, 1.0}}, WellControl::Pressure, 0.0}};
  auto s = assemble(g, {}, {}, wells);
  CHECK(s.layout.n_well == 1);
  CHECK(s.q[0] == doctest::Approx(2.0));
  const auto p = lu_solve(s.a, s.q);
  // Unit transmissibilities: the injected rate drops one unit of pressure per face.
  CHECK(p[0] - p[1] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(p[2] - p[3] == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("matrix-fracture couplings") {
  auto pb = test::fig1();
  const auto& s = pb.system;
  int mf = 0;
  for (const auto& c : s.connections) {
    CHECK(c.trans > 0.0);
    CHECK(s.a.at(c.a, c.b) == doctest::Approx(-c.trans));
    if (c.kind != ConnectionKind::MatrixFracture) continue;
    ++mf;
    CHECK(s.medium(c.a) == Medium::Matrix);
    CHECK(s.medium(c.b) == Medium::Fracture);
  }
  CHECK(mf == static_cast<int>(pb.fractures.overlaps.size()));
  CHECK_THROWS_AS(validate_well(Well{"x", {}, WellControl::Pressure, 0.0}), InputError);
}
