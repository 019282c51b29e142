#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "fams/assembly.hpp"
#include "fams/fracture.hpp"
#include "fams/grid.hpp"
#include "support.hpp"

using namespace fams;

namespace {

StructuredGrid grid2d(int nx, int ny, double h = 1.0) { return build_grid(GridSpec{nx, ny, 1, h, h, 1.0, {}}); }

// Average distance from the unit-cell points to the line x = x0, by midpoint quadrature.
double sampled_distance(double x0, double y0, Vec2 d, int samples) {
  const double len = std::hypot(d.x, d.y);
  double sum = 0.0;
  for (int i = 0; i < samples; ++i)
    for (int j = 0; j < samples; ++j) {
      const double x = (i + 0.5) / samples, y = (j + 0.5) / samples;
      sum += std::abs((x - x0) * d.y - (y - y0) * d.x) / len;
    }
  return sum / (samples * samples);
}

}  // namespace

TEST_CASE("grid construction") {
  CHECK(grid2d(15, 15).cell_count() == 225);
  CHECK(build_grid(GridSpec{64, 64, 64, 1, 1, 1, {}}).cell_count() == 262144);

  auto one = build_grid(GridSpec{});
  CHECK(one.cell_count() == 1);
  CHECK_THROWS_AS(assemble(one, {}, {}, {}), InputError);
  const std::vector<Well> well{{"w", {{Medium::Matrix, -1, 0, 1.0}}, WellControl::Pressure, 1.0}};
  auto sys = assemble(one, {}, {}, well);
  REQUIRE(sys.connections.size() == 1);
  CHECK(sys.connections[0].kind == ConnectionKind::Well);

  auto g = build_grid(GridSpec{4, 3, 2, 2.0, 1.0, 0.5, {}});
  CHECK(g.dim() == 3);
  CHECK(g.index(3, 2, 1) == 23);
  CHECK(g.ijk(23) == std::array<int, 3>{3, 2, 1});
  CHECK(g.face_area(0) == 0.5);
  CHECK(g.volume() == 1.0);
  CHECK(g.center(0).x == 1.0);
  CHECK(g.perm(5).kx == 1.0);

  CHECK_THROWS_AS(build_grid(GridSpec{0, 1, 1, 1, 1, 1, {}}), InputError);
  CHECK_THROWS_AS(build_grid(GridSpec{2, 2, 1, -1, 1, 1, {}}), InputError);
  CHECK_THROWS_AS(build_grid(GridSpec{2, 2, 1, 1, 1, 1, {Permeability{}}}), InputError);
  CHECK_THROWS_AS(build_grid(GridSpec{1, 1, 1, 1, 1, 1, {Permeability{0.0, 1.0, 1.0}}}), InputError);
}

TEST_CASE("connectivity index examples") {
  auto g = grid2d(1, 1);
  SUBCASE("fracture bisecting the cell parallel to a face") {
    std::vector<FracturePlate> p{{{0.0, 0.5}, {1.0, 0.5}}};
    auto e = embed_fractures(g, p, 1.0);
    REQUIRE(e.overlaps.size() == 1);
    CHECK(e.overlaps[0].area == doctest::Approx(1.0));
    CHECK(e.overlaps[0].avg_dist == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(e.overlaps[0].ci == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(sampled_distance(0.5, 0.5, {1.0, 0.0}, 200) == doctest::Approx(0.25).epsilon(1e-6));
  }
  SUBCASE("vertical crossing at x = 0.3") {
    std::vector<FracturePlate> p{{{0.3, 0.0}, {0.3, 1.0}}};
    auto e = embed_fractures(g, p, 1.0);
    REQUIRE(e.overlaps.size() == 1);
    CHECK(e.overlaps[0].avg_dist == doctest::Approx(0.29).epsilon(1e-12));
    CHECK(e.overlaps[0].ci == doctest::Approx(3.4483).epsilon(1e-4));
  }
  SUBCASE("exact average distance agrees with quadrature for an oblique line") {
    const Vec2 d{0.6, 0.8};
    const double exact = average_distance_to_line(0, 1, 0, 1, {0.2, 0.1}, d);
    CHECK(exact == doctest::Approx(sampled_distance(0.2, 0.1, d, 400)).epsilon(1e-5));
  }
}

TEST_CASE("fracture graphs") {
  SUBCASE("single 9-cell fracture is a path") {
    auto e = embed_fractures(grid2d(9, 1), std::vector<FracturePlate>{{{0.0, 0.5}, {9.0, 0.5}}}, 1.0);
    REQUIRE(e.networks.size() == 1);
    auto gr = network_graph(e.networks[0]);
    CHECK(gr.size() == 9);
    for (int v = 0; v < 9; ++v) CHECK(gr.degree(v) == (v == 0 || v == 8 ? 1 : 2));
  }
  SUBCASE("two crossing plates form one network with a degree-4 intersection node") {
    std::vector<FracturePlate> p{{{0.5, 2.5}, {4.5, 2.5}}, {{2.5, 0.5}, {2.5, 4.5}}};
    auto e = embed_fractures(grid2d(5, 5), p, 1.0);
    REQUIRE(e.networks.size() == 1);
    const auto& net = e.networks[0];
    auto gr = network_graph(net);
    int nodes = 0;
    for (int v = 0; v < gr.size(); ++v)
      if (net.cells[v].intersection) {
        ++nodes;
        CHECK(gr.degree(v) == 4);
        CHECK(net.cells[v].area() == 0.0);
      }
    CHECK(nodes == 1);
  }
  SUBCASE("disjoint plates form separate networks") {
    std::vector<FracturePlate> p{{{0.5, 1.5}, {3.5, 1.5}}, {{0.5, 3.5}, {3.5, 3.5}}};
    CHECK(embed_fractures(grid2d(5, 5), p, 1.0).networks.size() == 2);
  }
}

TEST_CASE("fig1 geometry has 21 fracture cells") {
  auto pb = test::fig1();
  REQUIRE(pb.fractures.networks.size() == 1);
  CHECK(pb.fractures.networks[0].size() == 21);
  CHECK(pb.grid.cell_count() == 225);
}

TEST_CASE("3D plates are extruded over the layers") {
  auto g = build_grid(GridSpec{6, 6, 4, 1, 1, 1, {}});
  std::vector<FracturePlate> p{{{0.5, 3.2}, {5.5, 3.2}}};
  auto e = embed_fractures(g, p, 1.0);
  REQUIRE(e.networks.size() == 1);
  const auto& net = e.networks[0];
  CHECK(net.layer_count == 4);
  CHECK(net.size() == net.planar_count * 4);
  auto gr = network_graph(net);
  for (int v = 0; v < gr.size(); ++v) {
    const int expected = (net.cells[v].layer == 0 || net.cells[v].layer == 3 ? 1 : 2) +
                         static_cast<int>(planar_graph(net).adj[net.cells[v].planar].size());
    CHECK(gr.degree(v) == expected);
  }
}

TEST_CASE("overlap invariants") {
  auto pb = test::problem_from(test::kTwoNetworks);
  const auto& fr = pb.fractures;
  std::map<std::pair<int, int>, double> area;
  std::set<std::tuple<int, int, int>> seen;
  for (const auto& o : fr.overlaps) {
    CHECK(o.ci > 0.0);
    CHECK(o.matrix_cell >= 0);
    CHECK(o.matrix_cell < pb.grid.cell_count());
    REQUIRE(o.network < static_cast<int>(fr.networks.size()));
    CHECK(o.frac_cell < fr.networks[o.network].size());
    CHECK(seen.insert({o.network, o.frac_cell, o.matrix_cell}).second);
    area[{o.network, o.frac_cell}] += o.area;
  }
  for (const auto& net : fr.networks)
    for (int c = 0; c < net.size(); ++c) {
      if (net.cells[c].intersection) continue;
      const double a = net.cells[c].area();
      CHECK(std::abs(area[{net.id, c}] - a) <= 1e-10 * a);
    }

  // Rigid translation by whole cells leaves every CI unchanged.
  std::vector<FracturePlate> p{{{1.3, 2.7}, {6.1, 5.4}}};
  std::vector<FracturePlate> q{{{4.3, 4.7}, {9.1, 7.4}}};
  auto a = embed_fractures(grid2d(12, 12), p, 1.0);
  auto b = embed_fractures(grid2d(12, 12), q, 1.0);
  REQUIRE(a.overlaps.size() == b.overlaps.size());
  for (std::size_t k = 0; k < a.overlaps.size(); ++k)
    CHECK(a.overlaps[k].ci == doctest::Approx(b.overlaps[k].ci).epsilon(1e-12));
}

TEST_CASE("invalid plates") {
  auto g = grid2d(4, 4);
  CHECK_THROWS_AS(embed_fractures(g, std::vector<FracturePlate>{{{1.0, 1.0}, {5.0, 1.0}}}, 1.0), InputError);
  CHECK_THROWS_AS(embed_fractures(g, std::vector<FracturePlate>{{{1.0, 1.0}, {1.0, 1.0}}}, 1.0), InputError);
  CHECK_THROWS_AS(embed_fractures(g, std::vector<FracturePlate>{{{1.0, 1.0}, {3.0, 1.0}}}, 0.0), InputError);
}
