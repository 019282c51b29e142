#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "fams/coarsen.hpp"
#include "support.hpp"

using namespace fams;

namespace {

StructuredGrid grid(int nx, int ny, int nz = 1) { return build_grid(GridSpec{nx, ny, nz, 1.0, 1.0, 1.0, {}}); }

Graph path_graph(int n) {
  Graph g;
  g.adj.resize(n);
  for (int i = 0; i + 1 < n; ++i) {
    g.adj[i].push_back(i + 1);
    g.adj[i + 1].push_back(i);
  }
  return g;
}

void check_table2_invariants(const Graph& g, const FractureCoarsening& fc, int d_min) {
  const int n = g.size();
  for (int c = 0; c < n; ++c) {
    REQUIRE(fc.primal.block_of[c] >= 0);
    REQUIRE(fc.primal.block_of[c] < fc.primal.block_count());
    CHECK(fc.level[c] <= d_min);
    const int node = fc.primal.node_of_block[fc.primal.block_of[c]];
    CHECK(test::bfs(g, node)[c] <= fc.level[c]);
  }
  const auto& nodes = fc.primal.node_of_block;
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    CHECK(fc.primal.block_of[nodes[a]] == static_cast<int>(a));
    CHECK(fc.dual.class_of[nodes[a]] == CellClass::Vertex);
    const auto d = test::bfs(g, nodes[a]);
    for (std::size_t b = a + 1; b < nodes.size(); ++b)
      if (d[nodes[b]] >= 0) CHECK(d[nodes[b]] >= d_min);
  }
}

}  // namespace

TEST_CASE("matrix coarsening") {
  SUBCASE("15x15 with ratio 5") {
    auto mc = coarsen_matrix(grid(15, 15), {5, 5, 1});
    CHECK(mc.primal.block_count() == 9);
    CHECK(mc.node_index[0] == std::vector<int>{2, 7, 12});
    int vertices = 0;
    for (auto c : mc.dual.class_of) vertices += c == CellClass::Vertex;
    CHECK(vertices == 9);
    CHECK(mc.dual.cells_of_class(CellClass::Interior).empty());
    // Dual faces enclosed by four vertices: the 2x2 interior pattern.
    auto g = grid(15, 15);
    std::map<int, bool> touches_boundary;
    for (int c : mc.dual.cells_of_class(CellClass::Face)) {
      const auto [i, j, k] = g.ijk(c);
      touches_boundary[mc.dual.dual_block_of[c]] |= i < 2 || j < 2 || i > 12 || j > 12;
    }
    CHECK(std::count_if(touches_boundary.begin(), touches_boundary.end(), [](auto& e) { return !e.second; }) == 4);
    for (int b = 0; b < 9; ++b) CHECK(mc.primal.block_of[mc.primal.node_of_block[b]] == b);
  }
  SUBCASE("64^3 with ratio 8") {
    auto mc = coarsen_matrix(grid(64, 64, 64), {8, 8, 8});
    CHECK(mc.primal.block_count() == 512);
    std::vector<int> size(512, 0);
    for (int b : mc.primal.block_of) ++size[b];
    for (int s : size) CHECK(s == 512);
  }
  SUBCASE("single block") {
    auto mc = coarsen_matrix(grid(6, 4), {6, 4, 1});
    CHECK(mc.primal.block_count() == 1);
    int vertices = 0;
    for (auto c : mc.dual.class_of) vertices += c == CellClass::Vertex;
    CHECK(vertices == 1);
  }
  SUBCASE("remainders go to the last block") {
    auto mc = coarsen_matrix(grid(17, 5), {5, 5, 1});
    CHECK(mc.primal.block_count() == 3);
    std::vector<int> size(3, 0);
    for (int b : mc.primal.block_of) ++size[b];
    CHECK(size == std::vector<int>{25, 25, 35});
  }
  SUBCASE("edge cells never touch interior cells") {
    auto g = grid(12, 10, 9);
    auto mc = coarsen_matrix(g, {4, 5, 3});
    for (int c = 0; c < g.cell_count(); ++c) {
      if (mc.dual.class_of[c] != CellClass::Edge) continue;
      const auto [i, j, k] = g.ijk(c);
      const int di[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
      for (const auto& d : di) {
        const int a = i + d[0], b = j + d[1], e = k + d[2];
        if (a < 0 || b < 0 || e < 0 || a >= 12 || b >= 10 || e >= 9) continue;
        CHECK(mc.dual.class_of[g.index(a, b, e)] != CellClass::Interior);
      }
    }
  }
  CHECK_THROWS_AS(coarsen_matrix(grid(4, 4), {5, 2, 1}), InputError);
  CHECK_THROWS_AS(coarsen_matrix(grid(4, 4), {0, 2, 1}), InputError);
}

TEST_CASE("distance-based fracture coarsening") {
  SUBCASE("9-cell path") {
    auto g = path_graph(9);
    auto fc = coarsen_graph(g, 4);
    CHECK(fc.primal.node_of_block == std::vector<int>{0, 4, 8});
    check_table2_invariants(g, fc, 4);
    CHECK(coarsen_graph(g, kInfiniteDistance).primal.block_count() == 1);
    CHECK(coarsen_graph(g, 1).primal.block_count() == 9);
    for (int c = 0; c < 9; ++c)
      if (c % 4 != 0) CHECK(fc.dual.class_of[c] == CellClass::Edge);
  }
  SUBCASE("random networks") {
    for (std::uint64_t seed : {3u, 8u}) {
      for (const auto& net : test::random_networks(seed, 15)) {
        auto g = network_graph(net);
        for (int d : {1, 4, 20}) check_table2_invariants(g, coarsen_graph(g, d), d);
        CHECK(coarsen_graph(g, 1).primal.block_count() == g.size());
        CHECK(coarsen_graph(g, kInfiniteDistance).primal.block_count() == 1);
      }
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(coarsen_graph(path_graph(3), 0), InputError);
    CHECK_THROWS_AS(coarsen_graph(Graph{}, 2), InputError);
  }
}

TEST_CASE("extrusion along z") {
  SUBCASE("15 planar nodes on 64 layers with ratio 8") {
    auto g = grid(15, 1, 64);
    auto e = embed_fractures(g, std::vector<FracturePlate>{{{0.0, 0.5}, {15.0, 0.5}}}, 1.0);
    const auto& net = e.networks.at(0);
    CHECK(net.planar_count == 15);
    auto fc = coarsen_fractures(net, 1, 8);
    CHECK(fc.primal.block_count() == 120);
    std::set<int> levels;
    for (int node : fc.primal.node_of_block) levels.insert(net.cells[node].layer);
    CHECK(levels.size() == 8);
    CHECK_THROWS_AS(coarsen_fractures(net, 1, 65), InputError);
    for (auto c : fc.dual.class_of) CHECK(c != CellClass::Interior);
  }
  SUBCASE("single layer is the planar coarsening") {
    auto e = embed_fractures(grid(9, 1), std::vector<FracturePlate>{{{0.0, 0.5}, {9.0, 0.5}}}, 1.0);
    const auto& net = e.networks.at(0);
    auto a = coarsen_fractures(net, 4, 1);
    auto b = coarsen_graph(planar_graph(net), 4);
    CHECK(a.primal.block_of == b.primal.block_of);
    CHECK(a.dual.class_of == b.dual.class_of);
  }
}

TEST_CASE("dual merging") {
  const char* json = R"({
    "grid": { "n": [10, 5, 1], "h": [1, 1, 1], "perm": { "type": "uniform", "k": 1 } },
    "fractures": { "aperture": 1e-3, "perm": 1e3, "plates": [ { "start": [0.5, 2.5], "end": [6.5, 2.5] } ] },
    "wells": [ { "name": "a", "control": "pressure", "value": 1, "cells": [[0, 0, 0]] },
               { "name": "b", "control": "pressure", "value": 0, "cells": [[9, 4, 0]] } ]
  })";
  auto pb = test::problem_from(json);
  auto h = build_hierarchy(pb.grid, pb.fractures.networks, pb.system, {{5, 5, 1}, kInfiniteDistance, 0});
  const int fb = pb.system.layout.fracture_begin();
  const int left = h.dual_block_of[pb.grid.index(1, 2, 0)];
  const int middle = h.dual_block_of[pb.grid.index(4, 2, 0)];
  const int frac = h.dual_block_of[fb + 3];
  REQUIRE(left != middle);
  REQUIRE(h.class_of[fb + 3] == CellClass::Edge);

  auto m = merge_duals(h, pb.system);
  CHECK(m.merged_of_dual[left] == m.merged_of_dual[frac]);
  CHECK(m.merged_of_dual[middle] == m.merged_of_dual[frac]);
  CHECK(m.merged_count == h.dual_block_count - 2);
  const int right = h.dual_block_of[pb.grid.index(8, 2, 0)];
  CHECK(m.merged_of_dual[right] != m.merged_of_dual[frac]);
  for (int i = 0; i < h.n_fine(); ++i)
    if (h.dual_block_of[i] < 0) CHECK(m.block_of[i] == -1);

  auto capped = merge_duals(h, pb.system, 3);
  CHECK(capped.merged_count > m.merged_count);

  auto plain = test::problem_from(R"({
    "grid": { "n": [10, 10, 1], "h": [1, 1, 1], "perm": { "type": "uniform", "k": 1 } },
    "wells": [ { "name": "a", "control": "pressure", "value": 1, "cells": [[0, 0, 0]] } ] })");
  auto hp = build_hierarchy(plain.grid, {}, plain.system, {{5, 5, 1}, 4, 0});
  auto mp = merge_duals(hp, plain.system);
  CHECK(mp.merged_count == hp.dual_block_count);
  for (int d = 0; d < hp.dual_block_count; ++d) CHECK(mp.merged_of_dual[d] == d);
}

TEST_CASE("wirebasket permutation") {
  auto check_zero_blocks = [](const FineSystem& sys, const CoarseHierarchy& h) {
    auto wb = wirebasket_permutation(h);
    const int n = h.n_fine();
    std::vector<int> seen(n, 0);
    for (int i = 0; i < n; ++i) {
      CHECK(wb.inverse[wb.perm[i]] == i);
      ++seen[wb.perm[i]];
    }
    for (int s : seen) CHECK(s == 1);
    auto b = permute_symmetric(sys.a, wb.perm);
    std::vector<int> inv_perm(wb.inverse.begin(), wb.inverse.end());
    CHECK(permute_symmetric(b, inv_perm) == sys.a);

    using G = WirebasketGroup;
    auto group = [&](int r) {
      int g = 0;
      while (r >= wb.group_begin[g + 1]) ++g;
      return static_cast<G>(g);
    };
    const std::set<std::pair<G, G>> zero{{G::Im, G::Em}, {G::Im, G::Vm}, {G::Fm, G::Vm}, {G::Ff, G::Vf},
                                         {G::Em, G::Im}, {G::Vm, G::Im}, {G::Vm, G::Fm}, {G::Vf, G::Ff}};
    int scanned = 0;
    for (int r = 0; r < n; ++r)
      for (int c : b.row_cols(r)) {
        CHECK(zero.count({group(r), group(c)}) == 0);
        ++scanned;
      }
    CHECK(scanned == static_cast<int>(sys.a.nnz()));
    return wb;
  };

  SUBCASE("15x15 with fractures") {
    auto pb = test::fig1();
    auto h = build_hierarchy(pb.grid, pb.fractures.networks, pb.system, {{5, 5, 1}, 4, 0});
    auto wb = check_zero_blocks(pb.system, h);
    CHECK(wb.group_size(WirebasketGroup::Im) == 0);
    CHECK(wb.group_size(WirebasketGroup::W) == 2);
    CHECK(wb.group_size(WirebasketGroup::Vf) + wb.group_size(WirebasketGroup::Ef) == 21);
  }
  SUBCASE("3D with fractures") {
    auto pb = test::problem_from(R"({
      "grid": { "n": [12, 12, 10], "h": [1, 1, 1], "perm": { "type": "uniform", "k": 1 } },
      "fractures": { "aperture": 1e-3, "t_ratio": 100,
                     "plates": [ { "start": [1.2, 2.3], "end": [10.4, 9.1] }, { "start": [2.5, 9.5], "end": [9.5, 2.2] } ] },
      "wells": [ { "name": "a", "control": "pressure", "value": 1, "column": [0, 0] },
                 { "name": "b", "control": "pressure", "value": 0, "column": [11, 11] } ] })");
    auto h = build_hierarchy(pb.grid, pb.fractures.networks, pb.system, {{4, 4, 5}, 3, 5});
    auto wb = check_zero_blocks(pb.system, h);
    CHECK(wb.group_size(WirebasketGroup::Im) > 0);
    CHECK(wb.group_size(WirebasketGroup::Ff) > 0);
  }
  SUBCASE("unfractured grid") {
    auto pb = test::problem_from(R"({
      "grid": { "n": [10, 10, 10], "h": [1, 1, 1], "perm": { "type": "uniform", "k": 1 } },
      "wells": [ { "name": "a", "control": "pressure", "value": 1, "cells": [[0, 0, 0]] } ] })");
    auto h = build_hierarchy(pb.grid, {}, pb.system, {{5, 5, 5}, 4, 0});
    auto wb = check_zero_blocks(pb.system, h);
    CHECK(wb.group_size(WirebasketGroup::Ff) + wb.group_size(WirebasketGroup::Ef) +
              wb.group_size(WirebasketGroup::Vf) ==
          0);
  }
}

TEST_CASE("hierarchy bookkeeping") {
  auto pb = test::problem_from(test::kTwoNetworks);
  auto h = build_hierarchy(pb.grid, pb.fractures.networks, pb.system, {{8, 8, 1}, 4, 0});
  CHECK(h.n_coarse_matrix == 16);
  CHECK(h.n_coarse_well == 2);
  CHECK(h.network_coarse_offset.size() == 2);
  CHECK(h.n_coarse() == 16 + h.network_coarse_count[0] + h.network_coarse_count[1] + 2);
  for (int c = 0; c < h.n_coarse(); ++c) {
    CHECK(h.coarse_of_node[h.node_dof[c]] == c);
    CHECK(h.primal_of[h.node_dof[c]] == c);
    CHECK(h.medium_of[h.node_dof[c]] == h.coarse_medium[c]);
  }
  for (int i = 0; i < h.n_fine(); ++i) {
    CHECK(h.coarse_medium[h.primal_of[i]] == h.medium_of[i]);
    CHECK((h.dual_block_of[i] < 0) == (h.class_of[i] == CellClass::Vertex));
  }
}
