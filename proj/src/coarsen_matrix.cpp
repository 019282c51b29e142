#include <string>

#include "fams/coarsen.hpp"

namespace fams {

std::vector<int> DualPartition::cells_of_class(CellClass c) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < class_of.size(); ++i)
    if (class_of[i] == c) out.push_back(static_cast<int>(i));
  return out;
}

namespace {

struct AxisBlocks {
  std::vector<int> block_of;  // index -> block
  std::vector<int> node;      // block -> node index
  std::vector<bool> is_node;
};

AxisBlocks split_axis(int n, int r, char axis) {
  if (n == 1) r = 1;
  if (r < 1) throw InputError(std::string("coarsening ratio along ") + axis + " must be >= 1");
  if (r > n)
    throw InputError(std::string("coarsening ratio along ") + axis + " (" + std::to_string(r) +
                     ") exceeds the grid size (" + std::to_string(n) + ")");
  const int nb = n / r;
  AxisBlocks ab;
  ab.block_of.resize(n);
  ab.is_node.assign(n, false);
  for (int b = 0; b < nb; ++b) {
    const int begin = b * r;
    const int end = b + 1 == nb ? n : begin + r;
    for (int i = begin; i < end; ++i) ab.block_of[i] = b;
    ab.node.push_back(begin + (end - begin) / 2);
    ab.is_node[ab.node.back()] = true;
  }
  return ab;
}

}  // namespace

MatrixCoarsening coarsen_matrix(const StructuredGrid& grid, std::array<int, 3> ratio) {
  const std::array<int, 3> n{grid.nx(), grid.ny(), grid.nz()};
  std::array<AxisBlocks, 3> ax;
  for (int a = 0; a < 3; ++a) ax[a] = split_axis(n[a], ratio[a], "xyz"[a]);

  MatrixCoarsening mc;
  for (int a = 0; a < 3; ++a) {
    mc.blocks[a] = static_cast<int>(ax[a].node.size());
    mc.node_index[a] = ax[a].node;
  }
  const int nc = grid.cell_count();
  mc.primal.block_of.resize(nc);
  mc.primal.node_of_block.resize(static_cast<std::size_t>(mc.blocks[0]) * mc.blocks[1] * mc.blocks[2]);
  mc.dual.class_of.resize(nc);
  for (int c = 0; c < nc; ++c) {
    const auto [i, j, k] = grid.ijk(c);
    const int bi = ax[0].block_of[i], bj = ax[1].block_of[j], bk = ax[2].block_of[k];
    const int b = bi + mc.blocks[0] * (bj + mc.blocks[1] * bk);
    mc.primal.block_of[c] = b;
    const int on = int(ax[0].is_node[i]) + int(ax[1].is_node[j]) + int(ax[2].is_node[k]);
    // Axes of size one always lie on a node plane, so a 2D grid yields F/E/V only.
    mc.dual.class_of[c] = static_cast<CellClass>(on);
    if (on == 3) mc.primal.node_of_block[b] = c;
  }

  // Dual blocks: face-connected components of equal class.
  mc.dual.dual_block_of.assign(nc, -1);
  std::vector<int> stack;
  for (int seed = 0; seed < nc; ++seed) {
    if (mc.dual.class_of[seed] == CellClass::Vertex || mc.dual.dual_block_of[seed] >= 0) continue;
    const int id = mc.dual.dual_block_count++;
    const CellClass cls = mc.dual.class_of[seed];
    mc.dual.dual_block_of[seed] = id;
    stack.assign(1, seed);
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      const auto p = grid.ijk(c);
      for (int a = 0; a < 3; ++a) {
        for (int s : {-1, 1}) {
          auto q = p;
          q[a] += s;
          if (q[a] < 0 || q[a] >= n[a]) continue;
          const int d = grid.index(q[0], q[1], q[2]);
          if (mc.dual.class_of[d] != cls || mc.dual.dual_block_of[d] >= 0) continue;
          mc.dual.dual_block_of[d] = id;
          stack.push_back(d);
        }
      }
    }
  }
  return mc;
}

}  // namespace fams
