#include <algorithm>
#include <numeric>

#include "fams/coarsen.hpp"

namespace fams {

CoarseHierarchy build_hierarchy(const StructuredGrid& grid, std::span<const FractureNetwork> networks,
                                const FineSystem& system, const HierarchyOptions& options) {
  const auto& lay = system.layout;
  if (lay.n_matrix != grid.cell_count() || lay.network_size.size() != networks.size())
    throw InputError("fine system does not match the grid and fracture networks");

  CoarseHierarchy h;
  const int n = lay.total();
  h.class_of.resize(n);
  h.medium_of.resize(n);
  h.dual_block_of.assign(n, -1);
  h.primal_of.resize(n);
  h.coarse_of_node.assign(n, -1);

  h.matrix = coarsen_matrix(grid, options.ratio);
  const auto& mc = h.matrix;
  h.n_coarse_matrix = mc.primal.block_count();
  for (int c = 0; c < lay.n_matrix; ++c) {
    h.class_of[c] = mc.dual.class_of[c];
    h.medium_of[c] = Medium::Matrix;
    h.dual_block_of[c] = mc.dual.dual_block_of[c];
    h.primal_of[c] = mc.primal.block_of[c];
  }
  for (int b = 0; b < h.n_coarse_matrix; ++b) {
    h.node_dof.push_back(mc.primal.node_of_block[b]);
    h.coarse_medium.push_back(Medium::Matrix);
    h.coarse_of_node[mc.primal.node_of_block[b]] = b;
  }
  h.dual_block_count = mc.dual.dual_block_count;

  const int rz_default = options.ratio_z > 0 ? options.ratio_z : std::max(1, options.ratio[2]);
  for (std::size_t ni = 0; ni < networks.size(); ++ni) {
    const auto& net = networks[ni];
    const int rz = std::min(rz_default, net.layer_count);
    h.fractures.push_back(coarsen_fractures(net, options.d_min, rz));
    const auto& fc = h.fractures.back();
    const int off = lay.network_offset[ni];
    const int coff = h.n_coarse();
    h.network_coarse_offset.push_back(coff);
    h.network_coarse_count.push_back(fc.primal.block_count());
    for (int c = 0; c < net.size(); ++c) {
      h.class_of[off + c] = fc.dual.class_of[c];
      h.medium_of[off + c] = Medium::Fracture;
      h.dual_block_of[off + c] = fc.dual.dual_block_of[c] < 0 ? -1 : h.dual_block_count + fc.dual.dual_block_of[c];
      h.primal_of[off + c] = coff + fc.primal.block_of[c];
    }
    for (int b = 0; b < fc.primal.block_count(); ++b) {
      const int dof = off + fc.primal.node_of_block[b];
      h.node_dof.push_back(dof);
      h.coarse_medium.push_back(Medium::Fracture);
      h.coarse_of_node[dof] = coff + b;
    }
    h.dual_block_count += fc.dual.dual_block_count;
  }

  for (int w = lay.well_begin(); w < n; ++w) {
    h.class_of[w] = CellClass::Vertex;
    h.medium_of[w] = Medium::Well;
    h.primal_of[w] = h.n_coarse();
    h.coarse_of_node[w] = h.n_coarse();
    h.node_dof.push_back(w);
    h.coarse_medium.push_back(Medium::Well);
    ++h.n_coarse_well;
  }
  return h;
}

MergedDuals merge_duals(const CoarseHierarchy& h, const FineSystem& system, std::optional<int> cap) {
  if (cap && *cap < 1) throw InputError("merge cap must be >= 1");
  const int nb = h.dual_block_count;
  std::vector<int> parent(nb), size(nb, 0);
  std::iota(parent.begin(), parent.end(), 0);
  for (int d : h.dual_block_of)
    if (d >= 0) ++size[d];
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& c : system.connections) {
    if (c.kind != ConnectionKind::MatrixFracture) continue;
    if (h.class_of[c.a] != h.class_of[c.b]) continue;
    const int da = h.dual_block_of[c.a], db = h.dual_block_of[c.b];
    if (da < 0 || db < 0) continue;
    int ra = find(da), rb = find(db);
    if (ra == rb) continue;
    if (cap && size[ra] + size[rb] > *cap) continue;
    if (ra > rb) std::swap(ra, rb);
    parent[rb] = ra;
    size[ra] += size[rb];
  }
  MergedDuals m;
  m.merged_of_dual.assign(nb, -1);
  std::vector<int> id_of_root(nb, -1);
  for (int d = 0; d < nb; ++d) {
    const int r = find(d);
    if (id_of_root[r] < 0) id_of_root[r] = m.merged_count++;
    m.merged_of_dual[d] = id_of_root[r];
  }
  m.block_of.assign(h.dual_block_of.size(), -1);
  for (std::size_t i = 0; i < h.dual_block_of.size(); ++i)
    if (h.dual_block_of[i] >= 0) m.block_of[i] = m.merged_of_dual[h.dual_block_of[i]];
  return m;
}

namespace {

WirebasketGroup group_of(Medium m, CellClass c) {
  if (m == Medium::Well) return WirebasketGroup::W;
  if (m == Medium::Matrix) {
    switch (c) {
      case CellClass::Interior: return WirebasketGroup::Im;
      case CellClass::Face: return WirebasketGroup::Fm;
      case CellClass::Edge: return WirebasketGroup::Em;
      case CellClass::Vertex: return WirebasketGroup::Vm;
    }
  }
  switch (c) {
    case CellClass::Face: return WirebasketGroup::Ff;
    case CellClass::Edge: return WirebasketGroup::Ef;
    case CellClass::Vertex: return WirebasketGroup::Vf;
    case CellClass::Interior: break;
  }
  throw InputError("fracture cell classified as interior");
}

}  // namespace

WirebasketPermutation wirebasket_permutation(const CoarseHierarchy& h) {
  const int n = h.n_fine();
  constexpr int ng = static_cast<int>(WirebasketGroup::Count);
  std::vector<int> grp(n);
  std::array<int, ng> count{};
  for (int i = 0; i < n; ++i) {
    grp[i] = static_cast<int>(group_of(h.medium_of[i], h.class_of[i]));
    ++count[grp[i]];
  }
  WirebasketPermutation wp;
  wp.group_begin[0] = 0;
  for (int g = 0; g < ng; ++g) wp.group_begin[g + 1] = wp.group_begin[g] + count[g];
  auto next = wp.group_begin;
  wp.perm.resize(n);
  wp.inverse.resize(n);
  for (int i = 0; i < n; ++i) {
    const int k = next[grp[i]]++;
    wp.perm[i] = k;
    wp.inverse[k] = i;
  }
  return wp;
}

}  // namespace fams
