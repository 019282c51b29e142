#include <deque>
#include <string>

#include "fams/coarsen.hpp"

namespace fams {

namespace {

void label_components(const Graph& g, DualPartition& dual) {
  const int n = g.size();
  dual.dual_block_of.assign(n, -1);
  dual.dual_block_count = 0;
  std::vector<int> stack;
  for (int seed = 0; seed < n; ++seed) {
    if (dual.class_of[seed] == CellClass::Vertex || dual.dual_block_of[seed] >= 0) continue;
    const int id = dual.dual_block_count++;
    dual.dual_block_of[seed] = id;
    stack.assign(1, seed);
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      for (int d : g.adj[c]) {
        if (dual.class_of[d] != dual.class_of[seed] || dual.dual_block_of[d] >= 0) continue;
        dual.dual_block_of[d] = id;
        stack.push_back(d);
      }
    }
  }
}

}  // namespace

FractureCoarsening coarsen_graph(const Graph& graph, int d_min, int start_cell) {
  const int n = graph.size();
  if (d_min < 1) throw InputError("d_min must be >= 1");
  if (n == 0) throw InputError("cannot coarsen an empty fracture network");
  if (start_cell < 0 || start_cell >= n) throw InputError("coarsening start cell out of range");

  FractureCoarsening fc;
  fc.level.assign(n, kInfiniteDistance);
  fc.primal.block_of.assign(n, -1);
  std::vector<char> queued(n, 0);
  std::deque<int> q_vertex;
  std::vector<int> q1, q2;
  int next_seed = 0;

  q_vertex.push_back(start_cell);
  queued[start_cell] = 1;
  for (;;) {
    if (q_vertex.empty()) {
      // Disconnected remainder: restart from its lowest cell.
      while (next_seed < n && fc.primal.block_of[next_seed] >= 0) ++next_seed;
      if (next_seed == n) break;
      q_vertex.push_back(next_seed);
      queued[next_seed] = 1;
    }
    const int v = q_vertex.front();
    q_vertex.pop_front();
    if (!queued[v]) continue;  // removed while waiting
    queued[v] = 0;

    const int block = fc.primal.block_count();
    fc.primal.node_of_block.push_back(v);
    fc.primal.block_of[v] = block;
    fc.level[v] = 0;
    q1.assign(1, v);
    for (int dist = 1; !q1.empty() && dist <= d_min; ++dist) {
      q2.clear();
      for (int c : q1) {
        for (int nb : graph.adj[c]) {
          if (fc.level[nb] <= dist) continue;
          queued[nb] = 0;
          fc.level[nb] = dist;
          fc.primal.block_of[nb] = block;
          q2.push_back(nb);
        }
      }
      q1.swap(q2);
      if (dist == d_min) break;
    }
    for (int c : q1) {
      if (c == v) continue;
      if (!queued[c]) q_vertex.push_back(c);
      queued[c] = 1;
    }
  }

  fc.dual.class_of.assign(n, CellClass::Edge);
  for (int v : fc.primal.node_of_block) fc.dual.class_of[v] = CellClass::Vertex;
  label_components(graph, fc.dual);
  return fc;
}

FractureCoarsening extrude_fracture_coarsening(const FractureNetwork& net, const FractureCoarsening& planar,
                                               int ratio_z) {
  const int np = net.planar_count;
  const int nl = net.layer_count;
  if (static_cast<int>(planar.primal.block_of.size()) != np)
    throw InputError("planar coarsening does not match the network");
  if (ratio_z < 1) throw InputError("fracture z ratio must be >= 1");
  if (ratio_z > nl)
    throw InputError("fracture z ratio (" + std::to_string(ratio_z) + ") exceeds the network layer count (" +
                     std::to_string(nl) + ")");
  const int nzb = nl / ratio_z;
  std::vector<int> zblock(nl);
  std::vector<int> node_level;
  std::vector<char> is_node_level(nl, 0);
  for (int b = 0; b < nzb; ++b) {
    const int begin = b * ratio_z;
    const int end = b + 1 == nzb ? nl : begin + ratio_z;
    for (int l = begin; l < end; ++l) zblock[l] = b;
    node_level.push_back(begin + (end - begin) / 2);
    is_node_level[node_level.back()] = 1;
  }

  const int npb = planar.primal.block_count();
  FractureCoarsening fc;
  fc.level.resize(net.size());
  fc.primal.block_of.resize(net.size());
  fc.primal.node_of_block.resize(static_cast<std::size_t>(npb) * nzb);
  fc.dual.class_of.resize(net.size());
  for (int l = 0; l < nl; ++l) {
    for (int p = 0; p < np; ++p) {
      const int c = net.cell_index(p, l);
      const int b = zblock[l] * npb + planar.primal.block_of[p];
      fc.primal.block_of[c] = b;
      fc.level[c] = planar.level[p];
      const bool pnode = planar.dual.class_of[p] == CellClass::Vertex;
      CellClass cls;
      if (pnode && is_node_level[l]) {
        cls = CellClass::Vertex;
        fc.primal.node_of_block[b] = c;
      } else if (pnode) {
        cls = net.is_intersection_planar(p) ? CellClass::Face : CellClass::Edge;
      } else {
        cls = is_node_level[l] ? CellClass::Edge : CellClass::Face;
      }
      fc.dual.class_of[c] = cls;
    }
  }
  label_components(network_graph(net), fc.dual);
  return fc;
}

FractureCoarsening coarsen_fractures(const FractureNetwork& net, int d_min, int ratio_z) {
  const auto planar = coarsen_graph(planar_graph(net), d_min, 0);
  return extrude_fracture_coarsening(net, planar, ratio_z);
}

}  // namespace fams
