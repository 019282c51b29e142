/**
 * @file coarsen.hpp
 * @brief Primal and dual coarse grids for the matrix and the fracture networks.
 *
 * Matrix: uniform primal blocks whose center cells are the coarse nodes; the
 * dual grid follows from the lines/planes through the nodes (wirebasket classes
 * Interior/Face/Edge/Vertex). Fractures: breadth-first, distance-based
 * selection of coarse nodes on the network graph; in 3D the planar result is
 * extruded along z.
 */
#pragma once

#include <array>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "fams/assembly.hpp"
#include "fams/fracture.hpp"
#include "fams/grid.hpp"
#include "fams/types.hpp"

namespace fams {

inline constexpr int kInfiniteDistance = std::numeric_limits<int>::max();

struct PrimalPartition {
  std::vector<int> block_of;       ///< fine cell -> primal block
  std::vector<int> node_of_block;  ///< primal block -> coarse node (fine cell)

  int block_count() const { return static_cast<int>(node_of_block.size()); }
};

struct DualPartition {
  std::vector<CellClass> class_of;
  /// Dual block id of non-vertex cells (connected components of equal class); -1 for vertices.
  std::vector<int> dual_block_of;
  int dual_block_count = 0;

  std::vector<int> cells_of_class(CellClass c) const;
};

struct MatrixCoarsening {
  PrimalPartition primal;
  DualPartition dual;
  std::array<int, 3> blocks{1, 1, 1};
  std::array<std::vector<int>, 3> node_index;  ///< per axis: indices of node planes
};

/// ratio per axis >= 1; axes of size one are treated as ratio one. Throws
/// InputError when a ratio exceeds the grid size along its axis.
MatrixCoarsening coarsen_matrix(const StructuredGrid& grid, std::array<int, 3> ratio);

struct FractureCoarsening {
  PrimalPartition primal;
  DualPartition dual;
  std::vector<int> level;  ///< graph distance to the block's node (planar coarsening)
};

/// Distance-based coarse node selection on a graph, starting from start_cell.
/// d_min = kInfiniteDistance yields a single coarse node. Dual classes: nodes
/// are Vertices, every other cell an Edge.
FractureCoarsening coarsen_graph(const Graph& graph, int d_min, int start_cell = 0);

/// Planar coarsening of the projected network, extruded over its layers.
FractureCoarsening coarsen_fractures(const FractureNetwork& net, int d_min, int ratio_z = 1);

/// Replicates planar coarse nodes at z-levels spaced by ratio_z. Vertical strips
/// through planar nodes and horizontal lines at node levels become Edges, the
/// rest Faces. Strips through intersection nodes, which carry no vertical
/// connectivity, are Faces below/above the node levels.
FractureCoarsening extrude_fracture_coarsening(const FractureNetwork& net, const FractureCoarsening& planar,
                                               int ratio_z);

struct HierarchyOptions {
  std::array<int, 3> ratio{5, 5, 5};
  int d_min = kInfiniteDistance;
  int ratio_z = 0;  ///< fracture z coarsening; 0 means the matrix z ratio
};

/// Global view over all fine unknowns (matrix, fractures, wells).
/// Coarse unknowns are ordered [matrix nodes | fracture nodes per network | wells].
struct CoarseHierarchy {
  std::vector<CellClass> class_of;
  std::vector<Medium> medium_of;
  std::vector<int> dual_block_of;  ///< global dual block id; -1 for vertices and wells
  int dual_block_count = 0;
  std::vector<int> primal_of;       ///< fine unknown -> coarse unknown (its primal block)
  std::vector<int> coarse_of_node;  ///< fine unknown -> coarse unknown if it is a node, else -1
  std::vector<int> node_dof;        ///< coarse unknown -> fine node
  std::vector<Medium> coarse_medium;
  int n_coarse_matrix = 0;
  std::vector<int> network_coarse_offset;
  std::vector<int> network_coarse_count;
  int n_coarse_well = 0;

  MatrixCoarsening matrix;
  std::vector<FractureCoarsening> fractures;

  int n_fine() const { return static_cast<int>(class_of.size()); }
  int n_coarse() const { return static_cast<int>(node_dof.size()); }
};

CoarseHierarchy build_hierarchy(const StructuredGrid& grid, std::span<const FractureNetwork> networks,
                                const FineSystem& system, const HierarchyOptions& options);

/// Same-class dual blocks of different media merged through matrix-fracture connections.
struct MergedDuals {
  std::vector<int> merged_of_dual;  ///< original dual block -> merged block
  std::vector<int> block_of;        ///< fine unknown -> merged block (-1 for vertices/wells)
  int merged_count = 0;
};

/// cap: optional maximum number of fine cells per merged block.
MergedDuals merge_duals(const CoarseHierarchy& hierarchy, const FineSystem& system,
                        std::optional<int> cap = std::nullopt);

/// Groups of the wirebasket ordering.
enum class WirebasketGroup : int { Im, Fm, Em, Vm, Ff, Ef, Vf, W, Count };

struct WirebasketPermutation {
  std::vector<int> perm;     ///< old index -> new index
  std::vector<int> inverse;  ///< new index -> old index
  std::array<int, static_cast<int>(WirebasketGroup::Count) + 1> group_begin{};

  int group_size(WirebasketGroup g) const {
    return group_begin[static_cast<int>(g) + 1] - group_begin[static_cast<int>(g)];
  }
};

WirebasketPermutation wirebasket_permutation(const CoarseHierarchy& hierarchy);

}  // namespace fams
