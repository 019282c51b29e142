/**
 * @file fracture.hpp
 * @brief Embedded fracture geometry: plates, lower-dimensional fracture grids,
 *        intersection nodes, and matrix overlaps with their connectivity index.
 *
 * Plates are vertical: a segment in the x-y plane, extruded over a z range in
 * 3D. Each plate is cut at matrix cell boundaries, at intersections with other
 * plates, and then subdivided to the requested fracture cell size, so every
 * fracture cell lies inside one matrix cell. Plates that intersect belong to the
 * same network; each intersection becomes a zero-volume node (one per layer)
 * connected to the pieces meeting there.
 */
#pragma once

#include <span>
#include <vector>

#include "fams/grid.hpp"
#include "fams/types.hpp"

namespace fams {

struct FracturePlate {
  Vec2 start;
  Vec2 end;
  /// z range in 3D; z_top <= z_bottom means the full grid height.
  double z_bottom = 0.0;
  double z_top = 0.0;
  double aperture = 1e-3;
  double perm = 1.0;
};

struct FractureCell {
  Vec3 centroid;
  Vec2 start;  ///< planar piece endpoints (equal for intersection nodes)
  Vec2 end;
  double length = 0.0;  ///< along the plate; zero for intersection nodes
  double height = 0.0;  ///< layer thickness
  double aperture = 0.0;
  double perm = 0.0;
  int plate = -1;  ///< owning plate, -1 for intersection nodes
  int planar = 0;  ///< index in the planar (x-y projected) graph
  int layer = 0;   ///< local layer index within the network
  int matrix_layer = 0;
  bool intersection = false;

  double area() const { return length * height; }
};

/// Undirected connection between two fracture cells with TPFA geometry:
/// T = face_area / (dist_a / k_a + dist_b / k_b).
struct FractureLink {
  int a = 0;
  int b = 0;
  double face_area = 0.0;
  double dist_a = 0.0;
  double dist_b = 0.0;
};

struct FractureNetwork {
  int id = 0;
  int planar_count = 0;
  int layer_count = 1;
  int matrix_layer_begin = 0;
  /// cells[layer * planar_count + planar]
  std::vector<FractureCell> cells;
  std::vector<FractureLink> links;
  /// Planar graph edges (indices are planar ids); used for coarsening.
  std::vector<std::pair<int, int>> planar_edges;
  std::vector<int> plates;

  int size() const { return static_cast<int>(cells.size()); }
  int cell_index(int planar, int layer) const { return layer * planar_count + planar; }
  bool is_intersection_planar(int planar) const { return cells[planar].intersection; }
};

struct Overlap {
  int network = 0;
  int frac_cell = 0;    ///< local index within the network
  int matrix_cell = 0;  ///< global matrix cell index
  double area = 0.0;
  double avg_dist = 0.0;
  double ci = 0.0;
};

struct EmbeddedFractures {
  std::vector<FractureNetwork> networks;
  std::vector<Overlap> overlaps;
};

EmbeddedFractures embed_fractures(const StructuredGrid& grid, std::span<const FracturePlate> plates,
                                  double cell_size);

/// Adjacency lists, sorted and unique.
struct Graph {
  std::vector<std::vector<int>> adj;
  int size() const { return static_cast<int>(adj.size()); }
  int degree(int v) const { return static_cast<int>(adj[v].size()); }
};

Graph network_graph(const FractureNetwork& net);
Graph planar_graph(const FractureNetwork& net);

/// Average distance from the points of the axis-aligned rectangle [x0,x1]x[y0,y1]
/// to the infinite line through p with direction d. Exact (piecewise-linear integrand).
double average_distance_to_line(double x0, double x1, double y0, double y1, Vec2 p, Vec2 d);

}  // namespace fams
