#include "fams/fracture.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace fams {

namespace {

struct Polygon {
  std::vector<Vec2> pts;
};

/// Keeps the part of the polygon where s * f(x) >= 0, f(x) = n . (x - p).
Polygon clip(const Polygon& poly, Vec2 p, Vec2 n, double s) {
  Polygon out;
  const std::size_t m = poly.pts.size();
  auto f = [&](Vec2 x) { return s * (n.x * (x.x - p.x) + n.y * (x.y - p.y)); };
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2 a = poly.pts[i];
    const Vec2 b = poly.pts[(i + 1) % m];
    const double fa = f(a);
    const double fb = f(b);
    if (fa >= 0.0) out.pts.push_back(a);
    if ((fa >= 0.0) != (fb >= 0.0)) {
      const double t = fa / (fa - fb);
      out.pts.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
  }
  return out;
}

/// Area and centroid of a simple polygon (shoelace).
std::pair<double, Vec2> area_centroid(const Polygon& poly) {
  const std::size_t m = poly.pts.size();
  if (m < 3) return {0.0, {}};
  double a2 = 0.0, cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2 u = poly.pts[i];
    const Vec2 v = poly.pts[(i + 1) % m];
    const double cr = u.x * v.y - v.x * u.y;
    a2 += cr;
    cx += (u.x + v.x) * cr;
    cy += (u.y + v.y) * cr;
  }
  if (a2 == 0.0) return {0.0, {}};
  return {std::abs(a2) / 2.0, {cx / (3.0 * a2), cy / (3.0 * a2)}};
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

struct PlateHit {
  int node;  ///< global intersection node id
  double t;  ///< parameter along the plate
};

struct IntersectionNode {
  Vec2 point;
  std::vector<int> plates;
};

double plate_length(const FracturePlate& p) { return std::hypot(p.end.x - p.start.x, p.end.y - p.start.y); }

}  // namespace

double average_distance_to_line(double x0, double x1, double y0, double y1, Vec2 p, Vec2 d) {
  const double len = std::hypot(d.x, d.y);
  if (len == 0.0) throw InputError("average distance: zero direction");
  const Vec2 n{-d.y / len, d.x / len};
  const Polygon rect{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
  auto signed_dist = [&](Vec2 x) { return n.x * (x.x - p.x) + n.y * (x.y - p.y); };
  double integral = 0.0;
  for (double s : {1.0, -1.0}) {
    const auto [area, c] = area_centroid(clip(rect, p, n, s));
    integral += area * s * signed_dist(c);
  }
  return integral / ((x1 - x0) * (y1 - y0));
}

EmbeddedFractures embed_fractures(const StructuredGrid& grid, std::span<const FracturePlate> plates,
                                  double cell_size) {
  if (!(cell_size > 0.0)) throw InputError("fracture cell size must be positive");
  const Vec3 ext = grid.extent();
  const double tol_len = 1e-9 * std::max({ext.x, ext.y, ext.z});
  const int np = static_cast<int>(plates.size());

  // Normalized z ranges and validation.
  std::vector<std::pair<double, double>> zr(static_cast<std::size_t>(np));
  for (int p = 0; p < np; ++p) {
    const auto& pl = plates[p];
    const std::string tag = "fracture plate " + std::to_string(p);
    for (Vec2 v : {pl.start, pl.end}) {
      if (v.x < -tol_len || v.x > ext.x + tol_len || v.y < -tol_len || v.y > ext.y + tol_len)
        throw InputError(tag + " lies outside the domain");
    }
    if (plate_length(pl) <= tol_len) throw InputError(tag + " has zero length");
    if (!(pl.aperture > 0.0) || !(pl.perm > 0.0))
      throw InputError(tag + " needs positive aperture and permeability");
    double zb = pl.z_bottom, zt = pl.z_top;
    if (grid.dim() == 2 || zt <= zb) {
      zb = 0.0;
      zt = ext.z;
    }
    if (zb < -tol_len || zt > ext.z + tol_len) throw InputError(tag + " z range outside the domain");
    zr[p] = {std::max(zb, 0.0), std::min(zt, ext.z)};
  }

  // Pairwise intersections.
  std::vector<IntersectionNode> nodes;
  std::vector<std::vector<PlateHit>> hits(static_cast<std::size_t>(np));
  UnionFind uf(np);
  auto find_or_add_node = [&](Vec2 x) {
    for (std::size_t n = 0; n < nodes.size(); ++n)
      if (std::hypot(nodes[n].point.x - x.x, nodes[n].point.y - x.y) <= 1e3 * tol_len)
        return static_cast<int>(n);
    nodes.push_back({x, {}});
    return static_cast<int>(nodes.size()) - 1;
  };
  for (int a = 0; a < np; ++a) {
    for (int b = a + 1; b < np; ++b) {
      const auto& pa = plates[a];
      const auto& pb = plates[b];
      const Vec2 r{pa.end.x - pa.start.x, pa.end.y - pa.start.y};
      const Vec2 s{pb.end.x - pb.start.x, pb.end.y - pb.start.y};
      const double cr = r.x * s.y - r.y * s.x;
      if (std::abs(cr) <= 1e-12 * plate_length(pa) * plate_length(pb)) continue;  // parallel
      const Vec2 qp{pb.start.x - pa.start.x, pb.start.y - pa.start.y};
      const double t = (qp.x * s.y - qp.y * s.x) / cr;
      const double u = (qp.x * r.y - qp.y * r.x) / cr;
      const double et = tol_len / plate_length(pa);
      const double eu = tol_len / plate_length(pb);
      if (t < -et || t > 1.0 + et || u < -eu || u > 1.0 + eu) continue;
      if (grid.dim() == 3) {
        const bool overlap = std::min(zr[a].second, zr[b].second) > std::max(zr[a].first, zr[b].first);
        if (!overlap) continue;
        if (std::abs(zr[a].first - zr[b].first) > tol_len || std::abs(zr[a].second - zr[b].second) > tol_len)
          throw InputError("intersecting plates " + std::to_string(a) + " and " + std::to_string(b) +
                           " must share the same z range");
      }
      const double tc = std::clamp(t, 0.0, 1.0);
      const double uc = std::clamp(u, 0.0, 1.0);
      const int node = find_or_add_node({pa.start.x + tc * r.x, pa.start.y + tc * r.y});
      auto add_hit = [&](int plate, double param) {
        for (const auto& h : hits[plate])
          if (h.node == node) return;
        hits[plate].push_back({node, param});
        nodes[node].plates.push_back(plate);
      };
      add_hit(a, tc);
      add_hit(b, uc);
      uf.unite(a, b);
    }
  }

  // Group plates into networks, ordered by their lowest plate index.
  std::vector<int> net_of_root(static_cast<std::size_t>(np), -1);
  std::vector<std::vector<int>> net_plates;
  for (int p = 0; p < np; ++p) {
    const int root = uf.find(p);
    if (net_of_root[root] < 0) {
      net_of_root[root] = static_cast<int>(net_plates.size());
      net_plates.emplace_back();
    }
    net_plates[net_of_root[root]].push_back(p);
  }

  EmbeddedFractures out;
  for (std::size_t ni = 0; ni < net_plates.size(); ++ni) {
    FractureNetwork net;
    net.id = static_cast<int>(ni);
    net.plates = net_plates[ni];
    const auto z = zr[net.plates.front()];

    // Layers: matrix layers overlapping the z range.
    std::vector<std::pair<int, double>> layers;  // (matrix layer, height)
    for (int k = 0; k < grid.nz(); ++k) {
      const double lo = std::max(z.first, k * grid.hz());
      const double hi = std::min(z.second, (k + 1) * grid.hz());
      if (hi - lo > 1e-9 * grid.hz()) layers.emplace_back(k, grid.dim() == 2 ? grid.hz() : hi - lo);
    }
    if (layers.empty()) throw InputError("fracture network " + std::to_string(ni) + " has no layers");
    net.layer_count = static_cast<int>(layers.size());
    net.matrix_layer_begin = layers.front().first;

    // Planar pieces per plate.
    struct Piece {
      Vec2 a, b;
      double length;
      int plate;
      int node_at_start = -1;  // global intersection node id
      int node_at_end = -1;
    };
    std::vector<Piece> pieces;
    std::vector<int> local_node(nodes.size(), -1);
    std::vector<int> node_order;
    for (int p : net.plates) {
      const auto& pl = plates[p];
      const double len = plate_length(pl);
      const Vec2 d{pl.end.x - pl.start.x, pl.end.y - pl.start.y};
      std::vector<double> cuts{0.0, 1.0};
      for (int i = 1; i < grid.nx(); ++i) {
        if (d.x == 0.0) break;
        const double t = (i * grid.hx() - pl.start.x) / d.x;
        if (t > 0.0 && t < 1.0) cuts.push_back(t);
      }
      for (int j = 1; j < grid.ny(); ++j) {
        if (d.y == 0.0) break;
        const double t = (j * grid.hy() - pl.start.y) / d.y;
        if (t > 0.0 && t < 1.0) cuts.push_back(t);
      }
      for (const auto& h : hits[p]) cuts.push_back(h.t);
      std::sort(cuts.begin(), cuts.end());
      std::vector<double> merged;
      for (double t : cuts)
        if (merged.empty() || (t - merged.back()) * len > tol_len) merged.push_back(t);
      // Snap cuts to intersection parameters so hits are recognized exactly.
      for (const auto& h : hits[p]) {
        auto it = std::min_element(merged.begin(), merged.end(),
                                   [&](double x, double y) { return std::abs(x - h.t) < std::abs(y - h.t); });
        *it = h.t;
      }
      std::vector<double> refined;
      for (std::size_t k = 0; k + 1 < merged.size(); ++k) {
        const double seg = (merged[k + 1] - merged[k]) * len;
        const int parts = std::max(1, static_cast<int>(std::ceil(seg / cell_size - 1e-9)));
        for (int q = 0; q < parts; ++q) refined.push_back(merged[k] + (merged[k + 1] - merged[k]) * q / parts);
      }
      refined.push_back(merged.back());
      auto node_at = [&](double t) {
        for (const auto& h : hits[p])
          if (h.t == t) return h.node;
        return -1;
      };
      for (std::size_t k = 0; k + 1 < refined.size(); ++k) {
        const double t0 = refined[k], t1 = refined[k + 1];
        Piece pc;
        pc.a = {pl.start.x + t0 * d.x, pl.start.y + t0 * d.y};
        pc.b = {pl.start.x + t1 * d.x, pl.start.y + t1 * d.y};
        pc.length = (t1 - t0) * len;
        pc.plate = p;
        pc.node_at_start = node_at(t0);
        pc.node_at_end = node_at(t1);
        pieces.push_back(pc);
      }
      for (const auto& h : hits[p]) {
        if (local_node[h.node] < 0) {
          local_node[h.node] = 0;
          node_order.push_back(h.node);
        }
      }
    }
    std::sort(node_order.begin(), node_order.end());
    const int n_pieces = static_cast<int>(pieces.size());
    for (std::size_t k = 0; k < node_order.size(); ++k) local_node[node_order[k]] = n_pieces + static_cast<int>(k);
    net.planar_count = n_pieces + static_cast<int>(node_order.size());

    // Planar edges with TPFA half-distances; aperture of the piece side.
    struct PlanarLink {
      int a, b;
      double dist_a, dist_b;
      double aperture;
    };
    std::vector<PlanarLink> plinks;
    for (int k = 0; k < n_pieces; ++k) {
      const auto& pc = pieces[k];
      const double ap = plates[pc.plate].aperture;
      if (pc.node_at_start >= 0) plinks.push_back({k, local_node[pc.node_at_start], pc.length / 2, 0.0, ap});
      if (pc.node_at_end >= 0) plinks.push_back({k, local_node[pc.node_at_end], pc.length / 2, 0.0, ap});
      const bool next_same_plate = k + 1 < n_pieces && pieces[k + 1].plate == pc.plate;
      if (next_same_plate && pc.node_at_end < 0)
        plinks.push_back({k, k + 1, pc.length / 2, pieces[k + 1].length / 2, ap});
    }
    for (const auto& l : plinks) net.planar_edges.emplace_back(std::min(l.a, l.b), std::max(l.a, l.b));
    std::sort(net.planar_edges.begin(), net.planar_edges.end());
    net.planar_edges.erase(std::unique(net.planar_edges.begin(), net.planar_edges.end()), net.planar_edges.end());

    // Cells per layer.
    net.cells.resize(static_cast<std::size_t>(net.planar_count) * net.layer_count);
    for (int l = 0; l < net.layer_count; ++l) {
      const auto [mk, h] = layers[l];
      const double zc = grid.dim() == 2 ? 0.5 * grid.hz()
                                        : std::max(z.first, mk * grid.hz()) + 0.5 * h;
      for (int k = 0; k < n_pieces; ++k) {
        const auto& pc = pieces[k];
        FractureCell c;
        c.start = pc.a;
        c.end = pc.b;
        c.centroid = {(pc.a.x + pc.b.x) / 2, (pc.a.y + pc.b.y) / 2, zc};
        c.length = pc.length;
        c.height = h;
        c.aperture = plates[pc.plate].aperture;
        c.perm = plates[pc.plate].perm;
        c.plate = pc.plate;
        c.planar = k;
        c.layer = l;
        c.matrix_layer = mk;
        net.cells[net.cell_index(k, l)] = c;
      }
      for (std::size_t q = 0; q < node_order.size(); ++q) {
        const auto& nd = nodes[node_order[q]];
        FractureCell c;
        c.start = c.end = nd.point;
        c.centroid = {nd.point.x, nd.point.y, zc};
        c.height = h;
        double ap = 0.0, kf = 0.0;
        for (int p : nd.plates) {
          ap += plates[p].aperture;
          kf += plates[p].perm;
        }
        c.aperture = ap / static_cast<double>(nd.plates.size());
        c.perm = kf / static_cast<double>(nd.plates.size());
        c.planar = n_pieces + static_cast<int>(q);
        c.layer = l;
        c.matrix_layer = mk;
        c.intersection = true;
        net.cells[net.cell_index(c.planar, l)] = c;
      }
      for (const auto& pl : plinks)
        net.links.push_back({net.cell_index(pl.a, l), net.cell_index(pl.b, l), pl.aperture * h, pl.dist_a, pl.dist_b});
    }
    // Vertical links between pieces of consecutive layers.
    for (int l = 0; l + 1 < net.layer_count; ++l) {
      for (int k = 0; k < n_pieces; ++k) {
        const auto& lo = net.cells[net.cell_index(k, l)];
        const auto& hi = net.cells[net.cell_index(k, l + 1)];
        net.links.push_back({net.cell_index(k, l), net.cell_index(k, l + 1), lo.aperture * lo.length,
                             lo.height / 2, hi.height / 2});
      }
    }

    // Overlaps: each piece overlaps the matrix cell containing its midpoint.
    for (int l = 0; l < net.layer_count; ++l) {
      for (int k = 0; k < n_pieces; ++k) {
        const int fc = net.cell_index(k, l);
        const auto& c = net.cells[fc];
        const int i = std::clamp(static_cast<int>(std::floor(c.centroid.x / grid.hx())), 0, grid.nx() - 1);
        const int j = std::clamp(static_cast<int>(std::floor(c.centroid.y / grid.hy())), 0, grid.ny() - 1);
        Overlap ov;
        ov.network = net.id;
        ov.frac_cell = fc;
        ov.matrix_cell = grid.index(i, j, c.matrix_layer);
        ov.area = c.area();
        ov.avg_dist = average_distance_to_line(i * grid.hx(), (i + 1) * grid.hx(), j * grid.hy(),
                                               (j + 1) * grid.hy(), c.start,
                                               {c.end.x - c.start.x, c.end.y - c.start.y});
        ov.ci = ov.area / ov.avg_dist;
        out.overlaps.push_back(ov);
      }
    }
    out.networks.push_back(std::move(net));
  }
  return out;
}

namespace {

Graph graph_from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  Graph g;
  g.adj.resize(static_cast<std::size_t>(n));
  for (const auto& [a, b] : edges) {
    g.adj[a].push_back(b);
    g.adj[b].push_back(a);
  }
  for (auto& row : g.adj) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return g;
}

}  // namespace

Graph network_graph(const FractureNetwork& net) {
  std::vector<std::pair<int, int>> edges;
  edges.reserve(net.links.size());
  for (const auto& l : net.links) edges.emplace_back(l.a, l.b);
  return graph_from_edges(net.size(), edges);
}

Graph planar_graph(const FractureNetwork& net) { return graph_from_edges(net.planar_count, net.planar_edges); }

}  // namespace fams
