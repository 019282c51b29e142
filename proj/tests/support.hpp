#pragma once

#include <sstream>
#include <string>

#include "fams/scenario.hpp"

namespace fams::test {

inline Scenario scenario_from(const std::string& json) {
  std::istringstream in(json);
  return parse_scenario(in);
}

inline Problem problem_from(const std::string& json) { return build_problem(scenario_from(json)); }

inline Scenario scenario_file(const std::string& name) {
  return load_scenario(std::string(FAMS_SCENARIO_DIR) + "/" + name);
}

/// 15x15, two crossing fractures (21 cells), corner pressure wells.
inline Problem fig1() { return build_problem(scenario_file("fig1.json")); }

/// 32x32 patchy field with two separate networks (about 60 fracture cells).
inline const char* kTwoNetworks = R"({
  "grid": { "n": [32, 32, 1], "h": [1, 1, 1],
            "perm": { "type": "patchy", "mean_log": 0, "sigma_log": 1, "block": [4, 4, 1], "seed": 9 } },
  "fractures": { "aperture": 1e-3, "t_ratio": 100,
    "plates": [ { "start": [4.5, 6.2], "end": [15.7, 12.1] },
                { "start": [8.3, 16.4], "end": [14.6, 3.3] },
                { "start": [22.4, 21.6], "end": [27.2, 28.5] } ] },
  "wells": [ { "name": "inj", "control": "pressure", "value": 1, "cells": [[1, 1, 0]] },
             { "name": "prod", "control": "pressure", "value": 0, "cells": [[30, 30, 0]] } ],
  "solver": { "ratio": [8, 8, 1], "dmin": 4 }
})";

inline HierarchyOptions hierarchy_options(const SolverConfig& c) { return {c.ratio, c.d_min, c.ratio_z}; }

}  // namespace fams::test

namespace fams::test {

/// Random 2D plate populations on a 64x64 grid; returns every network with at most max_cells cells.
inline std::vector<FractureNetwork> random_networks(std::uint64_t seed, int count, int max_cells = 5000) {
  auto grid = build_grid(GridSpec{64, 64, 1, 1.0, 1.0, 1.0, {}});
  FractureGenerator gen{count, 6.0, 40.0, seed};
  const auto plates = generate_plates(grid.extent(), gen, 1e-3, 1.0);
  std::vector<FractureNetwork> out;
  for (auto& n : embed_fractures(grid, plates, 0.5).networks)
    if (n.size() <= max_cells) out.push_back(std::move(n));
  return out;
}

/// Breadth-first distances from src.
inline std::vector<int> bfs(const Graph& g, int src) {
  std::vector<int> d(g.size(), -1);
  std::vector<int> q{src};
  d[src] = 0;
  for (std::size_t k = 0; k < q.size(); ++k)
    for (int nb : g.adj[q[k]])
      if (d[nb] < 0) {
        d[nb] = d[q[k]] + 1;
        q.push_back(nb);
      }
  return d;
}

}  // namespace fams::test
