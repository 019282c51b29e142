/**
 * @file scenario.hpp
 * @brief JSON scenario description and construction of the fine-scale problem.
 *
 * Schema (all lengths in m, permeabilities in m^2, pressures in Pa):
 *
 *   {
 *     "grid":  { "n": [nx, ny, nz], "h": [hx, hy, hz],
 *                "perm": { "type": "uniform", "k": [kx, ky, kz] }
 *                      | { "type": "values", "k": [[kx, ky, kz], ...] }
 *                      | { "type": "file", "path": "k.bin", "components": 1 | 3 }
 *                      | { "type": "patchy", "mean_log": 0, "sigma_log": 2,
 *                          "block": [bx, by, bz], "seed": 1, "anisotropy": [1, 1, 1] } },
 *     "fluid": { "mu": 1.0 },
 *     "fractures": { "cell_size": 1.0, "aperture": 1e-3, "perm": 1e3, "t_ratio": 100,
 *                    "plates": [ { "start": [x, y], "end": [x, y], "z": [zb, zt],
 *                                  "aperture": a, "perm": k } ],
 *                    "generator": { "count": 10, "length": [lmin, lmax], "seed": 7 } },
 *     "wells": [ { "name": "inj", "control": "pressure" | "rate", "value": 1.0, "pi": 1.0,
 *                  "cells": [[i, j, k], ...] | "column": [i, j] | "points": [[x, y, z], ...]
 *                  | "fracture": [[network, cell], ...] } ],
 *     "solver": { "strategy": "frac", "restriction": "fe", "alpha": 1e-2, "ratio": [5, 5, 5],
 *                 "dmin": 4 | "inf", "ratio_z": 0, "mode": "richardson", "tol": 1e-6,
 *                 "max_it": 500, "smoother_sweeps": 1, "merge_cap": n },
 *     "sweep": { "alpha": [...], "t_ratio": [...], "ratio": [[rx, ry, rz], ...],
 *                "d_min": [n | "inf", ...], "scale": [s | { "factor": s, "ratio": [...] }, ...],
 *                "density": [count, ...] }
 *   }
 *
 * Raster files hold little-endian float64 values, x fastest; with three
 * components the kx, ky and kz rasters follow each other.
 */
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "fams/assembly.hpp"
#include "fams/fracture.hpp"
#include "fams/grid.hpp"
#include "fams/solver.hpp"
#include "fams/well.hpp"

namespace fams {

struct PermSpec {
  enum class Kind { Uniform, Values, File, Patchy };
  Kind kind = Kind::Uniform;
  Permeability uniform;
  std::vector<Permeability> values;
  std::filesystem::path path;
  int components = 1;
  double mean_log = 0.0;
  double sigma_log = 1.0;
  std::array<int, 3> block{1, 1, 1};
  std::uint64_t seed = 1;
  std::array<double, 3> anisotropy{1.0, 1.0, 1.0};
};

/// Seeded blockwise lognormal field: one N(mean_log, sigma_log) draw of ln k per block.
std::vector<Permeability> patchy_permeability(int nx, int ny, int nz, const PermSpec& spec);
/// Reads a raw little-endian float64 raster.
std::vector<Permeability> read_permeability_file(const std::filesystem::path& path, int cells, int components);

struct FractureGenerator {
  int count = 0;
  double min_length = 1.0;
  double max_length = 1.0;
  std::uint64_t seed = 1;
};

/// Random vertical plates spanning the full height, clipped to the domain.
std::vector<FracturePlate> generate_plates(const Vec3& extent, const FractureGenerator& gen, double aperture,
                                           double perm);

struct WellSpec {
  std::string name;
  WellControl control = WellControl::Pressure;
  double value = 0.0;
  double pi = 1.0;
  std::vector<std::array<int, 3>> cells;
  std::vector<Vec3> points;
  std::vector<std::array<int, 2>> fracture_cells;  ///< (network, local cell)
};

struct ScaleEntry {
  double factor = 1.0;
  std::optional<std::array<int, 3>> ratio;
};

struct SweepAxes {
  std::vector<double> alpha;
  std::vector<double> t_ratio;
  std::vector<std::array<int, 3>> ratio;
  std::vector<int> d_min;
  std::vector<ScaleEntry> scale;
  std::vector<int> density;
};

struct Scenario {
  int nx = 1, ny = 1, nz = 1;
  double hx = 1.0, hy = 1.0, hz = 1.0;
  PermSpec perm;
  double mu = 1.0;
  double frac_cell_size = 0.0;  ///< 0: min(hx, hy)
  double frac_aperture = 1e-3;
  double frac_perm = 1.0;
  std::optional<double> t_ratio;  ///< rescales all fracture permeabilities to hit this ratio
  std::vector<FracturePlate> plates;
  std::optional<FractureGenerator> generator;
  std::vector<WellSpec> wells;
  SolverConfig solver;
  SweepAxes sweep;
};

struct Problem {
  StructuredGrid grid{GridSpec{}};
  EmbeddedFractures fractures;
  std::vector<Well> wells;
  FineSystem system;
  double assembly_time = 0.0;  ///< seconds spent assembling the fine system
};

/// Throws InputError with the offending field path or the line of a syntax error.
Scenario parse_scenario(std::istream& in, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);

/// Refines the grid by factor (same physical extent), keeping fractures,
/// wells and permeability patches at the same physical location.
Scenario scaled_scenario(const Scenario& s, double factor);

Problem build_problem(const Scenario& s);

/// "inf" or a positive integer.
int parse_d_min(const std::string& text);
/// "NxNxN" (or "NxN" for 2D).
std::array<int, 3> parse_ratio(const std::string& text);

}  // namespace fams
