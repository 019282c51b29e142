/**
 * @file experiments.hpp
 * @brief Parameter sweeps and the ILU(0)-GMRES comparison.
 */
#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "fams/scenario.hpp"
#include "fams/solver.hpp"

namespace fams {

enum class SweepAxis { Alpha, TRatio, Ratio, DMin, Scale, Density };

SweepAxis parse_axis(const std::string& name);
std::string to_string(SweepAxis axis);

struct SweepPoint {
  std::string label;
  Scenario scenario;
};

/// One scenario per value of the axis. values, when non-empty, replaces the
/// axis list of the scenario (same syntax as the CLI: "1e-2", "inf", "8x8x8", "2").
std::vector<SweepPoint> sweep_points(const Scenario& base, SweepAxis axis, const std::vector<std::string>& values = {});

struct SweepRow {
  std::string label;
  int n_fine = 0;
  int n_fracture = 0;
  int n_coarse = 0;
  std::size_t p_nnz = 0;
  double t_ratio = 0.0;  ///< 0 when the scenario has no fractures
  int iterations = 0;
  bool converged = false;
  bool stagnated = false;
  double final_residual = 0.0;
  StageTimes times;
  double total_time = 0.0;
};

/// jobs > 1 solves independent points concurrently; rows keep the point order.
std::vector<SweepRow> run_sweep(const std::vector<SweepPoint>& points, int jobs = 1);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, bool with_time);

enum class Baseline { Ilu0Gmres, None };
Baseline parse_baseline(const std::string& name);

struct BenchColumn {
  std::string name;
  int iterations = 0;
  bool converged = false;
  double final_residual = 0.0;
  double setup_time = 0.0;
  double solve_time = 0.0;
};

/// F-AMS-preconditioned GMRES, optionally next to ILU(0)-preconditioned GMRES.
std::vector<BenchColumn> run_bench(const Scenario& s, Baseline baseline);
void write_bench_csv(std::ostream& out, const std::vector<BenchColumn>& cols, bool with_time);

/// FAMS_THREADS, or 1 when unset or invalid.
int thread_cap();

}  // namespace fams
