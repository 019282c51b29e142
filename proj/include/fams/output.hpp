/**
 * @file output.hpp
 * @brief Result files: legacy VTK for matrix fields, CSV for fractures, wells,
 *        convergence history, stage timings and coarse grids.
 */
#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "fams/coarsen.hpp"
#include "fams/scenario.hpp"
#include "fams/solver.hpp"

namespace fams {

/// ASCII legacy VTK, STRUCTURED_POINTS with CELL_DATA: pressure and kx.
void write_vtk(std::ostream& out, const StructuredGrid& grid, std::span<const double> pressure,
               const std::string& title = "fams pressure");
/// network,cell,plate,layer,intersection,x0,y0,x1,y1,z,pressure
void write_fracture_csv(std::ostream& out, const Problem& problem, std::span<const double> p);
/// name,control,unknown,pressure,rate (rate positive into the reservoir)
void write_well_csv(std::ostream& out, const Problem& problem, std::span<const double> p);
/// iteration,residual[,time_s]
void write_history_csv(std::ostream& out, const SolveReport& report, bool with_time);
/// stage,seconds
void write_stage_csv(std::ostream& out, const SolveReport& report);
/// unknown,medium,network,local,primal,class,dual_block
void write_grids_csv(std::ostream& out, const Problem& problem, const CoarseHierarchy& h);

/// Opens path for writing, creating parent directories; throws InputError on failure.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace fams
