#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dgife/config.hpp"

namespace dgife {

struct ConvergenceResult {
  std::vector<StudyRow> rows;
  std::string csv;    // also written to <output.dir>/convergence.csv
  std::string table;  // aligned, for terminals
};

struct AdaptiveResult {
  AdaptiveState state;
  std::vector<StudyRow> rows;  // history with n = iteration index
  std::string csv;             // written to <output.dir>/adaptive.csv
  std::string table;
};

// Solve the configured problem on each grid in n_list.  Stage failures
// are rethrown with the stage name and grid size attached.  With
// output.dump_mesh / dump_field set, per-grid mesh and error-field files
// land next to the CSV.
ConvergenceResult run_convergence_study(const RunConfig& config,
                                        std::ostream* log = nullptr);

// Drive the solve-mark-refine loop from the configured base grid.
AdaptiveResult run_adaptive_study(const RunConfig& config,
                                  std::ostream* log = nullptr);

std::string format_table(const std::vector<StudyRow>& rows,
                         const std::string& index_name = "N");

}  // namespace dgife
