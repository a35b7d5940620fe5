#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "dgife/assembly.hpp"
#include "dgife/manufactured.hpp"

namespace dgife {

struct ErrorNorms {
  double linf = 0;
  double l2 = 0;
  double h1 = 0;      // seminorm, unweighted
  double energy = 0;  // beta-weighted gradients plus penalty jumps
};

// Error of the discrete solution against the exact one.  Volume terms
// evaluate both fields on the side label of the chord partition the
// basis was built on; the exact solution's closed-form branches extend
// smoothly across the curve, so inside the thin chord/curve mismatch
// sliver each branch is compared with its matching counterpart.
// L-infinity samples quadrature points and element vertices; vertex
// sides are resolved by the level set.
ErrorNorms compute_norms(
    const std::vector<double>& u_h, const ManufacturedSolution& sol,
    const CartesianMesh& mesh, const ElementClassification& cls,
    const std::vector<LocalBasis>& bases, const DofMap& dofs,
    const DgConfig& config,
    const std::optional<QuadGrading>& grading = std::nullopt);

// Per-element H1-seminorm error contributions (squared roots taken), for
// adaptive marking.  Sum of squares equals the h1 entry of compute_norms
// under the same quadrature.
std::vector<double> element_h1_errors(
    const std::vector<double>& u_h, const ManufacturedSolution& sol,
    const CartesianMesh& mesh, const ElementClassification& cls,
    const std::vector<LocalBasis>& bases, const DofMap& dofs, int order,
    const std::optional<QuadGrading>& grading = std::nullopt);

struct StudyRow {
  int n = 0;  // mesh parameter; 0 when the mesh is not uniform
  int elements = 0;
  int dof = 0;
  ErrorNorms e;
};

// log2(e_prev / e_next) per consecutive pair; first entry has no rate
// and is returned as NaN.
std::vector<double> rates_log2(const std::vector<double>& errors);

// Least-squares slope of log(error) against log(dof).
double slope_vs_dof(const std::vector<int>& dof,
                    const std::vector<double>& errors);

// CSV with the fixed header
// N,DoF,Linf,Linf_rate,L2,L2_rate,H1semi,H1semi_rate,Energy,Energy_rate
void write_csv(std::ostream& os, const std::vector<StudyRow>& rows);

// Raster of |u_h - u| over the domain, "x y err" rows, res*res samples
// at cell centers.
void export_error_field(std::ostream& os, const std::vector<double>& u_h,
                        const ManufacturedSolution& sol,
                        const CartesianMesh& mesh,
                        const ElementClassification& cls,
                        const std::vector<LocalBasis>& bases,
                        const DofMap& dofs, int resolution = 256);

}  // namespace dgife
