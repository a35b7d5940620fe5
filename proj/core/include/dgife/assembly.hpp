#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "dgife/geometry.hpp"
#include "dgife/ife.hpp"
#include "dgife/mesh.hpp"
#include "dgife/sparse.hpp"

namespace dgife {

// Interior-penalty parameters. epsilon selects the scheme family:
// -1 symmetric, 0 incomplete, +1 nonsymmetric.
struct DgConfig {
  int epsilon = -1;
  double alpha = 1.0;
  double sigma0 = 1000.0;
  int volume_order = 5;
  int edge_order = 5;

  void validate() const;  // throws ValidationError
};

// A scalar field that may jump across the interface.
using SidedField = std::function<double(Point, Side)>;
using BoundaryField = std::function<double(Point)>;

// Refine the right-hand-side quadrature towards a point singularity.
struct QuadGrading {
  Point center;
  int levels = 12;
  double radius = 0.0;  // also grade elements within this distance
};

std::vector<LocalBasis> build_bases(const CartesianMesh& mesh,
                                    const ElementClassification& cls,
                                    const CoefficientField& beta);

// Dense local blocks, row-major; exposed so tests can compare them
// against brute-force integration.
std::vector<double> element_volume_block(const CartesianMesh& mesh,
                                         const ElementClassification& cls,
                                         const LocalBasis& basis, int elem,
                                         const CoefficientField& beta,
                                         int order);

// Quadrature along one mesh edge split at the stored crossing, each
// sub-segment labeled by the level-set side of its midpoint.  Shared by
// the edge terms of the bilinear form and the jump norms.
SplitQuadRule interior_edge_rule(const CartesianMesh& mesh,
                                 const ElementClassification& cls,
                                 const InterfaceCurve& curve, int edge,
                                 int order);

// Coupling block of one interior edge over the stacked local dofs
// [owner k1 | owner k2]; square of size n1+n2.
std::vector<double> edge_coupling_block(const CartesianMesh& mesh,
                                        const ElementClassification& cls,
                                        const std::vector<LocalBasis>& bases,
                                        int edge,
                                        const CoefficientField& beta,
                                        const InterfaceCurve& curve,
                                        const DgConfig& config);

std::vector<Triplet> assemble_volume(const CartesianMesh& mesh,
                                     const ElementClassification& cls,
                                     const std::vector<LocalBasis>& bases,
                                     const DofMap& dofs,
                                     const CoefficientField& beta, int order);

// Throws MissingNeighbor when a non-boundary edge has a single owner.
std::vector<Triplet> assemble_edges(const CartesianMesh& mesh,
                                    const ElementClassification& cls,
                                    const std::vector<LocalBasis>& bases,
                                    const DofMap& dofs,
                                    const CoefficientField& beta,
                                    const InterfaceCurve& curve,
                                    const DgConfig& config);

std::vector<double> assemble_rhs(
    const SidedField& f, const CartesianMesh& mesh,
    const ElementClassification& cls, const std::vector<LocalBasis>& bases,
    const DofMap& dofs, int order,
    const std::optional<QuadGrading>& grading = std::nullopt);

// Gram matrix of the mesh-dependent energy norm: beta-weighted gradient
// volume terms plus the penalty jump terms.
CsrMatrix energy_gram(const CartesianMesh& mesh,
                      const ElementClassification& cls,
                      const std::vector<LocalBasis>& bases,
                      const DofMap& dofs, const CoefficientField& beta,
                      const InterfaceCurve& curve, const DgConfig& config);

struct DgSystem {
  CsrMatrix matrix;
  std::vector<double> rhs;
  DofMap dofs;
  std::vector<char> constrained;       // per dof: clamped to the boundary data
  std::vector<double> boundary_value;  // per dof, 0 when free
  std::vector<Point> row_coords;       // element centroid of each dof's row
};

// Dofs whose node lies on the domain boundary.
std::vector<char> boundary_dofs(const CartesianMesh& mesh,
                                const DofMap& dofs);

// Symmetric strong elimination of the constrained dofs on the triplet
// level: constrained rows become identity, columns move to the rhs.
void apply_dirichlet(std::vector<Triplet>& triplets, std::vector<double>& rhs,
                     const std::vector<char>& constrained,
                     const std::vector<double>& values);

// Full pipeline: volume + edge terms, rhs, Dirichlet data g interpolated
// at boundary nodes, eliminated symmetrically, compressed.
DgSystem assemble_system(
    const CartesianMesh& mesh, const ElementClassification& cls,
    const std::vector<LocalBasis>& bases, const CoefficientField& beta,
    const InterfaceCurve& curve, const SidedField& f, const BoundaryField& g,
    const DgConfig& config,
    const std::optional<QuadGrading>& grading = std::nullopt);

// Drop the flagged rows/columns (used for the coercivity probe on the
// interior dofs).
CsrMatrix restrict_matrix(const CsrMatrix& a, const std::vector<char>& drop);

// Coordinate text dump, "i j value" per line, 0-based indices.
void dump_matrix(std::ostream& os, const CsrMatrix& a);

}  // namespace dgife
