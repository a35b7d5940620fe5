#pragma once

#include <array>
#include <functional>
#include <vector>

#include "dgife/geometry.hpp"
#include "dgife/mesh.hpp"

namespace dgife {

// Nodal basis of one element, stored as monomial coefficients in a local
// frame centered at the element centroid and scaled by the element size.
// Monomial order: {1, x, y, xy}; linear bases leave the xy slot at zero.
// Immersed bases keep one polynomial per side of the chord DE.
struct LocalBasis {
  enum class Kind { Standard, Immersed };

  int element = -1;
  Kind kind = Kind::Standard;
  int n = 0;  // number of nodal functions (3 triangle, 4 rectangle)
  Point center{};
  double scale = 1.0;
  // coeff[s][k][m]: polynomial of basis k on side s (0 minus, 1 plus)
  std::array<std::vector<std::array<double, 4>>, 2> coeff;
  Point chord_d{}, chord_e{};
  Point chord_normal{};  // unit normal of DE pointing into the plus piece
  double cond = 0.0;     // 1-norm condition number of the local system

  // Chord side of a point; points on the chord count as Minus.
  Side side_at(Point p) const;

  double value(int k, Point p) const { return value_on(k, p, side_at(p)); }
  Point grad(int k, Point p) const { return grad_on(k, p, side_at(p)); }
  double value_on(int k, Point p, Side s) const;
  Point grad_on(int k, Point p, Side s) const;
};

LocalBasis standard_basis(const CartesianMesh& mesh, int elem);
LocalBasis ife_basis(const CartesianMesh& mesh, int elem, const CutInfo& cut,
                     const CoefficientField& beta);

// Basis for any element given its classification.
LocalBasis element_basis(const CartesianMesh& mesh, int elem,
                         const ElementClassification& cls,
                         const CoefficientField& beta);

// Fully discontinuous numbering: each element owns d_K degrees of freedom.
struct DofMap {
  std::vector<int> offset;  // size n_elements + 1
  int total = 0;

  static DofMap build(const CartesianMesh& mesh);
  int operator()(int elem, int k) const { return offset[elem] + k; }
  int n_local(int elem) const { return offset[elem + 1] - offset[elem]; }
};

// Nodal interpolation: per element, the dof at vertex A_i is u(A_i).
std::vector<double> interpolate(const std::function<double(Point)>& u,
                                const CartesianMesh& mesh,
                                const DofMap& dofs);

}  // namespace dgife
