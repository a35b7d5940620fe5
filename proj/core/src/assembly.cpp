#include "dgife/assembly.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include "dgife/errors.hpp"

namespace dgife {

void DgConfig::validate() const {
  if (epsilon != -1 && epsilon != 0 && epsilon != 1)
    throw ValidationError("epsilon", "epsilon must be -1, 0, or +1");
  if (!(alpha > 0.0))
    throw ValidationError("alpha", "alpha must be positive");
  if (sigma0 < 0.0)
    throw ValidationError("sigma0", "penalty must be non-negative");
  if (sigma0 == 0.0 && epsilon != 1)
    throw ValidationError(
        "sigma0", "a positive penalty is required unless epsilon is +1");
  if (volume_order < 1 || volume_order > 10)
    throw ValidationError("volume_order", "quadrature order out of range");
  if (edge_order < 1 || edge_order > 10)
    throw ValidationError("edge_order", "quadrature order out of range");
}

std::vector<LocalBasis> build_bases(const CartesianMesh& mesh,
                                    const ElementClassification& cls,
                                    const CoefficientField& beta) {
  std::vector<LocalBasis> bases;
  bases.reserve(mesh.n_elements());
  for (int e = 0; e < mesh.n_elements(); ++e)
    bases.push_back(element_basis(mesh, e, cls, beta));
  return bases;
}

namespace {

QuadRule plain_cell_rule(const CartesianMesh& mesh, int elem, int order) {
  const auto poly = mesh.element_polygon(elem);
  if (poly.size() == 3) return gauss_triangle(poly[0], poly[1], poly[2], order);
  return gauss_rectangle(poly[0], poly[2], order);
}

Side settle(Side s) { return s == Side::On ? Side::Minus : s; }

}  // namespace

// Built from the stored classification; never re-runs root finding, so a
// curve dipping twice through one edge (legitimately classified uncut)
// is integrated as a single piece.
SplitQuadRule interior_edge_rule(const CartesianMesh& mesh,
                                 const ElementClassification& cls,
                                 const InterfaceCurve& curve, int edge,
                                 int order) {
  const MeshEdge& ed = mesh.edges[edge];
  SplitQuadRule rule;
  auto append = [&](Point p0, Point p1) {
    if (norm(p1 - p0) == 0.0) return;
    const Side s = settle(curve.side_of(midpoint(p0, p1)));
    const QuadRule seg = gauss_segment(p0, p1, order);
    for (const auto& q : seg.pts) rule.pts.push_back({q.p, q.w, s});
  };
  if (cls.edge_is_interface[edge]) {
    append(ed.a, cls.edge_crossing[edge]);
    append(cls.edge_crossing[edge], ed.b);
  } else {
    append(ed.a, ed.b);
  }
  return rule;
}

namespace {

// Shared kernel of the edge bilinear terms.  cons scales the consistency
// term, eps the adjoint term, pen is the ready penalty weight.
std::vector<double> edge_block_impl(const CartesianMesh& mesh,
                                    const ElementClassification& cls,
                                    const std::vector<LocalBasis>& bases,
                                    int edge, const CoefficientField& beta,
                                    const InterfaceCurve& curve, int order,
                                    double cons, double eps, double pen) {
  const MeshEdge& ed = mesh.edges[edge];
  const int k1 = ed.k1, k2 = ed.k2;
  const int n1 = bases[k1].n, n2 = bases[k2].n;
  const int n = n1 + n2;
  std::vector<double> block(static_cast<size_t>(n) * n, 0.0);

  const SplitQuadRule rule = interior_edge_rule(mesh, cls, curve, edge, order);

  std::vector<double> val(n), flx(n), sgn(n);
  for (const auto& qp : rule.pts) {
    const double bq = beta.value(qp.side);
    for (int i = 0; i < n; ++i) {
      const int owner = i < n1 ? k1 : k2;
      const int local = i < n1 ? i : i - n1;
      val[i] = bases[owner].value_on(local, qp.p, qp.side);
      flx[i] = bq * dot(bases[owner].grad_on(local, qp.p, qp.side), ed.normal);
      sgn[i] = i < n1 ? 1.0 : -1.0;
    }
    for (int i = 0; i < n; ++i) {
      const double jv = sgn[i] * val[i];
      for (int j = 0; j < n; ++j) {
        block[static_cast<size_t>(i) * n + j] +=
            qp.w * (-0.5 * cons * jv * flx[j] +
                    0.5 * eps * flx[i] * sgn[j] * val[j] +
                    pen * jv * sgn[j] * val[j]);
      }
    }
  }
  return block;
}

void scatter_block(const std::vector<double>& block, const DofMap& dofs,
                   int k1, int n1, int k2, int n2,
                   std::vector<Triplet>& out) {
  const int n = n1 + n2;
  auto gdof = [&](int i) {
    return i < n1 ? dofs(k1, i) : dofs(k2, i - n1);
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double v = block[static_cast<size_t>(i) * n + j];
      if (v != 0.0) out.push_back({gdof(i), gdof(j), v});
    }
}

double bbox_distance(const BoundingBox& bb, Point c) {
  const double dx = std::max({bb.xmin - c.x, 0.0, c.x - bb.xmax});
  const double dy = std::max({bb.ymin - c.y, 0.0, c.y - bb.ymax});
  return std::hypot(dx, dy);
}

}  // namespace

std::vector<double> element_volume_block(const CartesianMesh& mesh,
                                         const ElementClassification& cls,
                                         const LocalBasis& basis, int elem,
                                         const CoefficientField& beta,
                                         int order) {
  const int n = basis.n;
  std::vector<double> block(static_cast<size_t>(n) * n, 0.0);
  auto accumulate = [&](Point p, double w, Side s) {
    const double bq = beta.value(s);
    for (int i = 0; i < n; ++i) {
      const Point gi = basis.grad_on(i, p, s);
      for (int j = i; j < n; ++j) {
        const Point gj = basis.grad_on(j, p, s);
        block[static_cast<size_t>(i) * n + j] += w * bq * dot(gi, gj);
      }
    }
  };
  if (cls.is_interface[elem]) {
    const CutInfo& cut = cls.cuts[cls.cut_index[elem]];
    const SplitQuadRule rule = split_cell_quadrature(cut.pieces, order);
    for (const auto& qp : rule.pts) accumulate(qp.p, qp.w, qp.side);
  } else {
    const Side s = cls.element_side[elem];
    const QuadRule rule = plain_cell_rule(mesh, elem, order);
    for (const auto& qp : rule.pts) accumulate(qp.p, qp.w, s);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j)
      block[static_cast<size_t>(i) * n + j] =
          block[static_cast<size_t>(j) * n + i];
  return block;
}

std::vector<double> edge_coupling_block(const CartesianMesh& mesh,
                                        const ElementClassification& cls,
                                        const std::vector<LocalBasis>& bases,
                                        int edge,
                                        const CoefficientField& beta,
                                        const InterfaceCurve& curve,
                                        const DgConfig& config) {
  const MeshEdge& ed = mesh.edges[edge];
  const double pen = config.sigma0 / std::pow(ed.length, config.alpha);
  return edge_block_impl(mesh, cls, bases, edge, beta, curve,
                         config.edge_order, 1.0, config.epsilon, pen);
}

std::vector<Triplet> assemble_volume(const CartesianMesh& mesh,
                                     const ElementClassification& cls,
                                     const std::vector<LocalBasis>& bases,
                                     const DofMap& dofs,
                                     const CoefficientField& beta,
                                     int order) {
  std::vector<Triplet> out;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const auto block =
        element_volume_block(mesh, cls, bases[e], e, beta, order);
    const int n = bases[e].n;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double v = block[static_cast<size_t>(i) * n + j];
        if (v != 0.0) out.push_back({dofs(e, i), dofs(e, j), v});
      }
  }
  return out;
}

std::vector<Triplet> assemble_edges(const CartesianMesh& mesh,
                                    const ElementClassification& cls,
                                    const std::vector<LocalBasis>& bases,
                                    const DofMap& dofs,
                                    const CoefficientField& beta,
                                    const InterfaceCurve& curve,
                                    const DgConfig& config) {
  std::vector<Triplet> out;
  for (int ed = 0; ed < mesh.n_edges(); ++ed) {
    const MeshEdge& e = mesh.edges[ed];
    if (e.boundary) continue;
    if (e.k2 < 0)
      throw MissingNeighbor("interior edge " + std::to_string(ed) +
                            " has a single owner");
    const auto block =
        edge_coupling_block(mesh, cls, bases, ed, beta, curve, config);
    scatter_block(block, dofs, e.k1, bases[e.k1].n, e.k2, bases[e.k2].n, out);
  }
  return out;
}

std::vector<double> assemble_rhs(
    const SidedField& f, const CartesianMesh& mesh,
    const ElementClassification& cls, const std::vector<LocalBasis>& bases,
    const DofMap& dofs, int order,
    const std::optional<QuadGrading>& grading) {
  std::vector<double> b(dofs.total, 0.0);
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const LocalBasis& basis = bases[e];
    auto accumulate = [&](Point p, double w, Side s) {
      const double fv = f(p, s);
      for (int i = 0; i < basis.n; ++i)
        b[dofs(e, i)] += w * fv * basis.value_on(i, p, s);
    };
    if (cls.is_interface[e]) {
      const CutInfo& cut = cls.cuts[cls.cut_index[e]];
      const SplitQuadRule rule = split_cell_quadrature(cut.pieces, order);
      for (const auto& qp : rule.pts) accumulate(qp.p, qp.w, qp.side);
    } else {
      const Side s = cls.element_side[e];
      const bool graded =
          grading &&
          bbox_distance(mesh.element_bbox(e), grading->center) <=
              grading->radius;
      const QuadRule rule =
          graded ? graded_polygon_rule(mesh.element_polygon(e),
                                       grading->center, grading->levels,
                                       order)
                 : plain_cell_rule(mesh, e, order);
      for (const auto& qp : rule.pts) accumulate(qp.p, qp.w, s);
    }
  }
  return b;
}

CsrMatrix energy_gram(const CartesianMesh& mesh,
                      const ElementClassification& cls,
                      const std::vector<LocalBasis>& bases,
                      const DofMap& dofs, const CoefficientField& beta,
                      const InterfaceCurve& curve, const DgConfig& config) {
  std::vector<Triplet> t =
      assemble_volume(mesh, cls, bases, dofs, beta, config.volume_order);
  for (int ed = 0; ed < mesh.n_edges(); ++ed) {
    const MeshEdge& e = mesh.edges[ed];
    if (e.boundary) continue;
    const double pen = config.sigma0 / std::pow(e.length, config.alpha);
    const auto block = edge_block_impl(mesh, cls, bases, ed, beta, curve,
                                       config.edge_order, 0.0, 0.0, pen);
    scatter_block(block, dofs, e.k1, bases[e.k1].n, e.k2, bases[e.k2].n, t);
  }
  return CsrMatrix::from_triplets(dofs.total, dofs.total, std::move(t));
}

std::vector<char> boundary_dofs(const CartesianMesh& mesh,
                                const DofMap& dofs) {
  std::vector<char> flag(dofs.total, 0);
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const MeshElement& el = mesh.elements[e];
    for (int k = 0; k < el.nv; ++k)
      if (mesh.on_domain_boundary(mesh.nodes[el.v[k]])) flag[dofs(e, k)] = 1;
  }
  return flag;
}

void apply_dirichlet(std::vector<Triplet>& triplets, std::vector<double>& rhs,
                     const std::vector<char>& constrained,
                     const std::vector<double>& values) {
  size_t keep = 0;
  for (const Triplet& t : triplets) {
    const bool ci = constrained[t.r] != 0;
    const bool cj = constrained[t.c] != 0;
    if (!ci && cj) rhs[t.r] -= t.v * values[t.c];
    if (!ci && !cj) triplets[keep++] = t;
  }
  triplets.resize(keep);
  for (size_t i = 0; i < constrained.size(); ++i)
    if (constrained[i]) {
      triplets.push_back({static_cast<int>(i), static_cast<int>(i), 1.0});
      rhs[i] = values[i];
    }
}

DgSystem assemble_system(const CartesianMesh& mesh,
                         const ElementClassification& cls,
                         const std::vector<LocalBasis>& bases,
                         const CoefficientField& beta,
                         const InterfaceCurve& curve, const SidedField& f,
                         const BoundaryField& g, const DgConfig& config,
                         const std::optional<QuadGrading>& grading) {
  config.validate();
  const DofMap dofs = DofMap::build(mesh);
  std::vector<Triplet> t =
      assemble_volume(mesh, cls, bases, dofs, beta, config.volume_order);
  {
    std::vector<Triplet> te =
        assemble_edges(mesh, cls, bases, dofs, beta, curve, config);
    t.insert(t.end(), te.begin(), te.end());
  }
  std::vector<double> b =
      assemble_rhs(f, mesh, cls, bases, dofs, config.volume_order, grading);

  DgSystem sys;
  sys.dofs = dofs;
  sys.constrained = boundary_dofs(mesh, dofs);
  sys.boundary_value.assign(dofs.total, 0.0);
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const MeshElement& el = mesh.elements[e];
    for (int k = 0; k < el.nv; ++k) {
      const int d = dofs(e, k);
      if (sys.constrained[d]) sys.boundary_value[d] = g(mesh.nodes[el.v[k]]);
    }
  }
  apply_dirichlet(t, b, sys.constrained, sys.boundary_value);
  sys.matrix = CsrMatrix::from_triplets(dofs.total, dofs.total, std::move(t));
  sys.rhs = std::move(b);
  sys.row_coords.resize(dofs.total);
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const Point c = mesh.element_centroid(e);
    for (int k = 0; k < mesh.elements[e].nv; ++k) sys.row_coords[dofs(e, k)] = c;
  }
  return sys;
}

CsrMatrix restrict_matrix(const CsrMatrix& a, const std::vector<char>& drop) {
  std::vector<int> remap(a.rows, -1);
  int kept = 0;
  for (int i = 0; i < a.rows; ++i)
    if (!drop[i]) remap[i] = kept++;
  std::vector<Triplet> t;
  for (int i = 0; i < a.rows; ++i) {
    if (drop[i]) continue;
    for (int k = a.ptr[i]; k < a.ptr[i + 1]; ++k)
      if (!drop[a.idx[k]]) t.push_back({remap[i], remap[a.idx[k]], a.val[k]});
  }
  return CsrMatrix::from_triplets(kept, kept, std::move(t));
}

void dump_matrix(std::ostream& os, const CsrMatrix& a) {
  os << std::setprecision(17);
  for (int i = 0; i < a.rows; ++i)
    for (int k = a.ptr[i]; k < a.ptr[i + 1]; ++k)
      os << i << ' ' << a.idx[k] << ' ' << a.val[k] << '\n';
}

}  // namespace dgife
