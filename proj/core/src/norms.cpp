#include "dgife/norms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace dgife {

namespace {

Side settle(Side s) { return s == Side::On ? Side::Minus : s; }

// Labeled volume rule of one element: split on cut cells, optionally
// graded towards the singular point on plain cells.
SplitQuadRule volume_rule(const CartesianMesh& mesh,
                          const ElementClassification& cls, int e, int order,
                          const std::optional<QuadGrading>& grading) {
  if (cls.is_interface[e])
    return split_cell_quadrature(cls.cuts[cls.cut_index[e]].pieces, order);
  const Side s = cls.element_side[e];
  SplitQuadRule out;
  QuadRule rule;
  const auto poly = mesh.element_polygon(e);
  bool graded = false;
  if (grading) {
    const BoundingBox bb = mesh.element_bbox(e);
    const double dx =
        std::max({bb.xmin - grading->center.x, 0.0,
                  grading->center.x - bb.xmax});
    const double dy =
        std::max({bb.ymin - grading->center.y, 0.0,
                  grading->center.y - bb.ymax});
    graded = std::hypot(dx, dy) <= grading->radius;
  }
  if (graded)
    rule = graded_polygon_rule(poly, grading->center, grading->levels, order);
  else if (poly.size() == 3)
    rule = gauss_triangle(poly[0], poly[1], poly[2], order);
  else
    rule = gauss_rectangle(poly[0], poly[2], order);
  for (const auto& q : rule.pts) out.pts.push_back({q.p, q.w, s});
  return out;
}

struct VolumeAcc {
  double l2 = 0, h1 = 0, energy = 0, linf = 0;
};

VolumeAcc element_volume_error(const std::vector<double>& u_h,
                               const ManufacturedSolution& sol,
                               const CartesianMesh& mesh,
                               const ElementClassification& cls,
                               const LocalBasis& basis, const DofMap& dofs,
                               int e, int order,
                               const std::optional<QuadGrading>& grading) {
  VolumeAcc acc;
  const auto rule = volume_rule(mesh, cls, e, order, grading);
  const auto& beta = sol.beta();
  for (const auto& qp : rule.pts) {
    double uh = 0;
    Point gh{0, 0};
    for (int k = 0; k < basis.n; ++k) {
      const double c = u_h[dofs(e, k)];
      uh += c * basis.value_on(k, qp.p, qp.side);
      const Point g = basis.grad_on(k, qp.p, qp.side);
      gh = gh + c * g;
    }
    const double diff = uh - sol.value(qp.p, qp.side);
    const Point gdiff = gh - sol.gradient(qp.p, qp.side);
    acc.l2 += qp.w * diff * diff;
    const double g2 = dot(gdiff, gdiff);
    acc.h1 += qp.w * g2;
    acc.energy += qp.w * beta.value(qp.side) * g2;
    acc.linf = std::max(acc.linf, std::abs(diff));
  }
  return acc;
}

}  // namespace

ErrorNorms compute_norms(const std::vector<double>& u_h,
                         const ManufacturedSolution& sol,
                         const CartesianMesh& mesh,
                         const ElementClassification& cls,
                         const std::vector<LocalBasis>& bases,
                         const DofMap& dofs, const DgConfig& config,
                         const std::optional<QuadGrading>& grading) {
  ErrorNorms out;
  double l2 = 0, h1 = 0, energy = 0, linf = 0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const VolumeAcc acc =
        element_volume_error(u_h, sol, mesh, cls, bases[e], dofs, e,
                             config.volume_order, grading);
    l2 += acc.l2;
    h1 += acc.h1;
    energy += acc.energy;
    linf = std::max(linf, acc.linf);
    const MeshElement& el = mesh.elements[e];
    for (int k = 0; k < el.nv; ++k) {
      const Point node = mesh.nodes[el.v[k]];
      const Side ts = settle(sol.curve().side_of(node));
      linf = std::max(linf,
                      std::abs(u_h[dofs(e, k)] - sol.value(node, ts)));
    }
  }
  // the exact solution is continuous, so the jump terms see only u_h
  for (int ed = 0; ed < mesh.n_edges(); ++ed) {
    const MeshEdge& edge = mesh.edges[ed];
    if (edge.boundary) continue;
    const double pen =
        config.sigma0 / std::pow(edge.length, config.alpha);
    const auto rule =
        interior_edge_rule(mesh, cls, sol.curve(), ed, config.edge_order);
    for (const auto& qp : rule.pts) {
      double j = 0;
      for (int k = 0; k < bases[edge.k1].n; ++k)
        j += u_h[dofs(edge.k1, k)] *
             bases[edge.k1].value_on(k, qp.p, qp.side);
      for (int k = 0; k < bases[edge.k2].n; ++k)
        j -= u_h[dofs(edge.k2, k)] *
             bases[edge.k2].value_on(k, qp.p, qp.side);
      energy += qp.w * pen * j * j;
    }
  }
  out.l2 = std::sqrt(l2);
  out.h1 = std::sqrt(h1);
  out.energy = std::sqrt(energy);
  out.linf = linf;
  return out;
}

std::vector<double> element_h1_errors(
    const std::vector<double>& u_h, const ManufacturedSolution& sol,
    const CartesianMesh& mesh, const ElementClassification& cls,
    const std::vector<LocalBasis>& bases, const DofMap& dofs, int order,
    const std::optional<QuadGrading>& grading) {
  std::vector<double> eta(mesh.n_elements(), 0.0);
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const VolumeAcc acc = element_volume_error(u_h, sol, mesh, cls, bases[e],
                                               dofs, e, order, grading);
    eta[e] = std::sqrt(acc.h1);
  }
  return eta;
}

std::vector<double> rates_log2(const std::vector<double>& errors) {
  std::vector<double> r(errors.size(),
                        std::numeric_limits<double>::quiet_NaN());
  for (size_t i = 1; i < errors.size(); ++i)
    r[i] = std::log2(errors[i - 1] / errors[i]);
  return r;
}

double slope_vs_dof(const std::vector<int>& dof,
                    const std::vector<double>& errors) {
  const size_t n = dof.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    const double x = std::log(static_cast<double>(dof[i]));
    const double y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void write_csv(std::ostream& os, const std::vector<StudyRow>& rows) {
  os << "N,DoF,Linf,Linf_rate,L2,L2_rate,H1semi,H1semi_rate,Energy,"
        "Energy_rate\n";
  char buf[64];
  for (size_t i = 0; i < rows.size(); ++i) {
    const StudyRow& r = rows[i];
    os << r.n << ',' << r.dof;
    const double vals[4] = {r.e.linf, r.e.l2, r.e.h1, r.e.energy};
    const double prev[4] = {i ? rows[i - 1].e.linf : 0,
                            i ? rows[i - 1].e.l2 : 0,
                            i ? rows[i - 1].e.h1 : 0,
                            i ? rows[i - 1].e.energy : 0};
    for (int c = 0; c < 4; ++c) {
      std::snprintf(buf, sizeof buf, "%.6e", vals[c]);
      os << ',' << buf;
      if (i == 0 || vals[c] == 0.0 || prev[c] == 0.0) {
        os << ',';
      } else {
        std::snprintf(buf, sizeof buf, "%.4f", std::log2(prev[c] / vals[c]));
        os << ',' << buf;
      }
    }
    os << '\n';
  }
}

void export_error_field(std::ostream& os, const std::vector<double>& u_h,
                        const ManufacturedSolution& sol,
                        const CartesianMesh& mesh,
                        const ElementClassification&,
                        const std::vector<LocalBasis>& bases,
                        const DofMap& dofs, int resolution) {
  // bucket grid for containment lookups on refined meshes
  const int nb = 128;
  const double wx = (mesh.xmax - mesh.xmin) / nb;
  const double wy = (mesh.ymax - mesh.ymin) / nb;
  std::vector<std::vector<int>> bucket(nb * nb);
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const BoundingBox bb = mesh.element_bbox(e);
    const int i0 = std::clamp(
        static_cast<int>((bb.xmin - mesh.xmin) / wx), 0, nb - 1);
    const int i1 = std::clamp(
        static_cast<int>((bb.xmax - mesh.xmin) / wx), 0, nb - 1);
    const int j0 = std::clamp(
        static_cast<int>((bb.ymin - mesh.ymin) / wy), 0, nb - 1);
    const int j1 = std::clamp(
        static_cast<int>((bb.ymax - mesh.ymin) / wy), 0, nb - 1);
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) bucket[j * nb + i].push_back(e);
  }
  auto inside = [&](int e, Point p) {
    const auto poly = mesh.element_polygon(e);
    const int n = static_cast<int>(poly.size());
    for (int i = 0; i < n; ++i)
      if (cross(poly[(i + 1) % n] - poly[i], p - poly[i]) < -1e-12)
        return false;
    return true;
  };

  char buf[96];
  for (int j = 0; j < resolution; ++j)
    for (int i = 0; i < resolution; ++i) {
      const Point p{
          mesh.xmin + (i + 0.5) * (mesh.xmax - mesh.xmin) / resolution,
          mesh.ymin + (j + 0.5) * (mesh.ymax - mesh.ymin) / resolution};
      const int bi = std::clamp(static_cast<int>((p.x - mesh.xmin) / wx), 0,
                                nb - 1);
      const int bj = std::clamp(static_cast<int>((p.y - mesh.ymin) / wy), 0,
                                nb - 1);
      int found = -1;
      for (const int e : bucket[bj * nb + bi])
        if (inside(e, p)) {
          found = e;
          break;
        }
      double err = 0;
      if (found >= 0) {
        double uh = 0;
        for (int k = 0; k < bases[found].n; ++k)
          uh += u_h[dofs(found, k)] * bases[found].value(k, p);
        const Side ts = settle(sol.curve().side_of(p));
        err = std::abs(uh - sol.value(p, ts));
      }
      std::snprintf(buf, sizeof buf, "%.10g %.10g %.12e\n", p.x, p.y, err);
      os << buf;
    }
}

}  // namespace dgife
