#include "dgife/ife.hpp"

#include <algorithm>
#include <cmath>

#include "dgife/errors.hpp"

namespace dgife {

namespace {

constexpr double kCondLimit = 1e12;

// Gauss-Jordan inverse with partial pivoting for the small local systems.
// Returns the 1-norm condition number estimate ||A||_1 ||A^-1||_1.
template <int N>
double invert(std::array<std::array<double, N>, N>& a) {
  std::array<std::array<double, N>, N> inv{};
  for (int i = 0; i < N; ++i) inv[i][i] = 1.0;

  double norm_a = 0.0;
  for (int j = 0; j < N; ++j) {
    double col = 0.0;
    for (int i = 0; i < N; ++i) col += std::abs(a[i][j]);
    norm_a = std::max(norm_a, col);
  }

  for (int k = 0; k < N; ++k) {
    int piv = k;
    for (int i = k + 1; i < N; ++i)
      if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
    if (a[piv][k] == 0.0)
      throw SingularLocalSystem("local interface system is singular");
    std::swap(a[k], a[piv]);
    std::swap(inv[k], inv[piv]);
    const double d = a[k][k];
    for (int j = 0; j < N; ++j) {
      a[k][j] /= d;
      inv[k][j] /= d;
    }
    for (int i = 0; i < N; ++i) {
      if (i == k) continue;
      const double f = a[i][k];
      if (f == 0.0) continue;
      for (int j = 0; j < N; ++j) {
        a[i][j] -= f * a[k][j];
        inv[i][j] -= f * inv[k][j];
      }
    }
  }

  double norm_inv = 0.0;
  for (int j = 0; j < N; ++j) {
    double col = 0.0;
    for (int i = 0; i < N; ++i) col += std::abs(inv[i][j]);
    norm_inv = std::max(norm_inv, col);
  }
  a = inv;
  return norm_a * norm_inv;
}

std::array<double, 4> monomials(Point xi) {
  return {1.0, xi.x, xi.y, xi.x * xi.y};
}

}  // namespace

Side LocalBasis::side_at(Point p) const {
  const double d = dot(p - chord_d, chord_normal);
  return d > 0.0 ? Side::Plus : Side::Minus;
}

double LocalBasis::value_on(int k, Point p, Side s) const {
  const int side = (kind == Kind::Immersed && s == Side::Plus) ? 1 : 0;
  const Point xi{(p.x - center.x) / scale, (p.y - center.y) / scale};
  const auto m = monomials(xi);
  const auto& c = coeff[side][k];
  return c[0] * m[0] + c[1] * m[1] + c[2] * m[2] + c[3] * m[3];
}

Point LocalBasis::grad_on(int k, Point p, Side s) const {
  const int side = (kind == Kind::Immersed && s == Side::Plus) ? 1 : 0;
  const Point xi{(p.x - center.x) / scale, (p.y - center.y) / scale};
  const auto& c = coeff[side][k];
  return {(c[1] + c[3] * xi.y) / scale, (c[2] + c[3] * xi.x) / scale};
}

LocalBasis standard_basis(const CartesianMesh& mesh, int elem) {
  const auto poly = mesh.element_polygon(elem);
  const int n = static_cast<int>(poly.size());

  LocalBasis b;
  b.element = elem;
  b.kind = LocalBasis::Kind::Standard;
  b.n = n;
  b.center = mesh.element_centroid(elem);
  b.scale = mesh.element_h(elem);

  if (n == 3) {
    std::array<std::array<double, 3>, 3> a{};
    for (int i = 0; i < 3; ++i) {
      const Point xi{(poly[i].x - b.center.x) / b.scale,
                     (poly[i].y - b.center.y) / b.scale};
      a[i] = {1.0, xi.x, xi.y};
    }
    b.cond = invert<3>(a);
    b.coeff[0].assign(3, {});
    for (int k = 0; k < 3; ++k)
      for (int m = 0; m < 3; ++m) b.coeff[0][k][m] = a[m][k];
  } else {
    std::array<std::array<double, 4>, 4> a{};
    for (int i = 0; i < 4; ++i) {
      const Point xi{(poly[i].x - b.center.x) / b.scale,
                     (poly[i].y - b.center.y) / b.scale};
      a[i] = monomials(xi);
    }
    b.cond = invert<4>(a);
    b.coeff[0].assign(4, {});
    for (int k = 0; k < 4; ++k)
      for (int m = 0; m < 4; ++m) b.coeff[0][k][m] = a[m][k];
  }
  b.coeff[1] = b.coeff[0];
  return b;
}

LocalBasis ife_basis(const CartesianMesh& mesh, int elem, const CutInfo& cut,
                     const CoefficientField& beta) {
  const auto poly = mesh.element_polygon(elem);
  const int nv = static_cast<int>(poly.size());

  LocalBasis b;
  b.element = elem;
  b.kind = LocalBasis::Kind::Immersed;
  b.n = nv;
  b.center = mesh.element_centroid(elem);
  b.scale = mesh.element_h(elem);
  b.chord_d = cut.d;
  b.chord_e = cut.e;
  b.chord_normal = cut.chord_normal;

  auto local = [&](Point p) {
    return Point{(p.x - b.center.x) / b.scale, (p.y - b.center.y) / b.scale};
  };

  // Vertex sides by membership in the minus piece (bitwise: pieces hold
  // verbatim copies of the element vertices).
  std::vector<int> vside(nv, 1);
  for (int i = 0; i < nv; ++i)
    for (const Point& q : cut.pieces[0].verts)
      if (q.x == poly[i].x && q.y == poly[i].y) {
        vside[i] = 0;
        break;
      }

  const auto md = monomials(local(cut.d));
  const auto me = monomials(local(cut.e));
  const Point nrm = cut.chord_normal;
  const double bm = beta.value(Side::Minus);
  const double bp = beta.value(Side::Plus);
  const double bscale = std::max(bm, bp);

  if (nv == 3) {
    // unknowns: [minus c0 c1 c2 | plus c0 c1 c2]
    std::array<std::array<double, 6>, 6> a{};
    for (int i = 0; i < 3; ++i) {
      const auto m = monomials(local(poly[i]));
      const int off = vside[i] == 0 ? 0 : 3;
      for (int j = 0; j < 3; ++j) a[i][off + j] = m[j];
    }
    for (int j = 0; j < 3; ++j) {
      a[3][j] = md[j];
      a[3][3 + j] = -md[j];
      a[4][j] = me[j];
      a[4][3 + j] = -me[j];
    }
    // constant gradients: beta^- grad^- . n = beta^+ grad^+ . n
    a[5][1] = bm * nrm.x / bscale;
    a[5][2] = bm * nrm.y / bscale;
    a[5][4] = -bp * nrm.x / bscale;
    a[5][5] = -bp * nrm.y / bscale;

    b.cond = invert<6>(a);
    if (b.cond > kCondLimit)
      throw SingularLocalSystem("interface cut yields an ill-conditioned "
                                "local system");
    b.coeff[0].assign(3, {});
    b.coeff[1].assign(3, {});
    for (int k = 0; k < 3; ++k)
      for (int r = 0; r < 6; ++r) {
        // solution for nodal rhs e_k is column k of the inverse
        const double v = a[r][k];
        if (r < 3)
          b.coeff[0][k][r] = v;
        else
          b.coeff[1][k][r - 3] = v;
      }
  } else {
    // unknowns: [minus c0..c3 | plus c0..c3], monomials {1, x, y, xy}
    std::array<std::array<double, 8>, 8> a{};
    for (int i = 0; i < 4; ++i) {
      const auto m = monomials(local(poly[i]));
      const int off = vside[i] == 0 ? 0 : 4;
      for (int j = 0; j < 4; ++j) a[i][off + j] = m[j];
    }
    for (int j = 0; j < 4; ++j) {
      a[4][j] = md[j];
      a[4][4 + j] = -md[j];
      a[5][j] = me[j];
      a[5][4 + j] = -me[j];
    }
    // equal twist coefficients
    a[6][3] = 1.0;
    a[6][7] = -1.0;
    // zero mean flux jump along the chord; the jump is linear in arc
    // length, so the midpoint value represents the integral exactly
    const Point mid = midpoint(cut.d, cut.e);
    const Point xim = local(mid);
    a[7][1] = bm * nrm.x / bscale;
    a[7][2] = bm * nrm.y / bscale;
    a[7][3] = bm * (nrm.x * xim.y + nrm.y * xim.x) / bscale;
    a[7][5] = -bp * nrm.x / bscale;
    a[7][6] = -bp * nrm.y / bscale;
    a[7][7] = -bp * (nrm.x * xim.y + nrm.y * xim.x) / bscale;

    b.cond = invert<8>(a);
    if (b.cond > kCondLimit)
      throw SingularLocalSystem("interface cut yields an ill-conditioned "
                                "local system");
    b.coeff[0].assign(4, {});
    b.coeff[1].assign(4, {});
    for (int k = 0; k < 4; ++k)
      for (int r = 0; r < 8; ++r) {
        const double v = a[r][k];
        if (r < 4)
          b.coeff[0][k][r] = v;
        else
          b.coeff[1][k][r - 4] = v;
      }
  }
  return b;
}

LocalBasis element_basis(const CartesianMesh& mesh, int elem,
                         const ElementClassification& cls,
                         const CoefficientField& beta) {
  if (cls.is_interface[elem])
    return ife_basis(mesh, elem, cls.cuts[cls.cut_index[elem]], beta);
  return standard_basis(mesh, elem);
}

DofMap DofMap::build(const CartesianMesh& mesh) {
  DofMap d;
  const int ne = mesh.n_elements();
  d.offset.resize(ne + 1);
  d.offset[0] = 0;
  for (int e = 0; e < ne; ++e)
    d.offset[e + 1] = d.offset[e] + mesh.elements[e].nv;
  d.total = d.offset[ne];
  return d;
}

std::vector<double> interpolate(const std::function<double(Point)>& u,
                                const CartesianMesh& mesh,
                                const DofMap& dofs) {
  std::vector<double> v(dofs.total, 0.0);
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const auto poly = mesh.element_polygon(e);
    for (int k = 0; k < static_cast<int>(poly.size()); ++k)
      v[dofs(e, k)] = u(poly[k]);
  }
  return v;
}

}  // namespace dgife
