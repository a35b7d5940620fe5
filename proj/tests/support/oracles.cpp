#include "support/oracles.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace oracle {

std::vector<double> dense_solve(std::vector<double> a, std::vector<double> b) {
  const size_t n = b.size();
  if (a.size() != n * n) throw std::invalid_argument("dense_solve: shape");
  for (size_t k = 0; k < n; ++k) {
    size_t piv = k;
    for (size_t i = k + 1; i < n; ++i)
      if (std::abs(a[i * n + k]) > std::abs(a[piv * n + k])) piv = i;
    if (std::abs(a[piv * n + k]) < 1e-300)
      throw std::runtime_error("dense_solve: singular");
    if (piv != k) {
      for (size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
      std::swap(b[k], b[piv]);
    }
    for (size_t i = k + 1; i < n; ++i) {
      const double f = a[i * n + k] / a[k * n + k];
      for (size_t j = k; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n);
  for (size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    for (size_t j = ii + 1; j < n; ++j) s -= a[ii * n + j] * x[j];
    x[ii] = s / a[ii * n + ii];
  }
  return x;
}

double shoelace(const std::vector<dgife::Point>& poly) {
  double s = 0;
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % n];
    s += p.x * q.y - q.x * p.y;
  }
  return 0.5 * s;
}

dgife::Point fd_gradient(const std::function<double(dgife::Point)>& f,
                         dgife::Point p, double h) {
  return {(f({p.x + h, p.y}) - f({p.x - h, p.y})) / (2 * h),
          (f({p.x, p.y + h}) - f({p.x, p.y - h})) / (2 * h)};
}

double ref_triangle_monomial(int a, int b) {
  // a! b! / (a+b+2)! written with binomials to stay in exact range
  double binom = 1.0;
  for (int k = 1; k <= b; ++k)
    binom = binom * (a + k) / k;  // C(a+b, b)
  return 1.0 / (binom * (a + b + 1) * (a + b + 2));
}

GaussTable gauss_table(int n) {
  switch (n) {
    case 1:
      return {{0.0}, {2.0}};
    case 2:
      return {{-0.5773502691896257, 0.5773502691896257}, {1.0, 1.0}};
    case 3:
      return {{-0.7745966692414834, 0.0, 0.7745966692414834},
              {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0}};
    case 4:
      return {{-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
               0.8611363115940526},
              {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
               0.3478548451374538}};
    case 5:
      return {{-0.9061798459386640, -0.5384693101056831, 0.0,
               0.5384693101056831, 0.9061798459386640},
              {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
               0.4786286704993665, 0.2369268850561891}};
    default:
      throw std::invalid_argument("gauss_table: n out of range");
  }
}

}  // namespace oracle

namespace support {

using dgife::Point;

dgife::CutInfo make_cut(const std::vector<dgife::Point>& poly, int sd,
                        double td, int se, double te) {
  const int nv = static_cast<int>(poly.size());
  auto at = [&](int side, double t) {
    const Point a = poly[side];
    const Point b = poly[(side + 1) % nv];
    return Point{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
  };

  std::vector<Point> walk;
  int pos_d = -1, pos_e = -1;
  for (int i = 0; i < nv; ++i) {
    walk.push_back(poly[i]);
    struct Ins { double t; int which; };
    std::vector<Ins> ins;
    if (sd == i) ins.push_back({td, 0});
    if (se == i) ins.push_back({te, 1});
    if (ins.size() == 2 && ins[0].t > ins[1].t) std::swap(ins[0], ins[1]);
    for (const auto& c : ins) {
      int pos;
      if (c.t == 0.0) {
        pos = static_cast<int>(walk.size()) - 1;  // the vertex itself
      } else {
        walk.push_back(at(i, c.t));
        pos = static_cast<int>(walk.size()) - 1;
      }
      (c.which == 0 ? pos_d : pos_e) = pos;
    }
  }

  const int nw = static_cast<int>(walk.size());
  auto chain = [&](int from, int to) {
    std::vector<Point> piece;
    for (int i = from;; i = (i + 1) % nw) {
      piece.push_back(walk[i]);
      if (i == to) break;
    }
    return piece;
  };

  dgife::CutInfo cut;
  cut.d = walk[pos_d];
  cut.e = walk[pos_e];
  cut.pieces.resize(2);
  cut.pieces[0] = {chain(pos_d, pos_e), dgife::Side::Minus};
  cut.pieces[1] = {chain(pos_e, pos_d), dgife::Side::Plus};

  auto centroid = [](const std::vector<Point>& p) {
    Point c{0, 0};
    for (const Point& q : p) c = c + q;
    return (1.0 / static_cast<double>(p.size())) * c;
  };
  const Point dir = cut.e - cut.d;
  Point n{dir.y, -dir.x};
  const double len = dgife::norm(n);
  n = (1.0 / len) * n;
  const Point cm = centroid(cut.pieces[0].verts);
  const Point cp = centroid(cut.pieces[1].verts);
  if (dgife::dot(n, cp - cm) < 0.0) n = -1.0 * n;
  cut.chord_normal = n;
  return cut;
}

RefImmersed RefImmersed::build(const std::vector<Point>& poly,
                               const dgife::CutInfo& cut, double bm,
                               double bp) {
  RefImmersed r;
  r.n = static_cast<int>(poly.size());
  r.poly = poly;
  r.cut = cut;
  r.bm = bm;
  r.bp = bp;

  const int nm = r.n == 3 ? 3 : 4;  // monomials per piece
  const int dim = 2 * nm;
  auto mono = [&](Point p) {
    return std::array<double, 4>{1.0, p.x, p.y, p.x * p.y};
  };
  auto vertex_minus = [&](Point v) {
    for (const Point& q : cut.pieces[0].verts)
      if (q.x == v.x && q.y == v.y) return true;
    return false;
  };

  std::vector<double> a(dim * dim, 0.0);
  int row = 0;
  for (int i = 0; i < r.n; ++i, ++row) {
    const auto m = mono(poly[i]);
    const int off = vertex_minus(poly[i]) ? 0 : nm;
    for (int j = 0; j < nm; ++j) a[row * dim + off + j] = m[j];
  }
  for (const Point p : {cut.d, cut.e}) {
    const auto m = mono(p);
    for (int j = 0; j < nm; ++j) {
      a[row * dim + j] = m[j];
      a[row * dim + nm + j] = -m[j];
    }
    ++row;
  }
  const Point nn = cut.chord_normal;
  if (r.n == 4) {
    a[row * dim + 3] = 1.0;
    a[row * dim + nm + 3] = -1.0;
    ++row;
  }
  {
    const Point mid = dgife::midpoint(cut.d, cut.e);
    a[row * dim + 1] = bm * nn.x;
    a[row * dim + 2] = bm * nn.y;
    if (r.n == 4) a[row * dim + 3] = bm * (nn.x * mid.y + nn.y * mid.x);
    a[row * dim + nm + 1] = -bp * nn.x;
    a[row * dim + nm + 2] = -bp * nn.y;
    if (r.n == 4)
      a[row * dim + nm + 3] = -bp * (nn.x * mid.y + nn.y * mid.x);
    ++row;
  }
  if (row != dim)
    throw std::logic_error("reference immersed system is not square");

  r.c.resize(r.n);
  for (int k = 0; k < r.n; ++k) {
    std::vector<double> rhs(dim, 0.0);
    rhs[k] = 1.0;
    const auto x = oracle::dense_solve(a, rhs);
    for (int m = 0; m < 4; ++m) {
      r.c[k][0][m] = m < nm ? x[m] : 0.0;
      r.c[k][1][m] = m < nm ? x[nm + m] : 0.0;
    }
  }
  return r;
}

double RefImmersed::value(int k, Point p, dgife::Side s) const {
  const auto& cc = c[k][s == dgife::Side::Plus ? 1 : 0];
  return cc[0] + cc[1] * p.x + cc[2] * p.y + cc[3] * p.x * p.y;
}

Point RefImmersed::grad(int k, Point p, dgife::Side s) const {
  const auto& cc = c[k][s == dgife::Side::Plus ? 1 : 0];
  return {cc[1] + cc[3] * p.y, cc[2] + cc[3] * p.x};
}

}  // namespace support
