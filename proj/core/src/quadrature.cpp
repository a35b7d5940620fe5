#include "dgife/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace dgife {

double QuadRule::total_weight() const {
  double s = 0;
  for (const auto& q : pts) s += q.w;
  return s;
}

double SplitQuadRule::total_weight() const {
  double s = 0;
  for (const auto& q : pts) s += q.w;
  return s;
}

namespace {

constexpr int kMaxOrder = 10;

void check_order(int order) {
  if (order < 1 || order > kMaxOrder)
    throw InvalidOrder("quadrature order must be in [1," +
                       std::to_string(kMaxOrder) + "]");
}

// Legendre P_n and P_n' at x by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  if (n == 0) return {p0, 0.0};
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  const double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

std::vector<std::pair<double, double>> make_gauss_01(int n) {
  std::vector<std::pair<double, double>> rule(n);
  for (int k = 0; k < n; ++k) {
    // Newton from the Chebyshev estimate of the k-th root.
    double x = std::cos(M_PI * (k + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const auto [p, dp] = legendre(n, x);
    (void)p;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule[k] = {0.5 * (x + 1.0), 0.5 * w};  // shift [-1,1] -> [0,1]
  }
  std::sort(rule.begin(), rule.end());
  return rule;
}

}  // namespace

const std::vector<std::pair<double, double>>& gauss_legendre_01(int n) {
  if (n < 1 || n > kMaxOrder + 2)
    throw InvalidOrder("gauss_legendre_01: unsupported point count");
  static std::map<int, std::vector<std::pair<double, double>>> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss_01(n)).first;
  return it->second;
}

QuadRule gauss_segment(Point a, Point b, int order) {
  check_order(order);
  const auto& g = gauss_legendre_01(order);
  const double len = norm(b - a);
  QuadRule rule;
  rule.pts.reserve(g.size());
  for (const auto& [t, w] : g)
    rule.pts.push_back({{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)},
                        w * len});
  return rule;
}

QuadRule gauss_rectangle(Point lo, Point hi, int order) {
  check_order(order);
  const auto& g = gauss_legendre_01(order);
  const double wx = hi.x - lo.x, wy = hi.y - lo.y;
  QuadRule rule;
  rule.pts.reserve(g.size() * g.size());
  for (const auto& [tx, ax] : g)
    for (const auto& [ty, ay] : g)
      rule.pts.push_back(
          {{lo.x + tx * wx, lo.y + ty * wy}, ax * ay * wx * wy});
  return rule;
}

QuadRule gauss_triangle(Point p0, Point p1, Point p2, int order) {
  check_order(order);
  // Collapsed tensor rule: map (u,v) in [0,1]^2 to the reference triangle
  // via (x,y) = (u, v(1-u)), Jacobian (1-u).  order+1 points in u cover
  // the extra Jacobian degree, so total degree 2*order-1 is integrated
  // exactly.
  const auto& gu = gauss_legendre_01(order + 1);
  const auto& gv = gauss_legendre_01(order);
  const double det =
      (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
  QuadRule rule;
  rule.pts.reserve(gu.size() * gv.size());
  for (const auto& [u, au] : gu)
    for (const auto& [v, av] : gv) {
      const double x = u, y = v * (1.0 - u);
      rule.pts.push_back({{p0.x + x * (p1.x - p0.x) + y * (p2.x - p0.x),
                           p0.y + x * (p1.y - p0.y) + y * (p2.y - p0.y)},
                          au * av * (1.0 - u) * det});
    }
  return rule;
}

double polygon_area(const std::vector<Point>& verts) {
  double a = 0;
  const size_t n = verts.size();
  for (size_t i = 0; i < n; ++i) {
    const Point& p = verts[i];
    const Point& q = verts[(i + 1) % n];
    a += cross(p, q);
  }
  return 0.5 * a;
}

Point polygon_centroid(const std::vector<Point>& verts) {
  double a = 0, cx = 0, cy = 0;
  const size_t n = verts.size();
  for (size_t i = 0; i < n; ++i) {
    const Point& p = verts[i];
    const Point& q = verts[(i + 1) % n];
    const double w = cross(p, q);
    a += w;
    cx += (p.x + q.x) * w;
    cy += (p.y + q.y) * w;
  }
  if (std::abs(a) < 1e-300)
    throw DegenerateSubPolygon("polygon has zero area");
  return {cx / (3.0 * a), cy / (3.0 * a)};
}

QuadRule gauss_polygon(const std::vector<Point>& verts, int order) {
  check_order(order);
  if (verts.size() < 3)
    throw DegenerateSubPolygon("polygon with fewer than 3 vertices");
  const double area = polygon_area(verts);
  if (area <= 0.0)
    throw DegenerateSubPolygon("polygon area is not positive");
  const Point c = polygon_centroid(verts);
  QuadRule rule;
  const size_t n = verts.size();
  for (size_t i = 0; i < n; ++i) {
    const Point& p = verts[i];
    const Point& q = verts[(i + 1) % n];
    const double tri_area = 0.5 * cross(p - c, q - c);
    if (tri_area < 0.0)
      throw DegenerateSubPolygon("fan triangle with negative area");
    if (tri_area == 0.0) continue;  // collapsed corner of the fan
    auto tri = gauss_triangle(c, p, q, order);
    rule.pts.insert(rule.pts.end(), tri.pts.begin(), tri.pts.end());
  }
  if (rule.pts.empty())
    throw DegenerateSubPolygon("fan triangulation degenerated entirely");
  return rule;
}

SplitQuadRule split_cell_quadrature(const std::vector<SubPolygon>& pieces,
                                    int order) {
  check_order(order);
  SplitQuadRule rule;
  for (const auto& piece : pieces) {
    auto part = gauss_polygon(piece.verts, order);
    for (const auto& q : part.pts) rule.pts.push_back({q.p, q.w, piece.side});
  }
  return rule;
}

namespace {

bool point_in_convex(const std::vector<Point>& verts, Point p) {
  const size_t n = verts.size();
  for (size_t i = 0; i < n; ++i)
    if (cross(verts[(i + 1) % n] - verts[i], p - verts[i]) < 0.0) return false;
  return true;
}

// Quadrisect a triangle (edge midpoints) or a quadrilateral (edge
// midpoints plus centroid).  Other shapes are fanned into triangles.
std::vector<std::vector<Point>> quadrisect(const std::vector<Point>& v) {
  if (v.size() == 3) {
    const Point m01 = midpoint(v[0], v[1]);
    const Point m12 = midpoint(v[1], v[2]);
    const Point m20 = midpoint(v[2], v[0]);
    return {{v[0], m01, m20}, {m01, v[1], m12}, {m20, m12, v[2]},
            {m01, m12, m20}};
  }
  if (v.size() == 4) {
    const Point m01 = midpoint(v[0], v[1]);
    const Point m12 = midpoint(v[1], v[2]);
    const Point m23 = midpoint(v[2], v[3]);
    const Point m30 = midpoint(v[3], v[0]);
    const Point c = polygon_centroid(v);
    return {{v[0], m01, c, m30}, {m01, v[1], m12, c}, {c, m12, v[2], m23},
            {m30, c, m23, v[3]}};
  }
  std::vector<std::vector<Point>> out;
  const Point c = polygon_centroid(v);
  for (size_t i = 0; i < v.size(); ++i)
    out.push_back({c, v[i], v[(i + 1) % v.size()]});
  return out;
}

Side resolved_side(const InterfaceCurve& curve, Point p) {
  const Side s = curve.side_of(p);
  return s == Side::On ? Side::Minus : s;
}

}  // namespace

QuadRule graded_polygon_rule(const std::vector<Point>& verts, Point center,
                             int levels, int order) {
  check_order(order);
  if (levels <= 0 || !point_in_convex(verts, center))
    return gauss_polygon(verts, order);
  QuadRule rule;
  std::vector<Point> hot = verts;
  for (int l = 0; l < levels; ++l) {
    const auto children = quadrisect(hot);
    int next = -1;
    for (size_t c = 0; c < children.size(); ++c)
      if (next < 0 && point_in_convex(children[c], center))
        next = static_cast<int>(c);
    if (next < 0) break;  // center sits on an edge of every child
    for (size_t c = 0; c < children.size(); ++c) {
      if (static_cast<int>(c) == next) continue;
      auto part = gauss_polygon(children[c], order);
      rule.pts.insert(rule.pts.end(), part.pts.begin(), part.pts.end());
    }
    hot = children[static_cast<size_t>(next)];
  }
  auto part = gauss_polygon(hot, order);
  rule.pts.insert(rule.pts.end(), part.pts.begin(), part.pts.end());
  return rule;
}

SplitQuadRule split_edge_quadrature(Point a, Point b,
                                    const InterfaceCurve& curve, int order) {
  check_order(order);
  SplitQuadRule rule;
  const auto hit = curve.segment_intersection(a, b);
  if (hit) {
    const Point m = *hit;
    for (const auto& [p0, p1] : {std::pair{a, m}, std::pair{m, b}}) {
      if (norm(p1 - p0) == 0.0) continue;
      const Side s = resolved_side(curve, midpoint(p0, p1));
      auto seg = gauss_segment(p0, p1, order);
      for (const auto& q : seg.pts) rule.pts.push_back({q.p, q.w, s});
    }
  } else {
    const Side s = resolved_side(curve, midpoint(a, b));
    auto seg = gauss_segment(a, b, order);
    for (const auto& q : seg.pts) rule.pts.push_back({q.p, q.w, s});
  }
  return rule;
}

}  // namespace dgife
