#include "dgife/mesh.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <ostream>

namespace dgife {

namespace {

constexpr double kLineTol = 1e-11;      // clustering of grid-line constants
constexpr double kSliverRel = 1e-12;    // sub-polygon area cutoff
constexpr double kBoundaryTol = 1e-11;

uint64_t bits(double v) {
  if (v == 0.0) v = 0.0;  // collapse -0
  return std::bit_cast<uint64_t>(v);
}

struct NodePool {
  std::map<std::pair<uint64_t, uint64_t>, int> index;
  std::vector<Point>* nodes;

  explicit NodePool(std::vector<Point>* n) : nodes(n) {
    for (int i = 0; i < static_cast<int>(n->size()); ++i)
      index.emplace(std::pair{bits((*n)[i].x), bits((*n)[i].y)}, i);
  }
  int add(Point p) {
    const std::pair key{bits(p.x), bits(p.y)};
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    const int id = static_cast<int>(nodes->size());
    nodes->push_back(p);
    index.emplace(key, id);
    return id;
  }
};

// ---- sub-edge construction ------------------------------------------------
//
// Every element side lies on a vertical, horizontal, or unit-slope diagonal
// grid line.  Collect the sides per line, cut each line at all endpoint
// parameters, and read off maximal intervals with a common owner pair.

struct LineSegment {
  double p0, p1;  // parameter interval (y on vertical lines, x otherwise)
  int elem;
  bool low;  // element lies on the negative side of the line normal
};

struct LineBucket {
  double key = 0;
  std::vector<LineSegment> segs;
};

// Cluster sorted values that differ by less than tol.
std::vector<double> canonical_values(std::vector<double> vals, double tol) {
  std::sort(vals.begin(), vals.end());
  std::vector<double> out;
  for (double v : vals) {
    if (out.empty() || v - out.back() > tol) out.push_back(v);
  }
  return out;
}

int canonical_index(const std::vector<double>& canon, double v, double tol) {
  auto it = std::lower_bound(canon.begin(), canon.end(), v - tol);
  if (it == canon.end() || std::abs(*it - v) > tol)
    throw Error("internal: edge sweep lost a breakpoint");
  return static_cast<int>(it - canon.begin());
}

enum Family { kVertical = 0, kHorizontal = 1, kDiagonal = 2 };

void emit_edges_for_line(const CartesianMesh& mesh, Family fam, double key,
                         const std::vector<LineSegment>& segs,
                         std::vector<MeshEdge>& out) {
  std::vector<double> breaks;
  breaks.reserve(segs.size() * 2);
  for (const auto& s : segs) {
    breaks.push_back(s.p0);
    breaks.push_back(s.p1);
  }
  const auto canon = canonical_values(std::move(breaks), kLineTol);
  const int m = static_cast<int>(canon.size()) - 1;
  if (m < 1) return;
  std::vector<int> low(m, -1), high(m, -1);
  for (const auto& s : segs) {
    const int i0 = canonical_index(canon, s.p0, kLineTol);
    const int i1 = canonical_index(canon, s.p1, kLineTol);
    for (int i = i0; i < i1; ++i) {
      int& slot = s.low ? low[i] : high[i];
      if (slot != -1) throw Error("internal: overlapping element sides");
      slot = s.elem;
    }
  }

  auto point_at = [&](double p) -> Point {
    switch (fam) {
      case kVertical:
        return {key, p};
      case kHorizontal:
        return {p, key};
      default:
        return {p, key + p};
    }
  };

  int i = 0;
  while (i < m) {
    if (low[i] == -1 && high[i] == -1) {
      ++i;
      continue;
    }
    int j = i + 1;
    while (j < m && low[j] == low[i] && high[j] == high[i]) ++j;

    MeshEdge edge;
    edge.a = point_at(canon[i]);
    edge.b = point_at(canon[j]);
    const double span = canon[j] - canon[i];
    edge.length = fam == kDiagonal ? span * std::sqrt(2.0) : span;

    if (low[i] != -1 && high[i] != -1) {
      const bool low_first = low[i] < high[i];
      edge.k1 = low_first ? low[i] : high[i];
      edge.k2 = low_first ? high[i] : low[i];
      // normal out of k1, i.e. across the line toward the other side
      Point n;
      switch (fam) {
        case kVertical:
          n = {1, 0};
          break;
        case kHorizontal:
          n = {0, 1};
          break;
        default:
          n = {-1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
          break;
      }
      edge.normal = low_first ? n : -1.0 * n;
      edge.boundary = false;
    } else {
      edge.k1 = low[i] != -1 ? low[i] : high[i];
      edge.k2 = -1;
      edge.boundary = true;
      // must be a domain boundary line; point outward
      if (fam == kVertical) {
        if (std::abs(key - mesh.xmin) <= kBoundaryTol)
          edge.normal = {-1, 0};
        else if (std::abs(key - mesh.xmax) <= kBoundaryTol)
          edge.normal = {1, 0};
        else
          throw Error("internal: uncovered interior vertical sub-edge");
      } else if (fam == kHorizontal) {
        if (std::abs(key - mesh.ymin) <= kBoundaryTol)
          edge.normal = {0, -1};
        else if (std::abs(key - mesh.ymax) <= kBoundaryTol)
          edge.normal = {0, 1};
        else
          throw Error("internal: uncovered interior horizontal sub-edge");
      } else {
        throw Error("internal: uncovered diagonal sub-edge");
      }
    }
    out.push_back(edge);
    i = j;
  }
}

void rebuild_edges(CartesianMesh& mesh) {
  mesh.edges.clear();
  std::array<std::vector<LineBucket>, 3> families;

  // bucket element sides by line
  std::array<std::vector<std::pair<double, LineSegment>>, 3> raw;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const auto poly = mesh.element_polygon(e);
    const Point c = mesh.element_centroid(e);
    const int nv = static_cast<int>(poly.size());
    for (int i = 0; i < nv; ++i) {
      const Point a = poly[i];
      const Point b = poly[(i + 1) % nv];
      LineSegment seg;
      seg.elem = e;
      Family fam;
      double key;
      if (a.x == b.x) {
        fam = kVertical;
        key = a.x;
        seg.p0 = std::min(a.y, b.y);
        seg.p1 = std::max(a.y, b.y);
        seg.low = c.x < key;
      } else if (a.y == b.y) {
        fam = kHorizontal;
        key = a.y;
        seg.p0 = std::min(a.x, b.x);
        seg.p1 = std::max(a.x, b.x);
        seg.low = c.y < key;
      } else {
        fam = kDiagonal;
        key = 0.5 * ((a.y - a.x) + (b.y - b.x));
        seg.p0 = std::min(a.x, b.x);
        seg.p1 = std::max(a.x, b.x);
        seg.low = (c.y - c.x) < key;
      }
      raw[fam].push_back({key, seg});
    }
  }

  for (int fam = 0; fam < 3; ++fam) {
    auto& entries = raw[fam];
    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto& l, const auto& r) {
                       return l.first < r.first;
                     });
    auto& buckets = families[fam];
    for (const auto& [key, seg] : entries) {
      if (buckets.empty() || key - buckets.back().key > kLineTol)
        buckets.push_back({key, {}});
      buckets.back().segs.push_back(seg);
    }
    for (const auto& bucket : buckets)
      emit_edges_for_line(mesh, static_cast<Family>(fam), bucket.key,
                          bucket.segs, mesh.edges);
  }
}

}  // namespace

// ---- mesh basics ----------------------------------------------------------

std::vector<Point> CartesianMesh::element_polygon(int e) const {
  const MeshElement& el = elements[e];
  std::vector<Point> poly(el.nv);
  for (int i = 0; i < el.nv; ++i) poly[i] = nodes[el.v[i]];
  return poly;
}

Point CartesianMesh::element_centroid(int e) const {
  const MeshElement& el = elements[e];
  double cx = 0, cy = 0;
  for (int i = 0; i < el.nv; ++i) {
    cx += nodes[el.v[i]].x;
    cy += nodes[el.v[i]].y;
  }
  return {cx / el.nv, cy / el.nv};
}

double CartesianMesh::element_area(int e) const {
  return polygon_area(element_polygon(e));
}

double CartesianMesh::element_h(int e) const {
  const auto box = element_bbox(e);
  return std::max(box.xmax - box.xmin, box.ymax - box.ymin);
}

BoundingBox CartesianMesh::element_bbox(int e) const {
  const MeshElement& el = elements[e];
  BoundingBox box{nodes[el.v[0]].x, nodes[el.v[0]].x, nodes[el.v[0]].y,
                  nodes[el.v[0]].y};
  for (int i = 1; i < el.nv; ++i) {
    const Point p = nodes[el.v[i]];
    box.xmin = std::min(box.xmin, p.x);
    box.xmax = std::max(box.xmax, p.x);
    box.ymin = std::min(box.ymin, p.y);
    box.ymax = std::max(box.ymax, p.y);
  }
  return box;
}

int CartesianMesh::max_level() const {
  int lvl = 0;
  for (const auto& el : elements) lvl = std::max(lvl, el.level);
  return lvl;
}

double CartesianMesh::shape_regularity() const {
  double c = 0;
  for (const auto& edge : edges) {
    c = std::max(c, element_h(edge.k1) / edge.length);
    if (edge.k2 >= 0) c = std::max(c, element_h(edge.k2) / edge.length);
  }
  return c;
}

bool CartesianMesh::on_domain_boundary(Point p) const {
  return std::abs(p.x - xmin) <= kBoundaryTol ||
         std::abs(p.x - xmax) <= kBoundaryTol ||
         std::abs(p.y - ymin) <= kBoundaryTol ||
         std::abs(p.y - ymax) <= kBoundaryTol;
}

CartesianMesh build_uniform(int n, CellKind kind, double xmin, double xmax,
                            double ymin, double ymax) {
  if (n < 1) throw Error("build_uniform: n must be positive");
  CartesianMesh mesh;
  mesh.kind = kind;
  mesh.xmin = xmin;
  mesh.xmax = xmax;
  mesh.ymin = ymin;
  mesh.ymax = ymax;
  mesh.base_n = n;

  const double hx = (xmax - xmin) / n;
  const double hy = (ymax - ymin) / n;
  mesh.nodes.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      mesh.nodes.push_back({i == n ? xmax : xmin + i * hx,
                            j == n ? ymax : ymin + j * hy});

  auto nid = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int v00 = nid(i, j), v10 = nid(i + 1, j);
      const int v11 = nid(i + 1, j + 1), v01 = nid(i, j + 1);
      if (kind == CellKind::Rectangle) {
        MeshElement el;
        el.kind = kind;
        el.nv = 4;
        el.v = {v00, v10, v11, v01};
        mesh.elements.push_back(el);
      } else {
        // shared diagonal from the lower-left to the upper-right corner
        MeshElement lo, up;
        lo.kind = up.kind = kind;
        lo.nv = up.nv = 3;
        lo.v = {v00, v10, v11, -1};
        up.v = {v00, v11, v01, -1};
        mesh.elements.push_back(lo);
        mesh.elements.push_back(up);
      }
    }

  rebuild_edges(mesh);
  return mesh;
}

CartesianMesh refine(const CartesianMesh& mesh,
                     const std::vector<int>& marked) {
  std::vector<char> is_marked(mesh.n_elements(), 0);
  for (int e : marked) {
    if (e < 0 || e >= mesh.n_elements())
      throw Error("refine: marked element out of range");
    is_marked[e] = 1;
  }

  CartesianMesh out;
  out.kind = mesh.kind;
  out.xmin = mesh.xmin;
  out.xmax = mesh.xmax;
  out.ymin = mesh.ymin;
  out.ymax = mesh.ymax;
  out.base_n = mesh.base_n;
  out.nodes = mesh.nodes;
  NodePool pool(&out.nodes);

  for (int e = 0; e < mesh.n_elements(); ++e) {
    const MeshElement& el = mesh.elements[e];
    if (!is_marked[e]) {
      out.elements.push_back(el);
      continue;
    }
    const auto p = mesh.element_polygon(e);
    if (el.kind == CellKind::Rectangle) {
      const Point m01 = midpoint(p[0], p[1]);
      const Point m12 = midpoint(p[1], p[2]);
      const Point m23 = midpoint(p[2], p[3]);
      const Point m30 = midpoint(p[3], p[0]);
      const Point c = midpoint(p[0], p[2]);
      const int i01 = pool.add(m01), i12 = pool.add(m12);
      const int i23 = pool.add(m23), i30 = pool.add(m30);
      const int ic = pool.add(c);
      const std::array<std::array<int, 4>, 4> kids = {{
          {el.v[0], i01, ic, i30},
          {i01, el.v[1], i12, ic},
          {ic, i12, el.v[2], i23},
          {i30, ic, i23, el.v[3]},
      }};
      for (const auto& kv : kids) {
        MeshElement kid;
        kid.kind = el.kind;
        kid.level = el.level + 1;
        kid.nv = 4;
        kid.v = {kv[0], kv[1], kv[2], kv[3]};
        out.elements.push_back(kid);
      }
    } else {
      const int m01 = pool.add(midpoint(p[0], p[1]));
      const int m12 = pool.add(midpoint(p[1], p[2]));
      const int m20 = pool.add(midpoint(p[2], p[0]));
      const std::array<std::array<int, 3>, 4> kids = {{
          {el.v[0], m01, m20},
          {m01, el.v[1], m12},
          {m20, m12, el.v[2]},
          {m01, m12, m20},
      }};
      for (const auto& kv : kids) {
        MeshElement kid;
        kid.kind = el.kind;
        kid.level = el.level + 1;
        kid.nv = 3;
        kid.v = {kv[0], kv[1], kv[2], -1};
        out.elements.push_back(kid);
      }
    }
  }

  rebuild_edges(out);
  return out;
}

void CartesianMesh::dump(std::ostream& os,
                         const ElementClassification* cls) const {
  char buf[256];
  for (const auto& p : nodes) {
    std::snprintf(buf, sizeof buf, "n %.17g %.17g\n", p.x, p.y);
    os << buf;
  }
  for (const auto& el : elements) {
    os << "e " << (el.kind == CellKind::Rectangle ? 'r' : 't') << ' '
       << el.level;
    for (int i = 0; i < el.nv; ++i) os << ' ' << el.v[i];
    os << '\n';
  }
  for (int i = 0; i < n_edges(); ++i) {
    const MeshEdge& ed = edges[i];
    int flags = ed.boundary ? 1 : 0;
    if (cls && cls->edge_is_interface[i]) flags |= 2;
    std::snprintf(buf, sizeof buf, "b %d %d %.17g %.17g %.17g %.17g %d\n",
                  ed.k1, ed.k2, ed.a.x, ed.a.y, ed.b.x, ed.b.y, flags);
    os << buf;
  }
}

// ---- classification -------------------------------------------------------

int ElementClassification::n_interface() const {
  int n = 0;
  for (char c : is_interface) n += c != 0;
  return n;
}

namespace {

bool boxes_overlap(const BoundingBox& a, const BoundingBox& b, double pad) {
  return a.xmin <= b.xmax + pad && b.xmin <= a.xmax + pad &&
         a.ymin <= b.ymax + pad && b.ymin <= a.ymax + pad;
}

BoundingBox segment_bbox(Point a, Point b) {
  return {std::min(a.x, b.x), std::max(a.x, b.x), std::min(a.y, b.y),
          std::max(a.y, b.y)};
}

Side majority_side(const InterfaceCurve& curve,
                   const std::vector<Point>& poly, Point centroid) {
  int minus = 0, plus = 0;
  for (const Point& p : poly) {
    const Side s = curve.side_of(p);
    if (s == Side::Minus) ++minus;
    if (s == Side::Plus) ++plus;
  }
  if (minus > plus) return Side::Minus;
  if (plus > minus) return Side::Plus;
  const Side c = curve.side_of(centroid);
  return c == Side::Plus ? Side::Plus : Side::Minus;
}

struct Candidate {
  Point p;
  int vertex = -1;  // vertex index when the cut passes through a vertex
  int side = -1;    // element side index for interior crossings
  double t = 0;     // parameter along the side
};

// Root of the level set on [a,b] given strictly opposite endpoint signs.
// Bisection is deterministic even if the curve grazes the segment between
// the endpoints; the sign change guarantees convergence to a crossing.
Point bisect_crossing(const InterfaceCurve& curve, Point a, Point b) {
  double fa = curve.level_set(a);
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 100 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    const Point m{a.x + mid * (b.x - a.x), a.y + mid * (b.y - a.y)};
    const double fm = curve.level_set(m);
    if (fm == 0.0) return m;
    if (fa * fm < 0.0) {
      hi = mid;
    } else {
      lo = mid;
      fa = fm;
    }
  }
  const double t = 0.5 * (lo + hi);
  return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
}

}  // namespace

ElementClassification classify(const CartesianMesh& mesh,
                               const InterfaceCurve& curve) {
  ElementClassification cls;
  const int ne = mesh.n_elements();
  cls.is_interface.assign(ne, 0);
  cls.element_side.assign(ne, Side::Plus);
  cls.cut_index.assign(ne, -1);

  const auto curve_box = curve.curve_bounding_box();

  for (int e = 0; e < ne; ++e) {
    const auto poly = mesh.element_polygon(e);
    const int nv = static_cast<int>(poly.size());
    const Point centroid = mesh.element_centroid(e);
    const double h = mesh.element_h(e);

    if (curve_box && !boxes_overlap(mesh.element_bbox(e), *curve_box, h)) {
      cls.element_side[e] = majority_side(curve, poly, centroid);
      continue;
    }

    // Candidates are driven by the vertex signs: a side is cut exactly
    // when its endpoints sit strictly on opposite sides. Interior grazes
    // with equal endpoint signs do not produce a cut.
    std::vector<Side> vsign(nv);
    for (int i = 0; i < nv; ++i) vsign[i] = curve.side_of(poly[i]);

    std::vector<Candidate> cands;
    for (int i = 0; i < nv; ++i)
      if (vsign[i] == Side::On) cands.push_back({poly[i], i, -1, 0.0});

    for (int i = 0; i < nv; ++i) {
      const int j = (i + 1) % nv;
      if (vsign[i] == Side::On || vsign[j] == Side::On) continue;
      if (vsign[i] == vsign[j]) continue;
      const Point a = poly[i];
      const Point b = poly[j];
      const Point hit = bisect_crossing(curve, a, b);
      const double len = norm(b - a);
      const double t = dot(hit - a, b - a) / (len * len);
      cands.push_back({hit, -1, i, t});
    }

    // merge candidates that coincide geometrically
    std::vector<Candidate> uniq;
    for (const auto& c : cands) {
      bool dup = false;
      for (auto& u : uniq)
        if (norm(u.p - c.p) < 1e-9 * h) {
          if (u.vertex < 0 && c.vertex >= 0) u = c;  // prefer vertex form
          dup = true;
          break;
        }
      if (!dup) uniq.push_back(c);
    }

    if (uniq.size() > 2)
      throw HypothesisViolation(
          e, "H2", "more than two interface crossing points on one element");

    if (uniq.size() < 2) {
      cls.element_side[e] = majority_side(curve, poly, centroid);
      continue;
    }

    const Candidate& cd = uniq[0];
    const Candidate& ce = uniq[1];

    // walk the polygon, inserting the interior crossing points
    std::vector<Point> walk;
    int pos_d = -1, pos_e = -1;
    for (int i = 0; i < nv; ++i) {
      if (cd.vertex == i) pos_d = static_cast<int>(walk.size());
      if (ce.vertex == i) pos_e = static_cast<int>(walk.size());
      walk.push_back(poly[i]);
      std::vector<const Candidate*> on_side;
      if (cd.side == i) on_side.push_back(&cd);
      if (ce.side == i) on_side.push_back(&ce);
      if (on_side.size() == 2 && on_side[0]->t > on_side[1]->t)
        std::swap(on_side[0], on_side[1]);
      for (const Candidate* c : on_side) {
        if (c == &cd) pos_d = static_cast<int>(walk.size());
        if (c == &ce) pos_e = static_cast<int>(walk.size());
        walk.push_back(c->p);
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
    std::vector<Point> piece1 = chain(pos_d, pos_e);
    std::vector<Point> piece2 = chain(pos_e, pos_d);

    const double area = polygon_area(poly);
    const double a1 = piece1.size() >= 3 ? polygon_area(piece1) : 0.0;
    const double a2 = piece2.size() >= 3 ? polygon_area(piece2) : 0.0;
    if (std::min(a1, a2) < kSliverRel * area) {
      cls.element_side[e] = majority_side(curve, poly, centroid);
      continue;
    }

    // Assign piece sides from the strict vertex signs they contain: the
    // chord separates the strictly-minus vertices from the strictly-plus
    // ones. The level set at a piece centroid is not a reliable arbiter
    // when the curve grazes a side of the element.
    auto piece_side = [&](const std::vector<Point>& piece) {
      double best = 0.0;
      Side s = Side::On;
      for (const Point& p : piece)
        for (int i = 0; i < nv; ++i)
          if (p.x == poly[i].x && p.y == poly[i].y &&
              vsign[i] != Side::On) {
            const double phi = curve.level_set(poly[i]);
            if (std::abs(phi) > std::abs(best)) {
              best = phi;
              s = vsign[i];
            }
          }
      return s;
    };
    const Side s1 = piece_side(piece1);
    const Side s2 = piece_side(piece2);
    if (s1 == s2 || s1 == Side::On || s2 == Side::On) {
      cls.element_side[e] = majority_side(curve, poly, centroid);
      continue;
    }

    CutInfo cut;
    cut.d = cd.p;
    cut.e = ce.p;
    cut.pieces.resize(2);
    if (s1 == Side::Minus) {
      cut.pieces[0] = {std::move(piece1), Side::Minus};
      cut.pieces[1] = {std::move(piece2), Side::Plus};
    } else {
      cut.pieces[0] = {std::move(piece2), Side::Minus};
      cut.pieces[1] = {std::move(piece1), Side::Plus};
    }
    const Point chord = cut.e - cut.d;
    Point nrm = {chord.y, -chord.x};
    const double nl = norm(nrm);
    if (nl == 0.0)
      throw HypothesisViolation(e, "H2", "degenerate chord");
    nrm = (1.0 / nl) * nrm;
    const Point cm = polygon_centroid(cut.pieces[0].verts);
    const Point cp = polygon_centroid(cut.pieces[1].verts);
    if (dot(nrm, cp - cm) < 0.0) nrm = -1.0 * nrm;
    cut.chord_normal = nrm;

    cls.is_interface[e] = 1;
    cls.cut_index[e] = static_cast<int>(cls.cuts.size());
    cls.cuts.push_back(std::move(cut));
  }

  // per-edge crossing flags
  const int nedges = mesh.n_edges();
  cls.edge_is_interface.assign(nedges, 0);
  cls.edge_crossing.assign(nedges, Point{});
  for (int i = 0; i < nedges; ++i) {
    const MeshEdge& ed = mesh.edges[i];
    if (curve_box &&
        !boxes_overlap(segment_bbox(ed.a, ed.b), *curve_box, 0.0))
      continue;
    const double fa = curve.level_set(ed.a);
    const double fb = curve.level_set(ed.b);
    if (std::abs(fa) <= curve.tol_on() || std::abs(fb) <= curve.tol_on())
      continue;
    if (fa * fb >= 0.0) continue;
    cls.edge_is_interface[i] = 1;
    cls.edge_crossing[i] = bisect_crossing(curve, ed.a, ed.b);
  }

  return cls;
}

namespace {

bool point_in_polygon(const std::vector<Point>& poly, Point p) {
  const int n = static_cast<int>(poly.size());
  for (int i = 0; i < n; ++i) {
    const Point a = poly[i];
    const Point b = poly[(i + 1) % n];
    if (cross(b - a, p - a) < 0.0) return false;  // CCW convex polygon
  }
  return true;
}

}  // namespace

std::optional<ValidationIssue> validate_hypotheses(
    const CartesianMesh& mesh, const ElementClassification& cls,
    const InterfaceCurve& curve) {
  for (int e = 0; e < mesh.n_elements(); ++e) {
    if (!cls.is_interface[e]) continue;
    const CutInfo& cut = cls.cuts[cls.cut_index[e]];
    if (norm(cut.e - cut.d) <= 0.0)
      return ValidationIssue{e, "H2", "zero-length chord"};
    const double area = mesh.element_area(e);
    const double sum = polygon_area(cut.pieces[0].verts) +
                       polygon_area(cut.pieces[1].verts);
    if (std::abs(sum - area) > 1e-9 * area)
      return ValidationIssue{e, "H2", "chord pieces do not tile element"};
    // crossing points must sit on the curve to root tolerance
    for (const Point p : {cut.d, cut.e})
      if (std::abs(curve.level_set(p)) > 1e-7)
        return ValidationIssue{e, "H2", "chord endpoint off the curve"};
  }

  // Witness probes: points well inside the curve's bounding box whose level
  // set sign contradicts the uniform label of their containing element mean
  // the mesh fails to resolve the curve (a closed curve inside one element
  // crosses no edge, so no element is marked as cut).
  const auto curve_box = curve.curve_bounding_box();
  if (curve_box) {
    std::vector<Point> witnesses;
    const int grid = 8;
    for (int i = 0; i <= grid; ++i)
      for (int j = 0; j <= grid; ++j)
        witnesses.push_back(
            {curve_box->xmin + (curve_box->xmax - curve_box->xmin) * i / grid,
             curve_box->ymin +
                 (curve_box->ymax - curve_box->ymin) * j / grid});
    for (const Point& w : witnesses) {
      const double phi = curve.level_set(w);
      // Points close to the curve cannot serve as witnesses: tiny caps cut
      // off by a near-tangent side are absorbed into uncut elements by
      // design, matching the vertex-sign classification.
      if (std::abs(phi) < 1e-2) continue;
      const Side s = phi < 0 ? Side::Minus : Side::Plus;
      for (int e = 0; e < mesh.n_elements(); ++e) {
        if (cls.is_interface[e]) continue;
        if (!mesh.element_bbox(e).contains(w)) continue;
        if (!point_in_polygon(mesh.element_polygon(e), w)) continue;
        if (cls.element_side[e] != s)
          return ValidationIssue{
              e, "H2", "interface passes through an uncut element"};
        break;
      }
    }
  }
  return std::nullopt;
}

}  // namespace dgife
