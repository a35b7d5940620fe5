#pragma once

#include <vector>

#include "dgife/geometry.hpp"

namespace dgife {

struct InvalidOrder : Error {
  using Error::Error;
};

struct QuadPoint {
  Point p;
  double w = 0.0;
};

struct QuadRule {
  std::vector<QuadPoint> pts;
  double total_weight() const;
};

struct LabeledQuadPoint {
  Point p;
  double w = 0.0;
  Side side = Side::Minus;
};

struct SplitQuadRule {
  std::vector<LabeledQuadPoint> pts;
  double total_weight() const;
};

// Gauss-Legendre nodes/weights on [0,1]; n points integrate degree 2n-1.
// n may exceed the public order cap; used internally by the 2D rules.
const std::vector<std::pair<double, double>>& gauss_legendre_01(int n);

// Rules below accept order in [1,10]; weights sum to the cell measure.
// Segment and rectangle rules are exact per variable to degree 2*order-1;
// the triangle rule is exact for total degree <= 2*order-1.
QuadRule gauss_segment(Point a, Point b, int order);
QuadRule gauss_rectangle(Point lo, Point hi, int order);
QuadRule gauss_triangle(Point p0, Point p1, Point p2, int order);

// Convex polygon rule by fanning triangles around the centroid.
QuadRule gauss_polygon(const std::vector<Point>& verts, int order);

double polygon_area(const std::vector<Point>& verts);
Point polygon_centroid(const std::vector<Point>& verts);

// Piece of a cut cell together with its side label.
struct SubPolygon {
  std::vector<Point> verts;  // counter-clockwise
  Side side = Side::Minus;
};

// Quadrature over a cut cell: one polygon rule per piece, points labeled
// with the side of the piece they came from.
SplitQuadRule split_cell_quadrature(const std::vector<SubPolygon>& pieces,
                                    int order);

// Rule over a convex polygon refined geometrically towards `center`
// (useful when the integrand has a point singularity there).  The
// sub-cell containing the center is quadrisected `levels` times; every
// other sub-cell gets the plain rule.  Falls back to gauss_polygon when
// the center lies outside the polygon.
QuadRule graded_polygon_rule(const std::vector<Point>& verts, Point center,
                             int levels, int order);

// Edge rule split at the interface crossing (if the edge is cut); each
// sub-segment is labeled by the side of the true level set at its midpoint.
SplitQuadRule split_edge_quadrature(Point a, Point b,
                                    const InterfaceCurve& curve, int order);

}  // namespace dgife
