#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dgife/geometry.hpp"
#include "dgife/quadrature.hpp"

namespace dgife {

enum class CellKind { Triangle, Rectangle };

struct MeshElement {
  CellKind kind = CellKind::Rectangle;
  int level = 0;
  int nv = 4;
  std::array<int, 4> v{-1, -1, -1, -1};  // counter-clockwise node ids
};

// Sub-edge: a maximal common boundary segment between two elements (or
// between an element and the domain boundary).  With hanging nodes a
// coarse face decomposes into several sub-edges.
struct MeshEdge {
  int k1 = -1;          // owner with the smaller element id
  int k2 = -1;          // second owner, -1 on the domain boundary
  Point a, b;           // geometric endpoints
  Point normal;         // unit normal pointing out of k1
  double length = 0.0;
  bool boundary = false;
};

struct CartesianMesh {
  CellKind kind = CellKind::Rectangle;
  double xmin = -1, xmax = 1, ymin = -1, ymax = 1;
  int base_n = 0;  // base subdivisions per direction
  std::vector<Point> nodes;
  std::vector<MeshElement> elements;
  std::vector<MeshEdge> edges;

  int n_nodes() const { return static_cast<int>(nodes.size()); }
  int n_elements() const { return static_cast<int>(elements.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }

  std::vector<Point> element_polygon(int e) const;  // CCW vertices
  Point element_centroid(int e) const;
  double element_area(int e) const;
  // Mesh size of an element: longest axis-aligned extent.
  double element_h(int e) const;
  BoundingBox element_bbox(int e) const;
  int max_level() const;

  // max over edges and owners of h_K / |B|
  double shape_regularity() const;

  bool on_domain_boundary(Point p) const;

  void dump(std::ostream& os,
            const struct ElementClassification* cls = nullptr) const;
};

CartesianMesh build_uniform(int n, CellKind kind, double xmin = -1,
                            double xmax = 1, double ymin = -1,
                            double ymax = 1);

// Quadrisect the marked elements (arbitrary level differences allowed);
// unmarked elements keep their relative order, children replace parents
// in place.
CartesianMesh refine(const CartesianMesh& mesh,
                     const std::vector<int>& marked);

// Geometry of one cut element.
struct CutInfo {
  Point d, e;                      // chord endpoints on the element boundary
  Point chord_normal;              // unit, oriented Minus -> Plus
  std::vector<SubPolygon> pieces;  // the two chord sub-polygons
};

struct ElementClassification {
  std::vector<char> is_interface;   // per element
  std::vector<Side> element_side;   // side label for non-interface elements
  std::vector<int> cut_index;       // per element, -1 when not cut
  std::vector<CutInfo> cuts;
  std::vector<char> edge_is_interface;  // per mesh edge
  std::vector<Point> edge_crossing;     // valid when the edge is cut

  int n_interface() const;
};

// Classify every element against the curve.  Throws HypothesisViolation
// when a segment is crossed more than once or an element shows more than
// two crossing points.
ElementClassification classify(const CartesianMesh& mesh,
                               const InterfaceCurve& curve);

struct ValidationIssue {
  int element = -1;
  std::string reason;  // "H1" or "H2"
  std::string message;
};

// Re-check the geometric hypotheses on a classified mesh, including a
// sampling sweep that catches a curve the mesh failed to resolve.
std::optional<ValidationIssue> validate_hypotheses(
    const CartesianMesh& mesh, const ElementClassification& cls,
    const InterfaceCurve& curve);

}  // namespace dgife
