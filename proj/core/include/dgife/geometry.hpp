#pragma once

#include <cmath>
#include <optional>

#include "dgife/errors.hpp"

namespace dgife {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point p) { return std::sqrt(p.x * p.x + p.y * p.y); }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline Point midpoint(Point a, Point b) {
  return {(a.x + b.x) / 2.0, (a.y + b.y) / 2.0};
}

// Side of the interface: Minus is the region where the level set is negative.
enum class Side { Minus, Plus, On };

inline Side opposite(Side s) {
  if (s == Side::Minus) return Side::Plus;
  if (s == Side::Plus) return Side::Minus;
  return Side::On;
}

struct BoundingBox {
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  bool contains(Point p) const {
    return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
  }
};

// Closed smooth curve given implicitly by a level set.  Immutable; all
// queries are pure.  Tolerances are absolute, scaled for an O(1) domain.
class InterfaceCurve {
 public:
  virtual ~InterfaceCurve() = default;

  virtual double level_set(Point p) const = 0;
  virtual Point level_set_gradient(Point p) const = 0;

  // Axis-aligned box known to contain the curve, if available.
  virtual std::optional<BoundingBox> curve_bounding_box() const {
    return std::nullopt;
  }

  Side side_of(Point p) const;

  // Single transversal crossing of the open segment (a,b), if any.
  // Throws MultipleRoots when a scan of the segment finds several
  // sign changes.  Returns nullopt when the segment does not cross.
  std::optional<Point> segment_intersection(Point a, Point b) const;

  // Unit normal (pointing from Minus to Plus) at a point on the curve.
  Point unit_normal(Point p) const;

  double tol_on() const { return tol_on_; }
  double tol_root() const { return tol_root_; }
  double tol_grad() const { return tol_grad_; }

 protected:
  double tol_on_ = 1e-12 * 2.8284271247461903;  // 1e-12 x domain diameter
  double tol_root_ = 1e-12;
  double tol_grad_ = 1e-10;
};

// Ellipse ((x-x0)/a)^2-style level set: phi = r(x,y)^2 - 1 with
// r^2 = (x-x0)^2/a^2 + (y-y0)^2/b^2.
class EllipseCurve final : public InterfaceCurve {
 public:
  EllipseCurve(Point center, double a, double b);

  double level_set(Point p) const override;
  Point level_set_gradient(Point p) const override;
  std::optional<BoundingBox> curve_bounding_box() const override;

  double radius(Point p) const;  // elliptical radius r(x,y)
  Point center() const { return center_; }
  double semi_axis_a() const { return a_; }
  double semi_axis_b() const { return b_; }

 private:
  Point center_;
  double a_, b_;
};

// Piecewise constant diffusion coefficient.
struct CoefficientField {
  double beta_minus = 1.0;
  double beta_plus = 1.0;

  double value(Side s) const {
    return s == Side::Plus ? beta_plus : beta_minus;
  }
  double min() const { return std::min(beta_minus, beta_plus); }
  double max() const { return std::max(beta_minus, beta_plus); }
  bool valid() const { return beta_minus > 0.0 && beta_plus > 0.0; }
};

}  // namespace dgife
