#include "dgife/geometry.hpp"

#include <cmath>

namespace dgife {

Side InterfaceCurve::side_of(Point p) const {
  const double phi = level_set(p);
  if (std::abs(phi) <= tol_on_) return Side::On;
  return phi < 0.0 ? Side::Minus : Side::Plus;
}

namespace {
constexpr int kScanSamples = 64;
}

std::optional<Point> InterfaceCurve::segment_intersection(Point a,
                                                          Point b) const {
  // Scan the segment, collect the sign pattern away from the curve, and
  // bracket each sign change.  More than one bracket means the segment
  // crosses the curve several times, which the mesh hypotheses forbid.
  double prev_t = 0.0;
  double prev_phi = 0.0;
  bool have_prev = false;
  int brackets = 0;
  double lo = 0.0, hi = 0.0, flo = 0.0;

  for (int k = 0; k <= kScanSamples; ++k) {
    const double t = static_cast<double>(k) / kScanSamples;
    const Point p = {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
    const double phi = level_set(p);
    if (std::abs(phi) <= tol_on_) continue;  // sitting on the curve
    if (have_prev && phi * prev_phi < 0.0) {
      ++brackets;
      lo = prev_t;
      hi = t;
      flo = prev_phi;
    }
    prev_t = t;
    prev_phi = phi;
    have_prev = true;
  }

  if (brackets > 1)
    throw MultipleRoots("segment crosses the interface more than once");
  if (brackets == 0) return std::nullopt;

  // Bisect the bracket well below the parameter tolerance so that
  // downstream split rules see an essentially exact crossing point.
  const double target = std::min(tol_root_, 1e-15);
  for (int it = 0; it < 80 && hi - lo > target; ++it) {
    const double mid = 0.5 * (lo + hi);
    const Point p = {a.x + mid * (b.x - a.x), a.y + mid * (b.y - a.y)};
    const double phi = level_set(p);
    if (phi == 0.0) {
      lo = hi = mid;
      break;
    }
    if (phi * flo < 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = phi;
    }
  }
  const double t = 0.5 * (lo + hi);
  return Point{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
}

Point InterfaceCurve::unit_normal(Point p) const {
  const Point g = level_set_gradient(p);
  const double n = norm(g);
  if (n < tol_grad_)
    throw DegenerateGradient("level-set gradient vanishes at query point");
  return (1.0 / n) * g;
}

EllipseCurve::EllipseCurve(Point center, double a, double b)
    : center_(center), a_(a), b_(b) {}

double EllipseCurve::radius(Point p) const {
  const double dx = (p.x - center_.x) / a_;
  const double dy = (p.y - center_.y) / b_;
  return std::sqrt(dx * dx + dy * dy);
}

double EllipseCurve::level_set(Point p) const {
  const double dx = (p.x - center_.x) / a_;
  const double dy = (p.y - center_.y) / b_;
  return dx * dx + dy * dy - 1.0;
}

Point EllipseCurve::level_set_gradient(Point p) const {
  return {2.0 * (p.x - center_.x) / (a_ * a_),
          2.0 * (p.y - center_.y) / (b_ * b_)};
}

std::optional<BoundingBox> EllipseCurve::curve_bounding_box() const {
  return BoundingBox{center_.x - a_, center_.x + a_, center_.y - b_,
                     center_.y + b_};
}

}  // namespace dgife
