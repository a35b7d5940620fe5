#pragma once

#include "dgife/geometry.hpp"

namespace dgife {

// Closed-form exact solution built from the elliptical radius: a power
// r^p scaled per side so that the value and the normal flux are both
// continuous across the curve.  p >= 2 is smooth; p < 2 has a point
// singularity in the derivatives at the ellipse center.
class ManufacturedSolution {
 public:
  ManufacturedSolution(EllipseCurve curve, CoefficientField beta, double p);

  double value(Point x, Side s) const;
  Point gradient(Point x, Side s) const;
  // f = -div(beta grad u); beta cancels, so both sides share one form.
  double source(Point x, Side s) const;

  // Evaluations with the side resolved from the level set; value is
  // continuous across the curve so nodal_value is single-valued.
  double nodal_value(Point x) const;
  double boundary(Point x) const { return nodal_value(x); }

  const EllipseCurve& curve() const { return curve_; }
  const CoefficientField& beta() const { return beta_; }
  double exponent() const { return p_; }
  Point singular_point() const { return curve_.center(); }
  bool singular() const { return p_ < 2.0; }

 private:
  double radius_guarded(Point x, double min_power) const;

  EllipseCurve curve_;
  CoefficientField beta_;
  double p_;
  double scale_;  // a^2 b^2
};

}  // namespace dgife
