#include "dgife/manufactured.hpp"

#include <cmath>

#include "dgife/errors.hpp"

namespace dgife {

namespace {
constexpr double kRadiusFloor = 1e-14;
}

ManufacturedSolution::ManufacturedSolution(EllipseCurve curve,
                                           CoefficientField beta, double p)
    : curve_(std::move(curve)), beta_(beta), p_(p) {
  if (!beta_.valid())
    throw ValidationError("beta", "coefficients must be positive");
  const double a = curve_.semi_axis_a();
  const double b = curve_.semi_axis_b();
  scale_ = a * a * b * b;
}

double ManufacturedSolution::radius_guarded(Point x, double min_power) const {
  const double r = curve_.radius(x);
  if (p_ < min_power && r < kRadiusFloor)
    throw SingularPoint("evaluation at the singular center of r^p");
  return r;
}

double ManufacturedSolution::value(Point x, Side s) const {
  const double r = radius_guarded(x, 0.0);
  const double rp = std::pow(r, p_);
  if (s == Side::Plus)
    return scale_ * (rp / beta_.beta_plus + 1.0 / beta_.beta_minus -
                     1.0 / beta_.beta_plus);
  return scale_ * rp / beta_.beta_minus;
}

Point ManufacturedSolution::gradient(Point x, Side s) const {
  const double r = radius_guarded(x, 2.0);
  // grad(r^p) = p r^(p-2) * ((x-x0)/a^2, (y-y0)/b^2)
  const double a = curve_.semi_axis_a();
  const double b = curve_.semi_axis_b();
  const Point c = curve_.center();
  const double common = p_ * std::pow(r, p_ - 2.0) * scale_ / beta_.value(s);
  return {common * (x.x - c.x) / (a * a), common * (x.y - c.y) / (b * b)};
}

double ManufacturedSolution::source(Point x, Side) const {
  const double r = radius_guarded(x, 4.0);
  const double a = curve_.semi_axis_a();
  const double b = curve_.semi_axis_b();
  const Point c = curve_.center();
  const double dx = x.x - c.x;
  const double dy = x.y - c.y;
  const double lap =
      p_ * (p_ - 2.0) * std::pow(r, p_ - 4.0) *
          (dx * dx / (a * a * a * a) + dy * dy / (b * b * b * b)) +
      p_ * std::pow(r, p_ - 2.0) * (1.0 / (a * a) + 1.0 / (b * b));
  return -scale_ * lap;
}

double ManufacturedSolution::nodal_value(Point x) const {
  const Side s = curve_.side_of(x);
  return value(x, s == Side::Plus ? Side::Plus : Side::Minus);
}

}  // namespace dgife
