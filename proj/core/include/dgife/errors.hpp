#pragma once

#include <stdexcept>
#include <string>

namespace dgife {

// Common base so callers can catch everything from this library at once.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// More than one root of the level set was detected on a segment.
struct MultipleRoots : Error {
  using Error::Error;
};

// Level-set gradient too small to define a normal direction.
struct DegenerateGradient : Error {
  using Error::Error;
};

// A mesh/interface configuration violates the geometric hypotheses
// (an edge cut more than once, or a cut not resolved by the mesh).
struct HypothesisViolation : Error {
  int element = -1;
  std::string reason;  // "H1" or "H2"
  HypothesisViolation(int elem, std::string why, const std::string& msg)
      : Error(msg), element(elem), reason(std::move(why)) {}
};

// Local immersed basis system is numerically singular.
struct SingularLocalSystem : Error {
  using Error::Error;
};

// A split quadrature rule was requested on a degenerate sub-polygon.
struct DegenerateSubPolygon : Error {
  using Error::Error;
};

// An edge marked interior has no second owner.
struct MissingNeighbor : Error {
  using Error::Error;
};

struct SingularMatrix : Error {
  int pivot = -1;
  SingularMatrix(int piv, const std::string& msg) : Error(msg), pivot(piv) {}
};

struct MaxIterations : Error {
  double achieved_residual = 0;
  MaxIterations(double res, const std::string& msg)
      : Error(msg), achieved_residual(res) {}
};

struct Breakdown : Error {
  using Error::Error;
};

struct NotConverged : Error {
  using Error::Error;
};

// Exact-solution evaluation at the singular point of a low-regularity case.
struct SingularPoint : Error {
  using Error::Error;
};

struct ParseError : Error {
  int line = 0;
  ParseError(int ln, const std::string& msg) : Error(msg), line(ln) {}
};

struct ValidationError : Error {
  std::string field;
  ValidationError(std::string fld, const std::string& msg)
      : Error(msg), field(std::move(fld)) {}
};

}  // namespace dgife
