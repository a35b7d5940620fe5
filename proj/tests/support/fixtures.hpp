#pragma once

#include <cmath>

#include "dgife/geometry.hpp"

namespace fixtures {

// Interface geometry used throughout the convergence studies.
inline double study_a() { return M_PI / 6.28; }
inline double study_b() { return 1.5 * study_a(); }
inline dgife::Point study_center() { return {-0.2, 0.1}; }

inline dgife::EllipseCurve study_ellipse() {
  return dgife::EllipseCurve(study_center(), study_a(), study_b());
}

}  // namespace fixtures
