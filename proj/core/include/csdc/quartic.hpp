#pragma once

#include <array>
#include <complex>

#include "csdc/dd.hpp"

namespace csdc {

// Roots of a real quartic given by double-double coefficients (ascending
// order).  The polynomial is re-centered at the root mean -c3/(4 c4) and
// rescaled so the roots are O(1) before the companion-matrix eigensolve;
// Newton polishing then runs against the double-double coefficients of the
// centered polynomial.  `scale` and `center` are exposed so callers can
// cluster roots in the well-conditioned scaled variable.
struct QuarticRoots {
  std::array<std::complex<double>, 4> v;  // roots in the original variable
  double center = 0.0;
  double scale = 1.0;
  std::array<std::complex<double>, 4> w;  // (v - center) / scale
  // |p''(w)|-based uncertainty radius for each scaled root; clustering treats
  // roots closer than this as numerically coincident
  std::array<double, 4> noise = {0, 0, 0, 0};
};

QuarticRoots solve_quartic(const std::array<DD, 5>& coeff);

// Evaluate the quartic (double image) and its discriminant.
double quartic_discriminant(const std::array<double, 5>& coeff);

}  // namespace csdc
