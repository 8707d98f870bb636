#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "csdc/bivariate.hpp"
#include "csdc/geometry.hpp"

namespace csdc {

struct ZeroHeight : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SingularEliminationSystem : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PathNotTransversal : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The per-vertex algebraic entities evaluated verbatim from their printed
// definitions.  eta_sq_raw is kept unclamped because the sum-zero angle
// canonicalization makes it vanish identically (see identity survey); F is an
// indeterminate 0/0 in that regime and follows the rule: zero numerator gives
// zero, otherwise the raw quotient.
struct Entities {
  double eta = 0.0;
  double eta_sq_raw = 0.0;
  std::array<double, 3> A{}, B{}, C{}, F{};
  std::array<bool, 3> f_indeterminate{};
};

Entities entities(const ControlTriangle& tri, const Viewpoint& O,
                  const Tolerances& tol = default_tolerances());

// (F_A - A_A - C_A, ...) evaluated verbatim; diagnostic only.
std::array<double, 3> identity_residuals(const ControlTriangle& tri, const Viewpoint& O,
                                         const Tolerances& tol = default_tolerances());

// Coefficients of the vertex entities over the quadratic basis
// e1 = (x^2 - y^2 - 2x + 1)/2, e2 = xy + y, 1, and the inverse map expressing
// (e1, e2) through (A_B, A_C).
struct BasisCoeffs {
  double k[3][3];
  double E[2][3];
  double condition = 0.0;

  static double e1(double x, double y) { return (x * x - y * y - 2.0 * x + 1.0) / 2.0; }
  static double e2(double x, double y) { return x * y + y; }
  // basis-form evaluation of vertex entity i at (x, y)
  double vertex_entity(int i, double x, double y) const {
    return k[i][0] * e1(x, y) + k[i][1] * e2(x, y) + k[i][2];
  }
};

BasisCoeffs basis_coeffs(const ControlTriangle& tri,
                         const Tolerances& tol = default_tolerances());

// Implicit bivariate polynomial in (e1, e2) vanishing on the image of the
// unit circle, derived by eliminating x from the on-circle specializations
// e1 = x^2 - x and e2^2 = (1-x)(1+x)^3 via the Sylvester resultant.
// Normalized per BivariatePoly::normalized().
BivariatePoly circle_implicit(const ControlTriangle& tri);

// P-constraint diagnostic: transports F -> A + C through the basis
// coefficients into the circle implicit and clears z denominators with
// z^(2 * total degree).
double p_constraint(const ControlTriangle& tri, const Viewpoint& O,
                    const Tolerances& tol = default_tolerances());

// Printed-form evaluations of the circle constraint, both readings, kept for
// the survey report.
struct PrintedConstraintReadings {
  double product;  // (4 e1 - 1)^3 * (2 e1^2 + 2 e2^2 - 10 e1 - 1)^2
  double sum;      // (4 e1 - 1)^3 + (2 e1^2 + 2 e2^2 - 10 e1 - 1)^2
};
PrintedConstraintReadings printed_constraint_readings(double e1, double e2);

// Vanishing order of the P-constraint against dc_value along a straight
// path.  Requires a transversal danger-cylinder crossing; a path with
// |dc| bounded away from zero reports order 0 (no dc factor), and a path
// lying on the cylinder throws PathNotTransversal.
struct VanishingOrder {
  double order = 0.0;
  bool dc_crossing = false;
  double fit_residual = 0.0;
  std::vector<double> log_dc, log_value;
};
VanishingOrder dc_factor_order(const ControlTriangle& tri, const Viewpoint& start,
                               const Viewpoint& end,
                               const Tolerances& tol = default_tolerances());

// The z->infinity limit quartic of the companion surface.
double deltoid_value(double x, double y);

}  // namespace csdc
