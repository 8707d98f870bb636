#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "csdc/dd.hpp"
#include "csdc/tolerances.hpp"

namespace csdc {

struct DegenerateTriangle : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ViewpointOnControlPoint : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Viewpoint {
  double x = 0, y = 0, z = 0;
};

// Cosines of the angles subtended at the optical center; alpha faces side a,
// beta side b, gamma side c.
struct AngleTriple {
  double cos_alpha, cos_beta, cos_gamma;
};

// Three control points on the unit circle, canonicalized so the polar angles
// sum to zero.  a = |BC|, b = |AC|, c = |AB|.
class ControlTriangle {
 public:
  static ControlTriangle make(double phi_a, double phi_b, double phi_c,
                              const Tolerances& tol = default_tolerances());

  const std::array<double, 3>& phi() const { return phi_; }
  // point(0)=A, point(1)=B, point(2)=C; z = 0 for all
  std::array<double, 2> point(int i) const { return pts_[i]; }
  double a() const { return sides_[0]; }
  double b() const { return sides_[1]; }
  double c() const { return sides_[2]; }
  double side(int i) const { return sides_[i]; }

 private:
  std::array<double, 3> phi_{};
  std::array<std::array<double, 2>, 3> pts_{};
  std::array<double, 3> sides_{};
};

ControlTriangle equilateral_triangle();

// Subtended-angle cosines seen from O; throws ViewpointOnControlPoint when O
// is within tol.viewpoint_on_point of a control point.
AngleTriple angles_from_viewpoint(const ControlTriangle& tri, const Viewpoint& O,
                                  const Tolerances& tol = default_tolerances());

// Same computation carried out in double-double; feeds the solver.
std::array<DD, 3> angles_from_viewpoint_dd(const ControlTriangle& tri, const Viewpoint& O);

// Distances |OA|, |OB|, |OC|.
std::array<double, 3> distances(const ControlTriangle& tri, const Viewpoint& O);

// x^2 + y^2 - 1; zero exactly on the danger cylinder.
inline double dc_value(const Viewpoint& O) { return O.x * O.x + O.y * O.y - 1.0; }

// Trilateration: all real points at the given distances from the control
// points.  Two mirror points (z >= 0 first), one tangent point, or empty.
std::vector<Viewpoint> centers_from_distances(const ControlTriangle& tri, double s1,
                                              double s2, double s3,
                                              const Tolerances& tol = default_tolerances());

}  // namespace csdc
