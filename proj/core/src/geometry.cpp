#include "csdc/geometry.hpp"

#include <cmath>

namespace csdc {

ControlTriangle ControlTriangle::make(double phi_a, double phi_b, double phi_c,
                                      const Tolerances& tol) {
  if (!std::isfinite(phi_a) || !std::isfinite(phi_b) || !std::isfinite(phi_c))
    throw DegenerateTriangle("control angles must be finite");
  ControlTriangle t;
  double shift = (phi_a + phi_b + phi_c) / 3.0;
  t.phi_ = {phi_a - shift, phi_b - shift, phi_c - shift};
  for (int i = 0; i < 3; ++i) {
    int j = (i + 1) % 3;
    double d = std::remainder(t.phi_[i] - t.phi_[j], 2.0 * M_PI);
    if (std::abs(d) < tol.triangle_distinct)
      throw DegenerateTriangle("two control points coincide");
  }
  for (int i = 0; i < 3; ++i) t.pts_[i] = {std::cos(t.phi_[i]), std::sin(t.phi_[i])};
  // a = |BC|, b = |AC|, c = |AB|: chord formula on the unit circle
  t.sides_[0] = 2.0 * std::abs(std::sin((t.phi_[1] - t.phi_[2]) / 2.0));
  t.sides_[1] = 2.0 * std::abs(std::sin((t.phi_[2] - t.phi_[0]) / 2.0));
  t.sides_[2] = 2.0 * std::abs(std::sin((t.phi_[0] - t.phi_[1]) / 2.0));
  return t;
}

ControlTriangle equilateral_triangle() {
  return ControlTriangle::make(0.0, 2.0 * M_PI / 3.0, -2.0 * M_PI / 3.0);
}

std::array<double, 3> distances(const ControlTriangle& tri, const Viewpoint& O) {
  std::array<double, 3> out;
  for (int i = 0; i < 3; ++i) {
    auto p = tri.point(i);
    out[i] = std::sqrt((O.x - p[0]) * (O.x - p[0]) + (O.y - p[1]) * (O.y - p[1]) + O.z * O.z);
  }
  return out;
}

AngleTriple angles_from_viewpoint(const ControlTriangle& tri, const Viewpoint& O,
                                  const Tolerances& tol) {
  auto d = distances(tri, O);
  for (int i = 0; i < 3; ++i)
    if (d[i] < tol.viewpoint_on_point)
      throw ViewpointOnControlPoint("viewpoint coincides with a control point");
  auto dd = angles_from_viewpoint_dd(tri, O);
  return {double(dd[0]), double(dd[1]), double(dd[2])};
}

std::array<DD, 3> angles_from_viewpoint_dd(const ControlTriangle& tri, const Viewpoint& O) {
  // rays[i] = O - P_i, exact doubles in, DD accumulation after
  std::array<std::array<DD, 3>, 3> rays;
  for (int i = 0; i < 3; ++i) {
    auto p = tri.point(i);
    rays[i] = {DD(O.x) - DD(p[0]), DD(O.y) - DD(p[1]), DD(O.z)};
  }
  auto dot = [](const std::array<DD, 3>& u, const std::array<DD, 3>& v) {
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
  };
  std::array<DD, 3> n2 = {dot(rays[0], rays[0]), dot(rays[1], rays[1]), dot(rays[2], rays[2])};
  // alpha between rays to B and C, beta A-C, gamma A-B
  std::array<DD, 3> out = {
      dot(rays[1], rays[2]) / sqrt(n2[1] * n2[2]),
      dot(rays[0], rays[2]) / sqrt(n2[0] * n2[2]),
      dot(rays[0], rays[1]) / sqrt(n2[0] * n2[1]),
  };
  return out;
}

std::vector<Viewpoint> centers_from_distances(const ControlTriangle& tri, double s1,
                                              double s2, double s3, const Tolerances& tol) {
  // Differencing the sphere equations removes the quadratic part; all control
  // points have |P| = 1, so the plane system is
  //   2 (P_j - P_0) . (x, y) = s1^2 - s_j^2.
  auto A = tri.point(0), B = tri.point(1), C = tri.point(2);
  double a11 = 2.0 * (B[0] - A[0]), a12 = 2.0 * (B[1] - A[1]);
  double a21 = 2.0 * (C[0] - A[0]), a22 = 2.0 * (C[1] - A[1]);
  double r1 = s1 * s1 - s2 * s2;
  double r2 = s1 * s1 - s3 * s3;
  double det = a11 * a22 - a12 * a21;
  double x = (r1 * a22 - r2 * a12) / det;
  double y = (a11 * r2 - a21 * r1) / det;
  double z2 = s1 * s1 - (x - A[0]) * (x - A[0]) - (y - A[1]) * (y - A[1]);
  std::vector<Viewpoint> out;
  if (z2 < -tol.trilateration_z2) return out;
  if (z2 <= tol.trilateration_z2) {
    out.push_back({x, y, 0.0});
    return out;
  }
  double z = std::sqrt(z2);
  out.push_back({x, y, z});
  out.push_back({x, y, -z});
  return out;
}

}  // namespace csdc
