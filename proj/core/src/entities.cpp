#include "csdc/entities.hpp"

#include <cmath>

namespace csdc {

namespace {

// cyclic vertex indexing: vertex i, others o1, o2 in cyclic order
constexpr int kOther1[3] = {1, 2, 0};
constexpr int kOther2[3] = {2, 0, 1};

}  // namespace

Entities entities(const ControlTriangle& tri, const Viewpoint& O, const Tolerances& tol) {
  Entities e;
  const auto& phi = tri.phi();
  double x = O.x, y = O.y, z = O.z;

  double ca = std::cos(phi[0]), cb = std::cos(phi[1]), cc = std::cos(phi[2]);
  e.eta_sq_raw = 1.0 - ca * ca - cb * cb - cc * cc + 2.0 * ca * cb * cc;
  e.eta = std::sqrt(std::max(0.0, e.eta_sq_raw));

  std::array<double, 3> sides2 = {tri.a() * tri.a(), tri.b() * tri.b(), tri.c() * tri.c()};

  bool want_c = std::abs(z) >= tol.viewpoint_on_point;
  double dcfac = want_c ? (1.0 - x * x - y * y) / (z * z) : 0.0;

  for (int i = 0; i < 3; ++i) {
    int o1 = kOther1[i], o2 = kOther2[i];
    double csc = 1.0 / std::sin((phi[o1] - phi[o2]) / 2.0);
    double sh = std::sin(phi[i] / 2.0), ch = std::cos(phi[i] / 2.0);
    auto P = tri.point(i);
    double xa = x + P[0], ya = y + P[1];
    e.A[i] = csc * (sh * (xa * xa - ya * ya) + 2.0 * ch * xa * ya);

    double mx = (tri.point(o1)[0] + tri.point(o2)[0]) / 2.0;
    double my = (tri.point(o1)[1] + tri.point(o2)[1]) / 2.0;
    double xb = x - mx, yb = y - my;
    e.B[i] = (sides2[o1] - sides2[o2]) / 4.0 -
             csc * (sh * (xb * xb - yb * yb) + 2.0 * ch * xb * yb);

    e.C[i] = e.B[i] * dcfac;

    double num = sides2[o1] * std::sin(phi[o2]) * std::sin(phi[o2]) -
                 sides2[o2] * std::sin(phi[o1]) * std::sin(phi[o1]);
    double scale = sides2[o1] + sides2[o2];
    if (std::abs(num) <= 1e-12 * scale) {
      e.F[i] = 0.0;  // numerator vanishes identically (symmetric sides)
      e.f_indeterminate[i] = std::abs(e.eta_sq_raw) <= 1e-12;
    } else if (std::abs(e.eta_sq_raw) > 1e-300) {
      e.F[i] = num / e.eta_sq_raw;
      e.f_indeterminate[i] = std::abs(e.eta_sq_raw) <= 1e-12;
    } else {
      e.F[i] = num > 0 ? HUGE_VAL : -HUGE_VAL;
      e.f_indeterminate[i] = true;
    }
  }
  return e;
}

std::array<double, 3> identity_residuals(const ControlTriangle& tri, const Viewpoint& O,
                                         const Tolerances& tol) {
  if (std::abs(O.z) < tol.viewpoint_on_point)
    throw ZeroHeight("identity residuals need z != 0");
  Entities e = entities(tri, O, tol);
  return {e.F[0] - e.A[0] - e.C[0], e.F[1] - e.A[1] - e.C[1], e.F[2] - e.A[2] - e.C[2]};
}

BasisCoeffs basis_coeffs(const ControlTriangle& tri, const Tolerances&) {
  const auto& phi = tri.phi();
  BasisCoeffs bc{};
  for (int i = 0; i < 3; ++i) {
    int o1 = kOther1[i], o2 = kOther2[i];
    double csc = 1.0 / std::sin((phi[o1] - phi[o2]) / 2.0);
    double sh = std::sin(phi[i] / 2.0), ch = std::cos(phi[i] / 2.0);
    auto P = tri.point(i);
    bc.k[i][0] = -2.0 * sh * csc;
    bc.k[i][1] = 2.0 * ch * csc;
    bc.k[i][2] = csc * (sh * (1.0 + P[1] * P[1] - P[0] * P[0]) + 2.0 * ch * P[0] * P[1]);
  }
  // invert the 2x2 system expressing (e1, e2) through (A_B, A_C)
  double m11 = bc.k[1][0], m12 = bc.k[1][1];
  double m21 = bc.k[2][0], m22 = bc.k[2][1];
  double det = m11 * m22 - m12 * m21;
  double nrm = std::sqrt(m11 * m11 + m12 * m12 + m21 * m21 + m22 * m22);
  bc.condition = std::abs(det) > 0 ? nrm * nrm / std::abs(det) : HUGE_VAL;
  if (!(std::abs(det) > 0) || bc.condition > 1e8)
    throw SingularEliminationSystem("entity basis system is singular");
  double i11 = m22 / det, i12 = -m12 / det;
  double i21 = -m21 / det, i22 = m11 / det;
  bc.E[0][0] = i11;
  bc.E[0][1] = i12;
  bc.E[0][2] = -(i11 * bc.k[1][2] + i12 * bc.k[2][2]);
  bc.E[1][0] = i21;
  bc.E[1][1] = i22;
  bc.E[1][2] = -(i21 * bc.k[1][2] + i22 * bc.k[2][2]);
  return bc;
}

BivariatePoly circle_implicit(const ControlTriangle&) {
  // On the circle, e1 = x^2 - x and e2^2 = (1 - x)(1 + x)^3; eliminating x
  // gives an implicit curve in the basis plane.  The specialization uses only
  // the basis functions, so the result does not depend on the triangle.
  using B = BivariatePoly;
  // p(x) = x^2 - x - u : ascending in x with bivariate coefficients
  std::vector<B> p = {B::monomial(1, 0, -1.0), B::constant(-1.0), B::constant(1.0)};
  // q(x) = -x^4 - 2x^3 + 2x + 1 - w^2
  std::vector<B> q = {B::constant(1.0) - B::monomial(0, 2, 1.0), B::constant(2.0),
                      B::constant(0.0), B::constant(-2.0), B::constant(-1.0)};
  return sylvester_resultant(p, q).normalized();
}

PrintedConstraintReadings printed_constraint_readings(double e1, double e2) {
  double cube = 4.0 * e1 - 1.0;
  double quad = 2.0 * e1 * e1 + 2.0 * e2 * e2 - 10.0 * e1 - 1.0;
  double c3 = cube * cube * cube;
  double q2 = quad * quad;
  return {c3 * q2, c3 + q2};
}

double p_constraint(const ControlTriangle& tri, const Viewpoint& O, const Tolerances& tol) {
  if (std::abs(O.z) < tol.viewpoint_on_point)
    throw ZeroHeight("p_constraint needs z != 0");
  BasisCoeffs bc = basis_coeffs(tri, tol);
  static thread_local BivariatePoly poly = circle_implicit(tri);
  double x = O.x, y = O.y, z = O.z;
  double A_B = bc.vertex_entity(1, x, y);
  double A_C = bc.vertex_entity(2, x, y);
  Entities e = entities(tri, O, tol);
  double C_B = e.C[1], C_C = e.C[2];
  double ea1 = bc.E[0][0] * A_B + bc.E[0][1] * A_C + bc.E[0][2];
  double ea2 = bc.E[1][0] * A_B + bc.E[1][1] * A_C + bc.E[1][2];
  double ec1 = bc.E[0][0] * C_B + bc.E[0][1] * C_C;
  double ec2 = bc.E[1][0] * C_B + bc.E[1][1] * C_C;
  double val = poly.eval(ea1 + ec1, ea2 + ec2);
  int deg = poly.total_degree();
  return val * std::pow(z, 2.0 * deg);
}

VanishingOrder dc_factor_order(const ControlTriangle& tri, const Viewpoint& start,
                               const Viewpoint& end, const Tolerances& tol) {
  auto at = [&](double t) {
    return Viewpoint{start.x + t * (end.x - start.x), start.y + t * (end.y - start.y),
                     start.z + t * (end.z - start.z)};
  };
  const int n = 257;
  double prev = dc_value(at(0.0));
  double tcross = -1.0;
  double min_abs = std::abs(prev);
  for (int i = 1; i < n; ++i) {
    double t = double(i) / (n - 1);
    double d = dc_value(at(t));
    min_abs = std::min(min_abs, std::abs(d));
    if (prev * d < 0.0 && tcross < 0.0) {
      // bisect
      double lo = double(i - 1) / (n - 1), hi = t, flo = prev;
      for (int k = 0; k < 80; ++k) {
        double mid = (lo + hi) / 2, fm = dc_value(at(mid));
        if (flo * fm <= 0.0)
          hi = mid;
        else {
          lo = mid;
          flo = fm;
        }
      }
      tcross = (lo + hi) / 2;
    }
    prev = d;
  }
  VanishingOrder out;
  if (tcross < 0.0) {
    if (min_abs <= 10.0 * tol.dc_membership)
      throw PathNotTransversal("path lies on the danger cylinder");
    // |dc| bounded away from zero: no dc factor measurable, order 0
    out.order = 0.0;
    out.dc_crossing = false;
    return out;
  }
  out.dc_crossing = true;
  double span = 1.0;
  for (int k = 1; k <= 9; ++k) {
    double eps = 1e-2 * span * std::pow(10.0, -0.5 * (k - 1));
    for (double sgn : {1.0, -1.0}) {
      double t = tcross + sgn * eps;
      if (t <= 0.0 || t >= 1.0) continue;
      Viewpoint P = at(t);
      double dv = std::abs(dc_value(P));
      double pv = std::abs(p_constraint(tri, P, tol));
      if (dv < 1e-300 || pv < 1e-300) continue;
      out.log_dc.push_back(std::log(dv));
      out.log_value.push_back(std::log(pv));
    }
  }
  if (out.log_dc.size() < 4) throw PathNotTransversal("not enough samples around crossing");
  // least squares slope
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  size_t m = out.log_dc.size();
  for (size_t i = 0; i < m; ++i) {
    sx += out.log_dc[i];
    sy += out.log_value[i];
    sxx += out.log_dc[i] * out.log_dc[i];
    sxy += out.log_dc[i] * out.log_value[i];
  }
  double denom = m * sxx - sx * sx;
  out.order = (m * sxy - sx * sy) / denom;
  double b = (sy - out.order * sx) / m;
  double r2 = 0.0;
  for (size_t i = 0; i < m; ++i) {
    double e = out.log_value[i] - (out.order * out.log_dc[i] + b);
    r2 += e * e;
  }
  out.fit_residual = std::sqrt(r2 / m);
  return out;
}

double deltoid_value(double x, double y) {
  double x2 = x * x, y2 = y * y;
  return x2 * x2 - 8.0 * x2 * x + 2.0 * x2 * y2 + 18.0 * x2 + 24.0 * x * y2 + y2 * y2 +
         18.0 * y2 - 27.0;
}

}  // namespace csdc
