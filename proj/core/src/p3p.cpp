#include "csdc/p3p.hpp"

#include <algorithm>
#include <cmath>

namespace csdc {

namespace {

// short dense polynomials in v with DD coefficients
using Poly = std::vector<DD>;

Poly mul(const Poly& x, const Poly& y) {
  Poly r(x.size() + y.size() - 1, DD(0.0));
  for (size_t i = 0; i < x.size(); ++i)
    for (size_t j = 0; j < y.size(); ++j) r[i + j] += x[i] * y[j];
  return r;
}

Poly sub(const Poly& x, const Poly& y) {
  Poly r(std::max(x.size(), y.size()), DD(0.0));
  for (size_t i = 0; i < x.size(); ++i) r[i] += x[i];
  for (size_t i = 0; i < y.size(); ++i) r[i] -= y[i];
  return r;
}

struct Quadrics {
  // p(u) = p2 u^2 + p1 u + p0(v),  q(u) = q2 u^2 + q1(v) u + q0(v)
  DD p2, p1;
  Poly p0;
  DD q2;
  Poly q1, q0;
};

Quadrics build_quadrics(const ControlTriangle& tri, const AngleTriple& ang) {
  DD a2 = DD(tri.a()) * DD(tri.a());
  DD b2 = DD(tri.b()) * DD(tri.b());
  DD c2 = DD(tri.c()) * DD(tri.c());
  DD ca(ang.cos_alpha), cb(ang.cos_beta), cc(ang.cos_gamma);
  Quadrics q;
  q.p2 = b2;
  q.p1 = DD(-2.0) * b2 * cc;
  q.p0 = {b2 - c2, DD(2.0) * c2 * cb, -c2};
  q.q2 = c2 - a2;
  q.q1 = {DD(2.0) * a2 * cc, DD(-2.0) * c2 * ca};
  q.q0 = {-a2, DD(0.0), c2};
  return q;
}

std::array<DD, 5> resultant_quartic(const Quadrics& q) {
  Poly p2{q.p2}, p1{q.p1}, q2{q.q2};
  Poly t1 = sub(mul(p2, q.q0), mul(q.p0, q2));
  Poly t2 = sub(mul(p2, q.q1), mul(p1, q2));
  Poly t3 = sub(mul(p1, q.q0), mul(q.p0, q.q1));
  Poly R = sub(mul(t1, t1), mul(t2, t3));
  std::array<DD, 5> out{};
  for (size_t i = 0; i < R.size() && i < 5; ++i) out[i] = R[i];
  return out;
}

std::array<std::complex<double>, 3> back_substitute(const Quadrics& qq,
                                                    const std::complex<double>& vroot,
                                                    const ControlTriangle& tri,
                                                    const AngleTriple& ang,
                                                    std::complex<double>* u_other,
                                                    double u_tol) {
  CDD v{vroot};
  CDD p0 = CDD(qq.p0[0]) + (CDD(qq.p0[1]) + CDD(qq.p0[2]) * v) * v;
  CDD q1 = CDD(qq.q1[0]) + CDD(qq.q1[1]) * v;
  CDD q0 = CDD(qq.q0[0]) + CDD(qq.q0[2]) * v * v;
  CDD p2{qq.p2}, p1{qq.p1}, q2{qq.q2};

  // both roots of p(u) = 0, then keep the q-consistent one(s)
  CDD disc = sqrt(p1 * p1 - CDD(DD(4.0)) * p2 * p0);
  CDD u_a = (-p1 + disc) / (p2 * CDD(DD(2.0)));
  CDD u_b = (-p1 - disc) / (p2 * CDD(DD(2.0)));
  auto qres = [&](const CDD& u) {
    return std::sqrt(double(abs2(q2 * u * u + q1 * u + q0)));
  };
  auto qscale = [&](const CDD& u) {
    double au = std::sqrt(double(abs2(u)));
    return std::sqrt(double(abs2(CDD(q2)))) * (1 + au) * (1 + au) +
           std::sqrt(double(abs2(q1))) * (1 + au) + std::sqrt(double(abs2(q0))) + 1.0;
  };
  double ra = qres(u_a), rb = qres(u_b);
  CDD u = (ra <= rb) ? u_a : u_b;
  if (u_other) {
    *u_other = std::complex<double>(std::nan(""), 0.0);
    const CDD& other = (ra <= rb) ? u_b : u_a;
    double ro = (ra <= rb) ? rb : ra;
    std::complex<double> du = other.to_complex() - u.to_complex();
    bool distinct = std::abs(du) > 1e-6 * (1.0 + std::abs(u.to_complex()));
    if (distinct && ro <= u_tol * qscale(other)) *u_other = other.to_complex();
  }

  // s1^2 from the best-conditioned of the three equations
  DD a2 = DD(tri.a()) * DD(tri.a());
  DD b2 = DD(tri.b()) * DD(tri.b());
  DD c2 = DD(tri.c()) * DD(tri.c());
  CDD one{DD(1.0)};
  CDD den_c = one + u * u - CDD(DD(2.0 * ang.cos_gamma)) * u;
  CDD den_b = one + v * v - CDD(DD(2.0 * ang.cos_beta)) * v;
  CDD den_a = u * u + v * v - CDD(DD(2.0 * ang.cos_alpha)) * u * v;
  struct Opt {
    double mag;
    DD num;
    CDD den;
  };
  Opt opts[3] = {{double(abs2(den_c)), c2, den_c},
                 {double(abs2(den_b)), b2, den_b},
                 {double(abs2(den_a)), a2, den_a}};
  const Opt* best = &opts[0];
  for (int i = 1; i < 3; ++i)
    if (opts[i].mag > best->mag) best = &opts[i];
  CDD s1 = sqrt(CDD(best->num) / best->den);
  CDD s2 = u * s1;
  CDD s3 = v * s1;
  return {s1.to_complex(), s2.to_complex(), s3.to_complex()};
}

void canonical_sign(std::array<std::complex<double>, 3>& s) {
  bool flip = s[0].real() < 0.0 || (s[0].real() == 0.0 && s[0].imag() < 0.0);
  if (flip)
    for (auto& t : s) t = -t;
}

void newton_polish_triplet(const ControlTriangle& tri, const AngleTriple& ang,
                           std::array<std::complex<double>, 3>& s) {
  using C = std::complex<double>;
  double a2 = tri.a() * tri.a(), b2 = tri.b() * tri.b(), c2 = tri.c() * tri.c();
  double ca = ang.cos_alpha, cb = ang.cos_beta, cc = ang.cos_gamma;
  for (int it = 0; it < 25; ++it) {
    C f1 = s[0] * s[0] + s[1] * s[1] - 2.0 * cc * s[0] * s[1] - c2;
    C f2 = s[0] * s[0] + s[2] * s[2] - 2.0 * cb * s[0] * s[2] - b2;
    C f3 = s[1] * s[1] + s[2] * s[2] - 2.0 * ca * s[1] * s[2] - a2;
    // 3x3 complex solve by Cramer
    C J[3][3] = {{2.0 * s[0] - 2.0 * cc * s[1], 2.0 * s[1] - 2.0 * cc * s[0], 0.0},
                 {2.0 * s[0] - 2.0 * cb * s[2], 0.0, 2.0 * s[2] - 2.0 * cb * s[0]},
                 {0.0, 2.0 * s[1] - 2.0 * ca * s[2], 2.0 * s[2] - 2.0 * ca * s[1]}};
    C det = J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1]) -
            J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0]) +
            J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]);
    if (std::abs(det) < 1e-300) return;
    C F[3] = {f1, f2, f3};
    C dx[3];
    for (int c = 0; c < 3; ++c) {
      C Jc[3][3];
      for (int r = 0; r < 3; ++r)
        for (int k = 0; k < 3; ++k) Jc[r][k] = (k == c) ? F[r] : J[r][k];
      C detc = Jc[0][0] * (Jc[1][1] * Jc[2][2] - Jc[1][2] * Jc[2][1]) -
               Jc[0][1] * (Jc[1][0] * Jc[2][2] - Jc[1][2] * Jc[2][0]) +
               Jc[0][2] * (Jc[1][0] * Jc[2][1] - Jc[1][1] * Jc[2][0]);
      dx[c] = detc / det;
    }
    double stepn = 0.0, sn = 0.0;
    for (int c = 0; c < 3; ++c) {
      s[c] -= dx[c];
      stepn = std::max(stepn, std::abs(dx[c]));
      sn = std::max(sn, std::abs(s[c]));
    }
    if (stepn < 1e-15 * (1.0 + sn)) break;
  }
}

}  // namespace

double constraint_residual(const ControlTriangle& tri, const AngleTriple& ang,
                           const std::array<std::complex<double>, 3>& s) {
  using C = std::complex<double>;
  double a2 = tri.a() * tri.a(), b2 = tri.b() * tri.b(), c2 = tri.c() * tri.c();
  C f1 = s[0] * s[0] + s[1] * s[1] - 2.0 * ang.cos_gamma * s[0] * s[1] - c2;
  C f2 = s[0] * s[0] + s[2] * s[2] - 2.0 * ang.cos_beta * s[0] * s[2] - b2;
  C f3 = s[1] * s[1] + s[2] * s[2] - 2.0 * ang.cos_alpha * s[1] * s[2] - a2;
  double smax = 0.0;
  for (const auto& t : s) smax = std::max(smax, std::abs(t));
  double scale = std::max(1.0, smax * smax);
  return std::max({std::abs(f1), std::abs(f2), std::abs(f3)}) / scale;
}

std::array<double, 5> grunert_quartic(const ControlTriangle& tri, const AngleTriple& ang,
                                      const Tolerances& tol) {
  auto q = build_quadrics(tri, ang);
  auto R = resultant_quartic(q);
  double mx = 0.0;
  for (const auto& c : R) mx = std::max(mx, std::abs(double(c)));
  if (mx == 0.0 || std::abs(double(R[4])) < tol.leading_coeff * mx)
    throw LeadingCoefficientVanishes("grunert quartic degenerates");
  std::array<double, 5> out;
  for (int i = 0; i < 5; ++i) out[i] = double(R[i]);
  return out;
}

SolutionSet solve(const ControlTriangle& tri, const AngleTriple& ang, const Tolerances& tol) {
  auto qq = build_quadrics(tri, ang);
  auto Rdd = resultant_quartic(qq);
  double mx = 0.0;
  for (const auto& c : Rdd) mx = std::max(mx, std::abs(double(c)));
  if (mx == 0.0 || std::abs(double(Rdd[4])) < tol.leading_coeff * mx)
    throw LeadingCoefficientVanishes("grunert quartic degenerates");

  SolutionSet out;
  for (int i = 0; i < 5; ++i) out.quartic[i] = double(Rdd[i]);
  out.discriminant = quartic_discriminant(out.quartic);

  QuarticRoots qr = solve_quartic(Rdd);
  out.roots = qr.v;

  // cluster in the scaled variable; radius honors both the configured
  // tolerance and the per-root noise estimate
  std::array<int, 4> order = {0, 1, 2, 3};
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    if (qr.w[i].real() != qr.w[j].real()) return qr.w[i].real() < qr.w[j].real();
    return qr.w[i].imag() < qr.w[j].imag();
  });
  bool used[4] = {false, false, false, false};
  struct Cluster {
    std::complex<double> w;
    int mult;
  };
  std::vector<Cluster> clusters;
  for (int oi = 0; oi < 4; ++oi) {
    int i = order[oi];
    if (used[i]) continue;
    std::complex<double> acc = qr.w[i];
    int n = 1;
    used[i] = true;
    for (int oj = oi + 1; oj < 4; ++oj) {
      int j = order[oj];
      if (used[j]) continue;
      double rad = std::max(tol.cluster_radius * (1.0 + std::abs(qr.w[i])),
                            std::max(qr.noise[i], qr.noise[j]));
      if (std::abs(qr.w[j] - qr.w[i]) <= rad) {
        acc += qr.w[j];
        ++n;
        used[j] = true;
      }
    }
    clusters.push_back({acc / double(n), n});
  }

  for (const auto& cl : clusters) {
    std::complex<double> v = qr.center + qr.scale * cl.w;
    std::complex<double> u_other;
    auto s = back_substitute(qq, v, tri, ang, &u_other, tol.u_consistency);
    bool split = cl.mult >= 2 && !std::isnan(u_other.real());
    if (split) {
      // shared quartic root with two distinct u branches: two simple solutions
      std::complex<double> s1b;
      {
        // rebuild the second branch triplet from u_other
        CDD uu{u_other};
        DD c2 = DD(tri.c()) * DD(tri.c());
        CDD one{DD(1.0)};
        CDD den = one + uu * uu - CDD(DD(2.0 * ang.cos_gamma)) * uu;
        CDD s1c = sqrt(CDD(c2) / den);
        s1b = s1c.to_complex();
      }
      std::array<std::complex<double>, 3> s_b = {s1b, u_other * s1b, v * s1b};
      // distribute the multiplicity across the two branches
      for (auto* tp : {&s, &s_b}) {
        auto trip = *tp;
        newton_polish_triplet(tri, ang, trip);
        canonical_sign(trip);
        TripletSolution T;
        T.s = trip;
        T.multiplicity = cl.mult / 2 > 0 ? cl.mult / 2 : 1;
        T.residual = constraint_residual(tri, ang, trip);
        out.triplets.push_back(T);
      }
      continue;
    }
    if (cl.mult == 1) newton_polish_triplet(tri, ang, s);
    canonical_sign(s);
    TripletSolution T;
    T.s = s;
    T.multiplicity = cl.mult;
    T.residual = constraint_residual(tri, ang, s);
    out.triplets.push_back(T);
  }

  for (auto& T : out.triplets) {
    T.p3p = true;
    for (const auto& c : T.s) {
      if (std::abs(c.imag()) > tol.real_component || c.real() <= tol.positive_component)
        T.p3p = false;
    }
    if (T.p3p) {
      out.p3p_count += 1;
      out.p3p_count_multiplicity += T.multiplicity;
    }
  }
  return out;
}

SolutionSet solve_at(const ControlTriangle& tri, const Viewpoint& O, const Tolerances& tol) {
  return solve(tri, angles_from_viewpoint(tri, O, tol), tol);
}

int count_p3p(const ControlTriangle& tri, const Viewpoint& O, const Tolerances& tol) {
  return solve_at(tri, O, tol).p3p_count;
}

}  // namespace csdc
