#include "support/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace csdc::testing {

namespace {

using C = std::complex<double>;

bool newton(const ControlTriangle& tri, const AngleTriple& ang, Triplet& s) {
  double a2 = tri.a() * tri.a(), b2 = tri.b() * tri.b(), c2 = tri.c() * tri.c();
  double ca = ang.cos_alpha, cb = ang.cos_beta, cc = ang.cos_gamma;
  for (int it = 0; it < 100; ++it) {
    C f1 = s[0] * s[0] + s[1] * s[1] - 2.0 * cc * s[0] * s[1] - c2;
    C f2 = s[0] * s[0] + s[2] * s[2] - 2.0 * cb * s[0] * s[2] - b2;
    C f3 = s[1] * s[1] + s[2] * s[2] - 2.0 * ca * s[1] * s[2] - a2;
    double smax = 0.0;
    for (const auto& t : s) smax = std::max(smax, std::abs(t));
    if (std::max({std::abs(f1), std::abs(f2), std::abs(f3)}) <
        1e-12 * std::max(1.0, smax * smax))
      return true;
    C J[3][3] = {{2.0 * s[0] - 2.0 * cc * s[1], 2.0 * s[1] - 2.0 * cc * s[0], 0.0},
                 {2.0 * s[0] - 2.0 * cb * s[2], 0.0, 2.0 * s[2] - 2.0 * cb * s[0]},
                 {0.0, 2.0 * s[1] - 2.0 * ca * s[2], 2.0 * s[2] - 2.0 * ca * s[1]}};
    C det = J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1]) -
            J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0]) +
            J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]);
    if (std::abs(det) < 1e-250) return false;
    C F[3] = {f1, f2, f3};
    for (int c = 0; c < 3; ++c) {
      C Jc[3][3];
      for (int r = 0; r < 3; ++r)
        for (int k = 0; k < 3; ++k) Jc[r][k] = (k == c) ? F[r] : J[r][k];
      C detc = Jc[0][0] * (Jc[1][1] * Jc[2][2] - Jc[1][2] * Jc[2][1]) -
               Jc[0][1] * (Jc[1][0] * Jc[2][2] - Jc[1][2] * Jc[2][0]) +
               Jc[0][2] * (Jc[1][0] * Jc[2][1] - Jc[1][1] * Jc[2][0]);
      s[c] -= detc / det;
    }
  }
  return false;
}

void canonical(Triplet& s) {
  if (s[0].real() < 0.0 || (s[0].real() == 0.0 && s[0].imag() < 0.0))
    for (auto& t : s) t = -t;
}

}  // namespace

std::vector<Triplet> brute_force_solutions(const ControlTriangle& tri, const AngleTriple& ang,
                                           int expect) {
  double b2 = tri.b() * tri.b(), c2 = tri.c() * tri.c();
  double cb = ang.cos_beta, cc = ang.cos_gamma;
  double s0 = std::max({tri.a(), tri.b(), tri.c()});
  static const double mags[] = {0.15, 0.4, 1.0, 2.5, 6.0, 15.0, 40.0, 100.0, 300.0};
  static const double phases[] = {0.0, 0.35, -0.35, 1.0, -1.0, 2.4, -2.4, M_PI};

  std::vector<Triplet> found;
  auto subsume = [&](const Triplet& s) {
    double smax = 0.0;
    for (const auto& t : s) smax = std::max(smax, std::abs(t));
    for (const auto& f : found) {
      double d = 0.0;
      for (int i = 0; i < 3; ++i) d = std::max(d, std::abs(s[i] - f[i]));
      if (d < 1e-6 * (1.0 + smax)) return true;
    }
    return false;
  };

  for (double mg : mags) {
    for (double ph : phases) {
      C s1 = s0 * mg * std::exp(C(0.0, ph));
      C d2 = std::sqrt(C(c2) - s1 * s1 * (1.0 - cc * cc));
      C d3 = std::sqrt(C(b2) - s1 * s1 * (1.0 - cb * cb));
      for (int b1 = 0; b1 < 2; ++b1)
        for (int b2i = 0; b2i < 2; ++b2i) {
          Triplet s = {s1, cc * s1 + (b1 ? d2 : -d2), cb * s1 + (b2i ? d3 : -d3)};
          if (!newton(tri, ang, s)) continue;
          canonical(s);
          if (!subsume(s)) found.push_back(s);
        }
    }
    if (int(found.size()) >= expect) break;
  }
  return found;
}

double hausdorff(const std::vector<Triplet>& a, const std::vector<Triplet>& b) {
  if (a.empty() || b.empty()) return HUGE_VAL;
  auto one_sided = [](const std::vector<Triplet>& p, const std::vector<Triplet>& q) {
    double worst = 0.0;
    for (const auto& s : p) {
      double best = HUGE_VAL;
      for (const auto& t : q) {
        double d = 0.0;
        for (int i = 0; i < 3; ++i) d = std::max(d, std::abs(s[i] - t[i]));
        best = std::min(best, d);
      }
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

}  // namespace csdc::testing
