#include "csdc/quartic.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace csdc {

namespace {

// Taylor shift p(v) -> p(v0 + w) by binomial expansion (degree 4 only).
std::array<DD, 5> taylor_shift(const std::array<DD, 5>& c, DD v0) {
  static const double binom[5][5] = {{1, 0, 0, 0, 0},
                                     {1, 1, 0, 0, 0},
                                     {1, 2, 1, 0, 0},
                                     {1, 3, 3, 1, 0},
                                     {1, 4, 6, 4, 1}};
  std::array<DD, 5> pw{};
  std::array<DD, 5> v0p;
  v0p[0] = DD(1.0);
  for (int k = 1; k <= 4; ++k) v0p[k] = v0p[k - 1] * v0;
  for (int i = 0; i <= 4; ++i)
    for (int j = i; j <= 4; ++j) pw[i] += c[j] * DD(binom[j][i]) * v0p[j - i];
  return pw;
}

std::complex<double> horner(const std::array<double, 5>& c, std::complex<double> z) {
  std::complex<double> r = c[4];
  for (int i = 3; i >= 0; --i) r = r * z + c[i];
  return r;
}

CDD horner_dd(const std::array<DD, 5>& c, CDD z) {
  CDD r{c[4]};
  for (int i = 3; i >= 0; --i) r = r * z + CDD(c[i]);
  return r;
}

CDD horner_dd_deriv(const std::array<DD, 5>& c, CDD z) {
  CDD r{c[4] * DD(4.0)};
  for (int i = 3; i >= 1; --i) r = r * z + CDD(c[i] * DD(double(i)));
  return r;
}

}  // namespace

QuarticRoots solve_quartic(const std::array<DD, 5>& coeff) {
  QuarticRoots out;
  DD mx(0.0);
  for (const auto& c : coeff) {
    DD a = abs(c);
    if (mx < a) mx = a;
  }
  std::array<DD, 5> c;
  for (int i = 0; i <= 4; ++i) c[i] = coeff[i] / mx;

  DD v0 = -c[3] / (c[4] * DD(4.0));
  std::array<DD, 5> cs = taylor_shift(c, v0);

  // scale so the root-magnitude bound is ~1
  double sig = 0.0;
  double lead = std::abs(double(cs[4]));
  for (int i = 0; i < 4; ++i) {
    double ci = std::abs(double(cs[i]));
    if (ci > 0.0) sig = std::max(sig, std::pow(ci / lead, 1.0 / (4 - i)));
  }
  if (sig == 0.0) sig = 1.0;

  std::array<DD, 5> csc;
  DD sp(1.0);
  for (int i = 0; i <= 4; ++i) {
    csc[i] = cs[i] * sp;
    sp *= DD(sig);
  }
  DD norm = csc[4];
  for (int i = 0; i <= 4; ++i) csc[i] = csc[i] / norm;
  std::array<double, 5> cscd;
  for (int i = 0; i <= 4; ++i) cscd[i] = double(csc[i]);

  // companion matrix of the monic scaled quartic
  Eigen::Matrix4d M = Eigen::Matrix4d::Zero();
  M(1, 0) = M(2, 1) = M(3, 2) = 1.0;
  for (int i = 0; i < 4; ++i) M(i, 3) = -cscd[i];
  Eigen::EigenSolver<Eigen::Matrix4d> es(M, /*computeEigenvectors=*/false);

  for (int i = 0; i < 4; ++i) {
    std::complex<double> w = es.eigenvalues()[i];
    // double Newton warm-up, then double-double polish
    for (int it = 0; it < 8; ++it) {
      std::complex<double> f = horner(cscd, w);
      std::complex<double> d = 4.0 * cscd[4];
      {
        std::complex<double> r = 4.0 * cscd[4];
        for (int k = 3; k >= 1; --k) r = r * w + double(k) * cscd[k];
        d = r;
      }
      if (d == std::complex<double>(0.0)) break;
      std::complex<double> step = f / d;
      w -= step;
      if (std::abs(step) < 1e-17 * (1.0 + std::abs(w))) break;
    }
    CDD wd{w};
    for (int it = 0; it < 4; ++it) {
      CDD f = horner_dd(csc, wd);
      CDD d = horner_dd_deriv(csc, wd);
      double dn = double(abs2(d));
      if (dn == 0.0) break;
      wd = wd - f / d;
    }
    w = wd.to_complex();
    out.w[i] = w;
    // uncertainty: |p| noise over local curvature; treat as half-width of the
    // band where the pair of a near-double root cannot be resolved
    double scale_at = 0.0;
    double aw = std::abs(w);
    double p = 1.0;
    for (int k = 0; k <= 4; ++k) {
      scale_at += std::abs(cscd[k]) * p;
      p *= std::max(aw, 1.0);
    }
    std::complex<double> d2 = 12.0 * cscd[4];
    {
      std::complex<double> r = 12.0 * cscd[4];
      r = r * w + 6.0 * cscd[3];
      r = r * w + 2.0 * cscd[2];
      d2 = r;
    }
    double curv = std::abs(d2) / 2.0;
    double eta = 1e-30;  // double-double coefficient noise, relative
    out.noise[i] = curv > 1e-300 ? 10.0 * std::sqrt(eta * scale_at / curv) : 0.0;
  }
  out.center = double(v0);
  out.scale = sig;
  for (int i = 0; i < 4; ++i) out.v[i] = out.center + out.scale * out.w[i];
  return out;
}

double quartic_discriminant(const std::array<double, 5>& coeff) {
  double mx = 0.0;
  for (double t : coeff) mx = std::max(mx, std::abs(t));
  if (mx == 0.0) return 0.0;
  double e = coeff[0] / mx, d = coeff[1] / mx, c = coeff[2] / mx, b = coeff[3] / mx,
         a = coeff[4] / mx;
  return 256 * a * a * a * e * e * e - 192 * a * a * b * d * e * e -
         128 * a * a * c * c * e * e + 144 * a * a * c * d * d * e -
         27 * a * a * d * d * d * d + 144 * a * b * b * c * e * e -
         6 * a * b * b * d * d * e - 80 * a * b * c * c * d * e +
         18 * a * b * c * d * d * d + 16 * a * c * c * c * c * e -
         4 * a * c * c * c * d * d - 27 * b * b * b * b * e * e +
         18 * b * b * b * c * d * e - 4 * b * b * b * d * d * d -
         4 * b * b * c * c * c * e + b * b * c * c * d * d;
}

}  // namespace csdc
