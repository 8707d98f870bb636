// Compensated (double-double) arithmetic for the quartic elimination.
//
// The Grunert resultant combines O(1) terms whose difference carries the
// clustered-root structure of the quartic.  Near the danger cylinder, and for
// viewpoints far above the control plane, that difference sits below double
// roundoff; assembling the coefficients in double-double keeps roughly 32
// significant digits and makes the root cluster resolvable again.

#pragma once

#include <cmath>
#include <complex>

namespace csdc {

struct DD {
  double hi = 0.0;
  double lo = 0.0;

  DD() = default;
  constexpr DD(double h) : hi(h), lo(0.0) {}
  constexpr DD(double h, double l) : hi(h), lo(l) {}

  explicit operator double() const { return hi + lo; }
};

namespace detail {
inline DD two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}
inline DD quick_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}
inline DD two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}
}  // namespace detail

inline DD operator+(DD a, DD b) {
  DD s = detail::two_sum(a.hi, b.hi);
  s.lo += a.lo + b.lo;
  return detail::quick_two_sum(s.hi, s.lo);
}
inline DD operator-(DD a) { return {-a.hi, -a.lo}; }
inline DD operator-(DD a, DD b) { return a + (-b); }
inline DD operator*(DD a, DD b) {
  DD p = detail::two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return detail::quick_two_sum(p.hi, p.lo);
}
inline DD operator/(DD a, DD b) {
  double q1 = a.hi / b.hi;
  DD r = a - b * DD(q1);
  double q2 = r.hi / b.hi;
  r = r - b * DD(q2);
  double q3 = r.hi / b.hi;
  return detail::quick_two_sum(q1, q2) + DD(q3);
}
inline DD& operator+=(DD& a, DD b) { a = a + b; return a; }
inline DD& operator-=(DD& a, DD b) { a = a - b; return a; }
inline DD& operator*=(DD& a, DD b) { a = a * b; return a; }

inline bool operator<(DD a, DD b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }
inline DD abs(DD a) { return a.hi < 0.0 || (a.hi == 0.0 && a.lo < 0.0) ? -a : a; }

inline DD sqrt(DD a) {
  if (a.hi <= 0.0) return DD(0.0);
  double s = std::sqrt(a.hi);
  DD r = (a - detail::two_prod(s, s)) * DD(0.5 / s);
  return DD(s) + r;
}

// Minimal complex double-double; only what root polishing and
// back-substitution need.
struct CDD {
  DD re, im;

  CDD() = default;
  CDD(DD r) : re(r), im(0.0) {}
  CDD(DD r, DD i) : re(r), im(i) {}
  CDD(std::complex<double> z) : re(z.real()), im(z.imag()) {}

  std::complex<double> to_complex() const {
    return {double(re), double(im)};
  }
};

inline CDD operator+(CDD a, CDD b) { return {a.re + b.re, a.im + b.im}; }
inline CDD operator-(CDD a, CDD b) { return {a.re - b.re, a.im - b.im}; }
inline CDD operator-(CDD a) { return {-a.re, -a.im}; }
inline CDD operator*(CDD a, CDD b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline CDD operator/(CDD a, CDD b) {
  DD d = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}
inline DD abs2(CDD a) { return a.re * a.re + a.im * a.im; }

inline CDD sqrt(CDD z) {
  DD m = sqrt(abs2(z));
  DD re2 = (m + abs(z.re)) * DD(0.5);
  DD w = sqrt(re2);
  if (w.hi == 0.0) return CDD(DD(0.0));
  if (!(z.re.hi < 0.0)) {
    DD im = z.im / (w * DD(2.0));
    return {w, im};
  }
  DD im = (z.im.hi < 0.0 || (z.im.hi == 0.0 && z.im.lo < 0.0)) ? -w : w;
  DD re = z.im / (im * DD(2.0));
  return {re, im};
}

}  // namespace csdc
