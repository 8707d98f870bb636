#include "csdc/trivariate.hpp"

#include <algorithm>
#include <cmath>

namespace csdc {

int TrivariatePoly::total_degree() const {
  int d = 0;
  for (const auto& [k, v] : c_) d = std::max(d, k[0] + k[1] + k[2]);
  return d;
}

double TrivariatePoly::eval(double x, double y, double z) const {
  return eval_scaled((x - center[0]) / half[0], (y - center[1]) / half[1],
                     (z - center[2]) / half[2]);
}

double TrivariatePoly::eval_scaled(double sx, double sy, double sz) const {
  int deg = total_degree();
  // precomputed powers; degrees stay small (<= 12 in practice)
  std::vector<double> px(deg + 1, 1.0), py(deg + 1, 1.0), pz(deg + 1, 1.0);
  for (int i = 1; i <= deg; ++i) {
    px[i] = px[i - 1] * sx;
    py[i] = py[i - 1] * sy;
    pz[i] = pz[i - 1] * sz;
  }
  double s = 0.0;
  for (const auto& [k, v] : c_) s += v * px[k[0]] * py[k[1]] * pz[k[2]];
  return s;
}

double TrivariatePoly::coeff_norm() const {
  double s = 0.0;
  for (const auto& [k, v] : c_) s += v * v;
  return std::sqrt(s);
}

TrivariatePoly TrivariatePoly::normalized() const {
  TrivariatePoly r = *this;
  double n = coeff_norm();
  if (n == 0.0) return r;
  double sign = (!c_.empty() && c_.begin()->second < 0.0) ? -1.0 : 1.0;
  for (auto& [k, v] : r.c_) v *= sign / n;
  return r;
}

}  // namespace csdc
