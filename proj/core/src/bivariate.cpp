#include "csdc/bivariate.hpp"

#include <cmath>

namespace csdc {

void BivariatePoly::set(int i, int j, double v) {
  if (v == 0.0)
    c_.erase({i, j});
  else
    c_[{i, j}] = v;
}

void BivariatePoly::prune() {
  for (auto it = c_.begin(); it != c_.end();)
    it = (it->second == 0.0) ? c_.erase(it) : std::next(it);
}

int BivariatePoly::total_degree() const {
  int d = 0;
  for (const auto& [k, v] : c_) d = std::max(d, k.first + k.second);
  return d;
}

double BivariatePoly::eval(double u, double w) const {
  double s = 0.0;
  for (const auto& [k, v] : c_) s += v * std::pow(u, k.first) * std::pow(w, k.second);
  return s;
}

BivariatePoly BivariatePoly::operator+(const BivariatePoly& o) const {
  BivariatePoly r = *this;
  for (const auto& [k, v] : o.c_) r.c_[k] += v;
  r.prune();
  return r;
}

BivariatePoly BivariatePoly::operator-(const BivariatePoly& o) const {
  BivariatePoly r = *this;
  for (const auto& [k, v] : o.c_) r.c_[k] -= v;
  r.prune();
  return r;
}

BivariatePoly BivariatePoly::operator*(const BivariatePoly& o) const {
  BivariatePoly r;
  for (const auto& [ka, va] : c_)
    for (const auto& [kb, vb] : o.c_)
      r.c_[{ka.first + kb.first, ka.second + kb.second}] += va * vb;
  r.prune();
  return r;
}

BivariatePoly BivariatePoly::scaled(double s) const {
  BivariatePoly r;
  for (const auto& [k, v] : c_) r.c_[k] = v * s;
  r.prune();
  return r;
}

double BivariatePoly::coeff_norm() const {
  double s = 0.0;
  for (const auto& [k, v] : c_) s += v * v;
  return std::sqrt(s);
}

BivariatePoly BivariatePoly::normalized() const {
  double n = coeff_norm();
  if (n == 0.0) return *this;
  double sign = 1.0;
  if (!c_.empty() && c_.begin()->second < 0.0) sign = -1.0;
  return scaled(sign / n);
}

BivariatePoly BivariatePoly::constant(double v) {
  BivariatePoly r;
  r.set(0, 0, v);
  return r;
}

BivariatePoly BivariatePoly::monomial(int i, int j, double v) {
  BivariatePoly r;
  r.set(i, j, v);
  return r;
}

namespace {

BivariatePoly det_laplace(const std::vector<std::vector<BivariatePoly>>& m,
                          std::vector<int> cols, int row) {
  if (cols.size() == 1) return m[row][cols[0]];
  BivariatePoly acc;
  for (size_t k = 0; k < cols.size(); ++k) {
    const BivariatePoly& pivot = m[row][cols[k]];
    if (pivot.empty()) continue;
    std::vector<int> rest;
    rest.reserve(cols.size() - 1);
    for (size_t j = 0; j < cols.size(); ++j)
      if (j != k) rest.push_back(cols[j]);
    BivariatePoly minor = det_laplace(m, rest, row + 1);
    BivariatePoly term = pivot * minor;
    acc = (k % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

}  // namespace

BivariatePoly sylvester_resultant(const std::vector<BivariatePoly>& px,
                                  const std::vector<BivariatePoly>& qx) {
  int m = int(px.size()) - 1;
  int n = int(qx.size()) - 1;
  int dim = m + n;
  std::vector<std::vector<BivariatePoly>> S(dim, std::vector<BivariatePoly>(dim));
  // n shifted copies of p, then m shifted copies of q (descending layout)
  for (int r = 0; r < n; ++r)
    for (int k = 0; k <= m; ++k) S[r][r + k] = px[m - k];
  for (int r = 0; r < m; ++r)
    for (int k = 0; k <= n; ++k) S[n + r][r + k] = qx[n - k];
  std::vector<int> cols(dim);
  for (int i = 0; i < dim; ++i) cols[i] = i;
  return det_laplace(S, cols, 0);
}

}  // namespace csdc
