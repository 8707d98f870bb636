#pragma once

#include <map>
#include <utility>
#include <vector>

namespace csdc {

// Sparse bivariate polynomial, exponents -> coefficient.  Normalization is
// unit Euclidean coefficient norm with the first nonzero coefficient (in
// lexicographic exponent order) positive, so serialized forms are stable.
class BivariatePoly {
 public:
  using Key = std::pair<int, int>;  // (i, j) for u^i w^j

  BivariatePoly() = default;

  double coeff(int i, int j) const {
    auto it = c_.find({i, j});
    return it == c_.end() ? 0.0 : it->second;
  }
  void set(int i, int j, double v);
  const std::map<Key, double>& terms() const { return c_; }
  bool empty() const { return c_.empty(); }
  int total_degree() const;

  double eval(double u, double w) const;

  BivariatePoly operator+(const BivariatePoly& o) const;
  BivariatePoly operator-(const BivariatePoly& o) const;
  BivariatePoly operator*(const BivariatePoly& o) const;
  BivariatePoly scaled(double s) const;

  double coeff_norm() const;
  BivariatePoly normalized() const;

  static BivariatePoly constant(double v);
  static BivariatePoly monomial(int i, int j, double v);

 private:
  std::map<Key, double> c_;
  void prune();
};

// Resultant of two univariate polynomials in x whose coefficients are
// bivariate polynomials, via the Sylvester determinant.  px/qx are ascending
// in x.
BivariatePoly sylvester_resultant(const std::vector<BivariatePoly>& px,
                                  const std::vector<BivariatePoly>& qx);

}  // namespace csdc
