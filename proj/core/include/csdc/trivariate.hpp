#pragma once

#include <array>
#include <map>
#include <vector>

namespace csdc {

// Sparse trivariate polynomial over box-scaled coordinates.  The fit runs in
// coordinates affinely mapped to [-1,1]^3; `center`/`half` record that map so
// evaluation at raw points is exact scale-then-evaluate.
class TrivariatePoly {
 public:
  using Key = std::array<int, 3>;

  double coeff(int i, int j, int k) const {
    auto it = c_.find({i, j, k});
    return it == c_.end() ? 0.0 : it->second;
  }
  void set(int i, int j, int k, double v) {
    if (v == 0.0)
      c_.erase({i, j, k});
    else
      c_[{i, j, k}] = v;
  }
  const std::map<Key, double>& terms() const { return c_; }
  int total_degree() const;

  std::array<double, 3> center{0, 0, 0};
  std::array<double, 3> half{1, 1, 1};

  // evaluate at a raw-coordinate point
  double eval(double x, double y, double z) const;
  // evaluate at an already-scaled point
  double eval_scaled(double sx, double sy, double sz) const;

  double coeff_norm() const;
  // unit coefficient norm, first nonzero coefficient in lexicographic
  // exponent order positive
  TrivariatePoly normalized() const;

 private:
  std::map<Key, double> c_;
};

}  // namespace csdc
