#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "csdc/p3p.hpp"
#include "csdc/rng.hpp"
#include "support/oracle.hpp"

using namespace csdc;

namespace {

ControlTriangle random_triangle(Rng& rng) {
  for (;;) {
    double a = rng.uniform(-M_PI, M_PI);
    double b = rng.uniform(-M_PI, M_PI);
    double c = rng.uniform(-M_PI, M_PI);
    try {
      auto t = ControlTriangle::make(a, b, c);
      double m = HUGE_VAL;
      for (int i = 0; i < 3; ++i)
        m = std::min(m, std::abs(std::remainder(t.phi()[i] - t.phi()[(i + 1) % 3], 2 * M_PI)));
      if (m > 0.15) return t;
    } catch (const DegenerateTriangle&) {
    }
  }
}

}  // namespace

TEST_CASE("symmetric instance has v = 1 among the quartic roots") {
  auto tri = equilateral_triangle();
  AngleTriple ang{0.25, 0.25, 0.25};
  auto q = grunert_quartic(tri, ang);
  double at1 = q[0] + q[1] + q[2] + q[3] + q[4];
  double scale = 0.0;
  for (double c : q) scale = std::max(scale, std::abs(c));
  CHECK(std::abs(at1) <= 1e-12 * scale);
}

TEST_CASE("generated instances put v* = s3/s1 on the quartic") {
  Rng rng(42);
  for (int i = 0; i < 25; ++i) {
    auto tri = random_triangle(rng);
    Viewpoint O{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(0.2, 3)};
    auto d = distances(tri, O);
    auto ang = angles_from_viewpoint(tri, O);
    auto q = grunert_quartic(tri, ang);
    double v = d[2] / d[0];
    double val = 0.0, p = 1.0, scale = 0.0;
    for (int k = 0; k <= 4; ++k) {
      val += q[k] * p;
      scale = std::max(scale, std::abs(q[k] * p));
      p *= v;
    }
    CHECK(std::abs(val) <= 1e-10 * std::max(1.0, scale));
  }
}

TEST_CASE("axis viewpoint: the shared-root instance splits into four triplets") {
  // On the vertical symmetry axis the quartic has a double root at v = 1 that
  // carries two distinct u branches, so the instance has four distinct
  // constraint-system solutions and exactly one of them is a P3P solution.
  auto tri = equilateral_triangle();
  SolutionSet sol = solve_at(tri, {0, 0, 1});
  CHECK(sol.triplets.size() == 4);
  CHECK(sol.p3p_count == 1);
  double r2 = std::sqrt(2.0);
  bool has_sym = false, has_neg = false;
  for (const auto& T : sol.triplets) {
    auto close = [&](double a, double b, double c) {
      return std::abs(T.s[0].real() - a) < 1e-9 && std::abs(T.s[1].real() - b) < 1e-9 &&
             std::abs(T.s[2].real() - c) < 1e-9 && std::abs(T.s[0].imag()) < 1e-9;
    };
    if (close(r2, r2, r2)) has_sym = T.p3p;
    if (close(r2, r2, -1.0 / r2)) has_neg = !T.p3p;
  }
  CHECK(has_sym);
  CHECK(has_neg);
  CHECK(std::abs(sol.discriminant) <= 1e-10);
}

TEST_CASE("danger-cylinder instance has a double root matching the viewpoint") {
  auto tri = equilateral_triangle();
  Viewpoint O{1.0, 0.0, 1.0};
  SolutionSet sol = solve_at(tri, O);
  auto d = distances(tri, O);
  bool found = false;
  for (const auto& T : sol.triplets) {
    if (T.multiplicity < 2) continue;
    double m = 0.0;
    for (int i = 0; i < 3; ++i) m = std::max(m, std::abs(T.s[i] - d[i]));
    if (m < 1e-7) found = true;
  }
  CHECK(found);
  auto centers = centers_from_distances(tri, d[0], d[1], d[2]);
  REQUIRE(centers.size() == 2);
  CHECK(centers[0].x == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(centers[0].z == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("generic danger-cylinder point: three P3P solutions, one double") {
  // low danger-cylinder points trade one P3P companion for a
  // negative-component solution; above the v = 0 sheet all three are P3P
  auto tri = equilateral_triangle();
  Viewpoint O{std::cos(0.3), std::sin(0.3), 1.5};
  SolutionSet sol = solve_at(tri, O);
  CHECK(sol.p3p_count == 3);
  CHECK(sol.p3p_count_multiplicity == 4);
  int doubles = 0;
  for (const auto& T : sol.triplets) doubles += (T.multiplicity == 2 && T.p3p);
  CHECK(doubles == 1);
}

TEST_CASE("above a control point the companion solutions hit zero components") {
  // (1, 0, 1) sits directly over control point A; the two non-double
  // solutions degenerate to triplets with an exactly zero distance, which the
  // positivity rule excludes from the P3P count.
  auto tri = equilateral_triangle();
  SolutionSet sol = solve_at(tri, {1.0, 0.0, 1.0});
  CHECK(count_p3p(tri, {1.0, 0.0, 1.0}) == 1);
  int zero_comp = 0;
  for (const auto& T : sol.triplets)
    for (const auto& c : T.s)
      if (std::abs(c) <= 1e-9) ++zero_comp;
  CHECK(zero_comp == 2);
}

TEST_CASE("count above the centroid is one") {
  CHECK(count_p3p(equilateral_triangle(), {0, 0, 1}) == 1);
}

TEST_CASE("residual invariant and sign convention") {
  Rng rng(7);
  for (int i = 0; i < 40; ++i) {
    auto tri = random_triangle(rng);
    Viewpoint O{rng.uniform(-2.5, 2.5), rng.uniform(-2.5, 2.5), rng.uniform(0.2, 4)};
    SolutionSet sol = solve_at(tri, O);
    int mult_total = 0;
    for (const auto& T : sol.triplets) {
      mult_total += T.multiplicity;
      CHECK(T.residual <= 1e-8);
      bool nonneg = T.s[0].real() > 0.0 ||
                    (T.s[0].real() == 0.0 && T.s[0].imag() >= 0.0) ||
                    std::abs(T.s[0]) == 0.0;
      CHECK(nonneg);
    }
    CHECK(mult_total == 4);
  }
}

TEST_CASE("self-consistency: the generating triplet is always present") {
  Rng rng(21);
  for (int i = 0; i < 60; ++i) {
    auto tri = random_triangle(rng);
    Viewpoint O{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(0.15, 4)};
    auto d = distances(tri, O);
    SolutionSet sol = solve_at(tri, O);
    bool present = false;
    for (const auto& T : sol.triplets) {
      if (!T.p3p) continue;
      double m = 0.0;
      for (int k = 0; k < 3; ++k) m = std::max(m, std::abs(T.s[k].real() - d[k]));
      if (m <= 1e-6 * (1.0 + d[0])) present = true;
    }
    CHECK(present);
  }
}

TEST_CASE("non-real triplets appear in conjugate pairs") {
  Rng rng(33);
  for (int i = 0; i < 40; ++i) {
    auto tri = random_triangle(rng);
    Viewpoint O{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(0.2, 4)};
    SolutionSet sol = solve_at(tri, O);
    for (const auto& T : sol.triplets) {
      double im = 0.0;
      for (const auto& c : T.s) im = std::max(im, std::abs(c.imag()));
      if (im <= 1e-8) continue;
      bool has_conj = false;
      for (const auto& U : sol.triplets) {
        double d = 0.0;
        for (int k = 0; k < 3; ++k) d = std::max(d, std::abs(U.s[k] - std::conj(T.s[k])));
        if (d <= 1e-6 * (1.0 + std::abs(T.s[0]))) has_conj = true;
      }
      CHECK(has_conj);
    }
  }
}

TEST_CASE("oracle equivalence on random viewpoint instances") {
  Rng rng(2024);
  int checked = 0;
  for (int i = 0; i < 120 && checked < 100; ++i) {
    auto tri = random_triangle(rng);
    Viewpoint O{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(0.15, 3)};
    SolutionSet sol;
    try {
      sol = solve_at(tri, O);
    } catch (const LeadingCoefficientVanishes&) {
      continue;
    }
    ++checked;
    std::vector<testing::Triplet> mine;
    for (const auto& T : sol.triplets)
      mine.push_back(T.s);
    auto oracle = testing::brute_force_solutions(tri, angles_from_viewpoint(tri, O));
    CHECK(testing::hausdorff(mine, oracle) <= 1e-6);
  }
  CHECK(checked >= 100);
}

TEST_CASE("discriminant sign flips where the real-root count changes") {
  auto tri = equilateral_triangle();
  Viewpoint A{0.2, 0.1, 1.3}, B{2.6, 1.4, 0.9};
  auto at = [&](double t) {
    return Viewpoint{A.x + t * (B.x - A.x), A.y + t * (B.y - A.y), A.z + t * (B.z - A.z)};
  };
  int flips = 0, changes = 0;
  double prev_disc = 0.0;
  int prev_real = -1;
  for (int i = 0; i <= 400; ++i) {
    double t = double(i) / 400;
    SolutionSet sol = solve_at(tri, at(t));
    int nreal = 0;
    for (const auto& r : sol.roots)
      if (std::abs(r.imag()) <= 1e-8 * (1.0 + std::abs(r))) ++nreal;
    if (i > 0) {
      if (prev_disc * sol.discriminant < 0) ++flips;
      if (nreal != prev_real) ++changes;
    }
    prev_disc = sol.discriminant;
    prev_real = nreal;
  }
  CHECK(flips == changes);
  CHECK(flips > 0);
}

TEST_CASE("degenerate subtended angle hits the leading-coefficient guard") {
  // cos(alpha) equal to the inscribed-angle cosine of side a collapses the
  // quartic degree
  auto tri = equilateral_triangle();
  double inscribed = 0.5;  // cos(60 deg): inscribed angle over any side
  AngleTriple ang{inscribed, 0.31, 0.27};
  CHECK_THROWS_AS(grunert_quartic(tri, ang), LeadingCoefficientVanishes);
}
