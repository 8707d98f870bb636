#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "csdc/geometry.hpp"
#include "csdc/rng.hpp"

using namespace csdc;

TEST_CASE("equilateral triangle sides") {
  auto tri = equilateral_triangle();
  CHECK(tri.a() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  CHECK(tri.b() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  CHECK(tri.c() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  CHECK(std::abs(tri.phi()[0] + tri.phi()[1] + tri.phi()[2]) <= 1e-12);
  for (int i = 0; i < 3; ++i) {
    auto p = tri.point(i);
    CHECK(std::abs(p[0] * p[0] + p[1] * p[1] - 1.0) <= 1e-12);
  }
}

TEST_CASE("canonicalization rotates out a common shift") {
  double off = 0.1;
  auto t1 = equilateral_triangle();
  auto t2 = ControlTriangle::make(off, 2 * M_PI / 3 + off, -2 * M_PI / 3 + off);
  CHECK(t2.phi()[0] == doctest::Approx(t1.phi()[0]).epsilon(1e-14));
  CHECK(t2.a() == doctest::Approx(t1.a()).epsilon(1e-14));
  CHECK(t2.b() == doctest::Approx(t1.b()).epsilon(1e-14));
  CHECK(t2.c() == doctest::Approx(t1.c()).epsilon(1e-14));
}

TEST_CASE("coincident control points are rejected") {
  CHECK_THROWS_AS(ControlTriangle::make(0.0, 0.0, 0.0), DegenerateTriangle);
  CHECK_THROWS_AS(ControlTriangle::make(0.5, 0.5 + 1e-8, 2.0), DegenerateTriangle);
}

TEST_CASE("subtended angles above the centroid") {
  auto tri = equilateral_triangle();
  auto ang = angles_from_viewpoint(tri, {0, 0, 1});
  CHECK(ang.cos_alpha == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(ang.cos_beta == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(ang.cos_gamma == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("angles approach zero as the viewpoint recedes") {
  auto tri = equilateral_triangle();
  double prev = 0.0;
  for (double h : {2.0, 8.0, 32.0, 128.0}) {
    auto ang = angles_from_viewpoint(tri, {0, 0, h});
    CHECK(ang.cos_alpha > prev);
    prev = ang.cos_alpha;
  }
  CHECK(prev > 0.999);
}

TEST_CASE("viewpoint on a control point throws") {
  auto tri = equilateral_triangle();
  CHECK_THROWS_AS(angles_from_viewpoint(tri, {1, 0, 0}), ViewpointOnControlPoint);
}

TEST_CASE("angles are invariant under z -> -z") {
  auto tri = ControlTriangle::make(0.4, 1.7, -1.2);
  Rng rng(77);
  for (int i = 0; i < 20; ++i) {
    Viewpoint O{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(0.2, 3)};
    auto a1 = angles_from_viewpoint(tri, O);
    auto a2 = angles_from_viewpoint(tri, {O.x, O.y, -O.z});
    CHECK(a1.cos_alpha == doctest::Approx(a2.cos_alpha).epsilon(1e-15));
    CHECK(a1.cos_beta == doctest::Approx(a2.cos_beta).epsilon(1e-15));
    CHECK(a1.cos_gamma == doctest::Approx(a2.cos_gamma).epsilon(1e-15));
  }
}

TEST_CASE("trilateration on the symmetry axis") {
  auto tri = equilateral_triangle();
  double r = std::sqrt(2.0);
  auto centers = centers_from_distances(tri, r, r, r);
  REQUIRE(centers.size() == 2);
  CHECK(centers[0].z == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(centers[1].z == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(std::abs(centers[0].x) <= 1e-12);
  CHECK(std::abs(centers[0].y) <= 1e-12);
}

TEST_CASE("trilateration reproduces a known off-axis point") {
  auto tri = equilateral_triangle();
  auto centers = centers_from_distances(tri, 1.0, 2.0, 2.0);
  REQUIRE(centers.size() == 2);
  CHECK(centers[0].x == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(centers[0].y) <= 1e-9);
  CHECK(centers[0].z == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("infeasible radii give no centers") {
  auto tri = equilateral_triangle();
  CHECK(centers_from_distances(tri, 0.1, 0.1, 0.1).empty());
}

TEST_CASE("round trip: distances -> centers -> distances") {
  auto tri = ControlTriangle::make(0.2, 2.1, -1.6);
  Rng rng(123);
  for (int i = 0; i < 50; ++i) {
    Viewpoint O{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(0.05, 4)};
    auto d = distances(tri, O);
    auto centers = centers_from_distances(tri, d[0], d[1], d[2]);
    REQUIRE(!centers.empty());
    double best = HUGE_VAL;
    for (const auto& c : centers)
      best = std::min(best, std::hypot(c.x - O.x, c.y - O.y, c.z - O.z));
    CHECK(best <= 1e-9 * (1.0 + std::abs(O.z)));
    for (const auto& c : centers) {
      auto d2 = distances(tri, c);
      for (int k = 0; k < 3; ++k)
        CHECK(std::abs(d2[k] - d[k]) <= 1e-9 * std::max(1.0, d[k]));
    }
  }
}

TEST_CASE("dc_value vanishes exactly on the cylinder") {
  CHECK(dc_value({1, 0, 5.3}) == 0.0);
  CHECK(dc_value({0, 0, 1}) == -1.0);
  CHECK(std::abs(dc_value({std::cos(0.3), std::sin(0.3), -2.0})) <= 1e-15);
}

TEST_CASE("law-of-cosines consistency of angles and distances") {
  auto tri = ControlTriangle::make(-0.3, 1.2, 2.9);
  Rng rng(9);
  for (int i = 0; i < 30; ++i) {
    Viewpoint O{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(0.3, 3)};
    auto d = distances(tri, O);
    auto ang = angles_from_viewpoint(tri, O);
    double lhs = d[1] * d[1] + d[2] * d[2] - 2 * ang.cos_alpha * d[1] * d[2];
    CHECK(std::abs(lhs - tri.a() * tri.a()) <= 1e-12 * std::max(1.0, d[1] * d[2]));
    lhs = d[0] * d[0] + d[2] * d[2] - 2 * ang.cos_beta * d[0] * d[2];
    CHECK(std::abs(lhs - tri.b() * tri.b()) <= 1e-12 * std::max(1.0, d[0] * d[2]));
    lhs = d[0] * d[0] + d[1] * d[1] - 2 * ang.cos_gamma * d[0] * d[1];
    CHECK(std::abs(lhs - tri.c() * tri.c()) <= 1e-12 * std::max(1.0, d[0] * d[1]));
  }
}
