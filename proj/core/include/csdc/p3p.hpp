#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <vector>

#include "csdc/geometry.hpp"
#include "csdc/quartic.hpp"

namespace csdc {

struct LeadingCoefficientVanishes : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One constraint-system solution.  Components may be complex; the stored
// representative has Re(s1) >= 0.  `p3p` is true when all three components
// are real and positive within tolerance.
struct TripletSolution {
  std::array<std::complex<double>, 3> s;
  int multiplicity = 1;
  bool p3p = false;
  double residual = 0.0;  // max constraint residual / max(1, |s|^2)
};

struct SolutionSet {
  std::array<double, 5> quartic{};               // ascending coefficients
  std::array<std::complex<double>, 4> roots{};   // all four quartic roots
  std::vector<TripletSolution> triplets;
  double discriminant = 0.0;
  int p3p_count = 0;              // distinct P3P triplets (a double counts once)
  int p3p_count_multiplicity = 0; // same, weighted by multiplicity
};

// Grunert elimination: with u = s2/s1, v = s3/s1, pairwise equating the s1^2
// expressions gives two quadrics in u whose resultant is a quartic in v.
// Throws LeadingCoefficientVanishes when the quartic degenerates.
std::array<double, 5> grunert_quartic(const ControlTriangle& tri, const AngleTriple& ang,
                                      const Tolerances& tol = default_tolerances());

SolutionSet solve(const ControlTriangle& tri, const AngleTriple& ang,
                  const Tolerances& tol = default_tolerances());

// Convenience composition: angles_from_viewpoint + solve.
SolutionSet solve_at(const ControlTriangle& tri, const Viewpoint& O,
                     const Tolerances& tol = default_tolerances());

int count_p3p(const ControlTriangle& tri, const Viewpoint& O,
              const Tolerances& tol = default_tolerances());

double constraint_residual(const ControlTriangle& tri, const AngleTriple& ang,
                           const std::array<std::complex<double>, 3>& s);

}  // namespace csdc
