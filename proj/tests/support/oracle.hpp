// Brute-force reference solver for the basic constraint system: dense
// multi-start Newton over complex distance triplets, seeded on a grid.
// Deliberately independent of the Grunert elimination used by the library.

#pragma once

#include <array>
#include <complex>
#include <vector>

#include "csdc/geometry.hpp"

namespace csdc::testing {

using Triplet = std::array<std::complex<double>, 3>;

// All constraint-system solutions found by multi-start Newton, canonicalized
// to Re(s1) >= 0 and deduplicated.  The seed grid expands until at least
// `expect` distinct solutions are found or the magnitudes are exhausted.
std::vector<Triplet> brute_force_solutions(const ControlTriangle& tri, const AngleTriple& ang,
                                           int expect = 4);

// symmetric Hausdorff distance between two triplet sets (max-norm metric)
double hausdorff(const std::vector<Triplet>& a, const std::vector<Triplet>& b);

}  // namespace csdc::testing
