#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "csdc/geometry.hpp"
#include "csdc/p3p.hpp"
#include "csdc/surface.hpp"

namespace csdc {

struct PathSpec {
  Viewpoint start, end;
  int samples = 257;
  double refine_tol = 1e-10;
};

enum class SurfaceHit { DC, CSDC, Both, Other };
const char* to_string(SurfaceHit h);

struct CrossingReport {
  double t_star = 0.0;
  SurfaceHit hit = SurfaceHit::Other;
  bool tangential = false;  // discriminant touches zero without a sign change
  double probe_delta = 0.0; // the +-delta in t used for before/after counts
  int count_before = 0, count_after = 0;                // collapsed P3P counts
  int count_before_mult = 0, count_after_mult = 0;      // multiplicity-aware
  int delta = 0;                                        // collapsed difference
  int real_roots_before = 0, real_roots_after = 0;
  bool conjugate_pair_transition = false;  // exactly one pair switched
  double dc_at_crossing = 0.0;
  double pair_midpoint_dc = 0.0;  // |dc| of the merging-pair midpoint center
};

std::vector<CrossingReport> detect_crossings(const ControlTriangle& tri, const PathSpec& path,
                                             const Tolerances& tol = default_tolerances());

struct SliceSpec {
  double z = 1.5;
  double xmin = -3.0, xmax = 3.0, ymin = -3.0, ymax = 3.0;
  int nx = 256, ny = 256;
};

struct CountMap {
  SliceSpec slice;
  std::vector<int> counts;  // row-major, y rows by x columns; -1 = degenerate
  int at(int ix, int iy) const { return counts[std::size_t(iy) * slice.nx + ix]; }
};

CountMap count_map(const ControlTriangle& tri, const SliceSpec& slice,
                   const Tolerances& tol = default_tolerances(), unsigned threads = 1);

void write_count_csv(const CountMap& map, std::ostream& os);
// binary P5, maxval 255, gray = 51 * count (clamped)
void write_count_pgm(const CountMap& map, std::ostream& os);

struct JacobianAnalysis {
  Eigen::Matrix3d J = Eigen::Matrix3d::Zero();
  std::array<double, 3> singular_values{};  // descending
  Eigen::Vector3d right_null = Eigen::Vector3d::Zero();  // v3
  Eigen::Vector3d left_null = Eigen::Vector3d::Zero();   // u3
};

// Differential of the subtended-angle cosines with respect to the distances,
// evaluated at the solution triplet corresponding to O.
JacobianAnalysis jacobian_analysis(const ControlTriangle& tri, const Viewpoint& O,
                                   const Tolerances& tol = default_tolerances());
JacobianAnalysis jacobian_from(const std::array<double, 3>& s, const AngleTriple& ang);

struct FoldReport {
  std::vector<double> epsilons;
  std::vector<double> separation;  // merging-pair distance per epsilon
  std::vector<double> imag_part;   // max |imag| of the pair per epsilon
  double exponent = 0.0;           // slope of log(separation) vs log(eps)
  double exponent_imag = 0.0;      // slope of log(imag) vs log(eps), complex branch
  double fit_residual = 0.0;
  bool pair_real = false;          // the requested direction gives a real pair
  bool flipped = false;            // direction was negated to reach the real branch
  std::array<double, 3> direction{};
};

// Perturbs the angle triple of the instance at O_d (on the danger cylinder)
// by eps * direction and tracks the merging solution pair.  If the requested
// direction produces a complex pair, the direction is flipped and the complex
// branch is reported through exponent_imag.
FoldReport fold_scaling(const ControlTriangle& tri, const Viewpoint& O_d,
                        const std::array<double, 3>& direction,
                        const std::vector<double>& epsilons,
                        const Tolerances& tol = default_tolerances());

}  // namespace csdc
