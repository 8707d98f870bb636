#pragma once

namespace csdc {

// Central tolerance record.  All defaults are relative to the unit
// circumcircle scale; operations take a const reference so experiments can
// tighten or relax individual knobs without touching call sites.
struct Tolerances {
  // geometry
  double triangle_distinct = 1e-6;     // min angular separation of control points
  double canonical_sum = 1e-12;        // |phi_a+phi_b+phi_c| after canonicalization
  double viewpoint_on_point = 1e-9;    // O too close to a control point
  double trilateration_z2 = 1e-9;      // |z^2| below which the point is tangent
  double distance_roundtrip = 1e-9;    // relative distance reproduction

  // solver
  double leading_coeff = 1e-9;         // relative leading-coefficient floor
  double cluster_radius = 1e-6;        // root clustering, in scaled-root units
  double triplet_residual = 1e-8;      // constraint residual, relative to max(1,|s|^2)
  double real_component = 1e-8;        // |imag| below this counts as real
  double positive_component = 1e-8;    // real part must exceed this for P3P
  double u_consistency = 1e-6;         // second-quadric residual for u candidates

  // surfaces
  double dc_membership = 1e-6;         // |dc_value| for OnDC
  double csdc_membership = 1e-6;       // companion-center |dc_value| for OnCSDC
  double csdc_pair_midpoint = 1e-3;    // merging-pair midpoint |dc_value| near a fold
  double near_real_companion = 1e-2;   // relative |imag| for near-real companions
  double sweep_center_match = 1e-6;    // trilaterated double vs source
  double sweep_min_z0 = 0.05;          // near-plane exclusion
  double fit_dedup = 1e-4;             // min pairwise sample distance

  // partition
  double bisection_t = 1e-10;          // crossing bisection tolerance in t
  double discriminant_zero = 1e-12;    // relative |disc| treated as zero
};

inline const Tolerances& default_tolerances() {
  static const Tolerances t{};
  return t;
}

}  // namespace csdc
