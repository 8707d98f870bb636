#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "csdc/geometry.hpp"
#include "csdc/p3p.hpp"
#include "csdc/trivariate.hpp"

namespace csdc {

struct InsufficientSamples : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnsupportedFormat : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One companion viewpoint generated from a danger-cylinder source.
struct SurfaceSample {
  double theta = 0.0;
  double z0 = 0.0;
  Viewpoint source;
  Viewpoint companion;      // canonical z >= 0
  double solver_residual = 0.0;  // companion angle reproduction error
  double companion_dc = 0.0;     // dc_value at the companion
};

struct SweepLog {
  int sources = 0;
  int emitted = 0;
  int skipped_near_plane = 0;
  int skipped_leading_coeff = 0;
  int skipped_no_double = 0;
  int skipped_no_real_center = 0;
  int skipped_companion_on_dc = 0;
  std::vector<std::string> notes;
};

std::vector<SurfaceSample> sweep_dc(const ControlTriangle& tri,
                                    const std::vector<double>& theta_grid,
                                    const std::vector<double>& z_grid,
                                    const Tolerances& tol = default_tolerances(),
                                    SweepLog* log = nullptr, unsigned threads = 1);

enum class Membership { OnDC, OnCSDC, NearBoth, Off };

struct MembershipVerdict {
  Membership label = Membership::Off;
  double dc_distance = 0.0;     // |dc_value(O)|
  double csdc_evidence = 0.0;   // min |dc_value| over companion centers
  double discriminant = 0.0;
  double tol_dc = 0.0;
  double tol_csdc = 0.0;
};

const char* to_string(Membership m);

MembershipVerdict membership(const ControlTriangle& tri, const Viewpoint& O,
                             double tol_surface,
                             const Tolerances& tol = default_tolerances());

struct FitReport {
  int degree = 0;
  bool even_in_z = true;
  std::size_t basis_size = 0;
  std::size_t n_train = 0;
  std::size_t n_heldout = 0;
  double rms = 0.0;
  double max_abs = 0.0;
  double sigma_min = 0.0;
  double sigma_next = 0.0;
  double gap = 0.0;
  bool rank_deficient = false;
  std::array<double, 3> box_lo{}, box_hi{};
};

// Null-space surface fit over the product-Legendre basis on the scaled box.
// Unit norm means unit L2(box) norm of the polynomial, which is what makes
// held-out residuals comparable across degrees; the returned TrivariatePoly
// carries the equivalent monomial expansion.  Residuals are reported on a
// held-out split selected by `seed`.
TrivariatePoly fit_poly(const std::vector<Viewpoint>& points, int degree, bool even_in_z,
                        std::uint64_t seed, FitReport* report,
                        const Tolerances& tol = default_tolerances());
TrivariatePoly fit_poly(const std::vector<SurfaceSample>& samples, int degree,
                        bool even_in_z, std::uint64_t seed, FitReport* report,
                        const Tolerances& tol = default_tolerances());

// min |poly| over `n` random cylinder points inside the fitted z range; a
// companion-surface polynomial free of the cylinder factor stays bounded away
// from zero.
double dc_nondivisibility(const TrivariatePoly& poly, std::uint64_t seed, int n = 100);

struct DeltoidRow {
  double z0 = 0.0;
  int companions = 0;
  double max_abs_q = 0.0;      // max |deltoid quartic| over companion (x, y)
  double max_root_dist = 0.0;  // max radial distance to the quartic zero set
};

struct DeltoidReport {
  std::vector<DeltoidRow> rows;
  bool monotone = false;
};

DeltoidReport deltoid_limit_check(const ControlTriangle& tri,
                                  const std::vector<double>& z0_values, int theta_count = 48,
                                  const Tolerances& tol = default_tolerances());

// CSV export: header theta,z0,x,y,z,dc_value,residual
void export_samples_csv(const std::vector<SurfaceSample>& samples, std::ostream& os);
std::vector<SurfaceSample> read_samples_csv(std::istream& is);

// OBJ export: marching-cubes contour of the polynomial zero set over a box.
void export_poly_obj(const TrivariatePoly& poly, const std::array<double, 3>& lo,
                     const std::array<double, 3>& hi, int resolution, std::ostream& os);

}  // namespace csdc
