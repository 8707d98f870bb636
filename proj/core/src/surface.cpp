#include "csdc/surface.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "csdc/entities.hpp"
#include "csdc/parallel.hpp"
#include "csdc/rng.hpp"

namespace csdc {

namespace {

void fmt(std::ostream& os, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}

// companions of one danger-cylinder source; nullptr-safe per-reason counters
struct SourceResult {
  bool near_plane = false, leading = false, no_double = false;
  int no_real_center = 0, on_dc = 0;
  std::vector<SurfaceSample> samples;
};

SourceResult sweep_one(const ControlTriangle& tri, double theta, double z0,
                       const Tolerances& tol) {
  SourceResult r;
  if (std::abs(z0) < tol.sweep_min_z0) {
    r.near_plane = true;
    return r;
  }
  Viewpoint src{std::cos(theta), std::sin(theta), z0};
  SolutionSet sol;
  try {
    sol = solve_at(tri, src, tol);
  } catch (const LeadingCoefficientVanishes&) {
    r.leading = true;
    return r;
  }
  auto ds = distances(tri, src);
  const TripletSolution* dbl = nullptr;
  for (const auto& T : sol.triplets) {
    if (T.multiplicity < 2 || !T.p3p) continue;
    double m = 0.0;
    for (int i = 0; i < 3; ++i) m = std::max(m, std::abs(T.s[i].real() - ds[i]));
    if (m > tol.sweep_center_match) continue;
    auto centers = centers_from_distances(tri, T.s[0].real(), T.s[1].real(), T.s[2].real(), tol);
    bool hit = false;
    for (const auto& c : centers)
      hit = hit || (std::hypot(c.x - src.x, c.y - src.y, c.z - src.z) <= tol.sweep_center_match);
    if (hit) dbl = &T;
  }
  if (!dbl) {
    r.no_double = true;
    return r;
  }
  AngleTriple ang = angles_from_viewpoint(tri, src, tol);
  for (const auto& T : sol.triplets) {
    if (&T == dbl || !T.p3p) continue;
    double m = 0.0;
    for (int i = 0; i < 3; ++i) m = std::max(m, std::abs(T.s[i].real() - ds[i]));
    if (T.multiplicity >= 2 && m <= tol.sweep_center_match) continue;
    auto centers = centers_from_distances(tri, T.s[0].real(), T.s[1].real(), T.s[2].real(), tol);
    if (centers.empty()) {
      ++r.no_real_center;
      continue;
    }
    Viewpoint comp = centers.front();  // canonical z >= 0
    double cdc = dc_value(comp);
    if (std::abs(cdc) <= 1e-4) {
      ++r.on_dc;
      continue;
    }
    AngleTriple angc = angles_from_viewpoint(tri, comp, tol);
    double resid = std::max({std::abs(angc.cos_alpha - ang.cos_alpha),
                             std::abs(angc.cos_beta - ang.cos_beta),
                             std::abs(angc.cos_gamma - ang.cos_gamma)});
    r.samples.push_back({theta, z0, src, comp, resid, cdc});
  }
  return r;
}

}  // namespace

std::vector<SurfaceSample> sweep_dc(const ControlTriangle& tri,
                                    const std::vector<double>& theta_grid,
                                    const std::vector<double>& z_grid, const Tolerances& tol,
                                    SweepLog* log, unsigned threads) {
  std::size_t n = theta_grid.size() * z_grid.size();
  std::vector<SourceResult> results(n);
  parallel_for(n, threads, [&](std::size_t i) {
    double theta = theta_grid[i / z_grid.size()];
    double z0 = z_grid[i % z_grid.size()];
    results[i] = sweep_one(tri, theta, z0, tol);
  });
  std::vector<SurfaceSample> out;
  SweepLog local;
  local.sources = int(n);
  for (auto& r : results) {
    local.skipped_near_plane += r.near_plane;
    local.skipped_leading_coeff += r.leading;
    local.skipped_no_double += r.no_double;
    local.skipped_no_real_center += r.no_real_center;
    local.skipped_companion_on_dc += r.on_dc;
    for (auto& s : r.samples) out.push_back(s);
  }
  local.emitted = int(out.size());
  if (log) *log = local;
  return out;
}

const char* to_string(Membership m) {
  switch (m) {
    case Membership::OnDC: return "OnDC";
    case Membership::OnCSDC: return "OnCSDC";
    case Membership::NearBoth: return "NearBoth";
    case Membership::Off: return "Off";
  }
  return "?";
}

MembershipVerdict membership(const ControlTriangle& tri, const Viewpoint& O,
                             double tol_surface, const Tolerances& tol) {
  MembershipVerdict v;
  v.tol_dc = tol_surface;
  v.tol_csdc = std::max(tol_surface, tol.csdc_pair_midpoint);
  v.dc_distance = std::abs(dc_value(O));
  SolutionSet sol = solve_at(tri, O, tol);
  v.discriminant = sol.discriminant;
  auto ds = distances(tri, O);

  double best = HUGE_VAL;
  auto consider = [&](const std::array<double, 3>& s) {
    auto centers = centers_from_distances(tri, std::abs(s[0]), std::abs(s[1]),
                                          std::abs(s[2]), tol);
    for (const auto& c : centers) best = std::min(best, std::abs(dc_value(c)));
  };
  for (const auto& T : sol.triplets) {
    double smax = 0.0, imax = 0.0, own = 0.0;
    for (int i = 0; i < 3; ++i) {
      smax = std::max(smax, std::abs(T.s[i]));
      imax = std::max(imax, std::abs(T.s[i].imag()));
      own = std::max(own, std::abs(T.s[i].real() - ds[i]));
    }
    if (own <= 1e-8 * (1.0 + smax)) continue;  // the viewpoint's own triplet
    if (imax > tol.near_real_companion * (1.0 + smax)) continue;
    consider({T.s[0].real(), T.s[1].real(), T.s[2].real()});
  }
  // fold robustness: the two closest distinct triplets straddle a merging
  // pair near the companion surface; their midpoint is first-order clean
  const TripletSolution* pa = nullptr;
  const TripletSolution* pb = nullptr;
  double dmin = HUGE_VAL;
  for (std::size_t i = 0; i < sol.triplets.size(); ++i)
    for (std::size_t j = i + 1; j < sol.triplets.size(); ++j) {
      double d = 0.0;
      for (int k = 0; k < 3; ++k)
        d = std::max(d, std::abs(sol.triplets[i].s[k] - sol.triplets[j].s[k]));
      if (d < dmin) {
        dmin = d;
        pa = &sol.triplets[i];
        pb = &sol.triplets[j];
      }
    }
  if (pa && pb) {
    std::array<double, 3> mid;
    bool plausible = true;
    for (int k = 0; k < 3; ++k) {
      std::complex<double> m = 0.5 * (pa->s[k] + pb->s[k]);
      mid[k] = std::abs(m.real());
      if (std::abs(m.imag()) > tol.near_real_companion * (1.0 + std::abs(m))) plausible = false;
    }
    double own = 0.0;
    for (int k = 0; k < 3; ++k) own = std::max(own, std::abs(mid[k] - ds[k]));
    if (plausible && own > 1e-8) consider(mid);
  }
  v.csdc_evidence = best;

  bool on_dc = v.dc_distance <= v.tol_dc;
  bool on_csdc = v.csdc_evidence <= v.tol_csdc;
  if (on_dc && on_csdc)
    v.label = Membership::NearBoth;
  else if (on_dc)
    v.label = Membership::OnDC;
  else if (on_csdc)
    v.label = Membership::OnCSDC;
  else
    v.label = Membership::Off;
  return v;
}

namespace {

std::vector<std::array<int, 3>> monomial_set(int degree, bool even_in_z) {
  std::vector<std::array<int, 3>> mons;
  for (int i = 0; i <= degree; ++i)
    for (int j = 0; j + i <= degree; ++j)
      for (int k = 0; k + i + j <= degree; ++k) {
        if (even_in_z && (k % 2)) continue;
        mons.push_back({i, j, k});
      }
  return mons;
}

// monomial coefficients of the orthonormal Legendre polynomials on [-1,1]
std::vector<std::vector<double>> legendre_table(int degree) {
  std::vector<std::vector<double>> P(degree + 1);
  P[0] = {1.0};
  if (degree >= 1) P[1] = {0.0, 1.0};
  for (int n = 1; n < degree; ++n) {
    std::vector<double> next(n + 2, 0.0);
    for (int i = 0; i <= n; ++i) next[i + 1] += (2.0 * n + 1.0) / (n + 1.0) * P[n][i];
    for (int i = 0; i < n; ++i) next[i] -= double(n) / (n + 1.0) * P[n - 1][i];
    P[n + 1] = next;
  }
  for (int n = 0; n <= degree; ++n) {
    double w = std::sqrt((2.0 * n + 1.0) / 2.0);
    for (auto& c : P[n]) c *= w;
  }
  return P;
}

}  // namespace

TrivariatePoly fit_poly(const std::vector<SurfaceSample>& samples, int degree,
                        bool even_in_z, std::uint64_t seed, FitReport* report,
                        const Tolerances& tol) {
  std::vector<Viewpoint> pts;
  pts.reserve(samples.size());
  for (const auto& s : samples) pts.push_back(s.companion);
  return fit_poly(pts, degree, even_in_z, seed, report, tol);
}

TrivariatePoly fit_poly(const std::vector<Viewpoint>& points_in, int degree, bool even_in_z,
                        std::uint64_t seed, FitReport* report, const Tolerances& tol) {
  // dedup on a hash grid at the configured minimum pairwise distance
  std::vector<Viewpoint> points;
  points.reserve(points_in.size());
  {
    std::vector<Viewpoint> kept;
    auto cell = [&](const Viewpoint& p) {
      auto q = [&](double v) { return std::llround(v / tol.fit_dedup); };
      return std::array<long long, 3>{q(p.x), q(p.y), q(p.z)};
    };
    std::map<std::array<long long, 3>, bool> seen;
    for (const auto& p : points_in) {
      auto c = cell(p);
      if (seen.emplace(c, true).second) points.push_back(p);
    }
  }

  auto mons = monomial_set(degree, even_in_z);
  if (points.size() < 4 * mons.size())
    throw InsufficientSamples("need at least 4x as many samples as basis monomials");

  std::array<double, 3> lo = {HUGE_VAL, HUGE_VAL, HUGE_VAL};
  std::array<double, 3> hi = {-HUGE_VAL, -HUGE_VAL, -HUGE_VAL};
  for (const auto& p : points) {
    lo[0] = std::min(lo[0], p.x); hi[0] = std::max(hi[0], p.x);
    lo[1] = std::min(lo[1], p.y); hi[1] = std::max(hi[1], p.y);
    lo[2] = std::min(lo[2], p.z); hi[2] = std::max(hi[2], p.z);
  }
  std::array<double, 3> center, half;
  for (int d = 0; d < 3; ++d) {
    center[d] = (lo[d] + hi[d]) / 2.0;
    half[d] = std::max((hi[d] - lo[d]) / 2.0, 1e-12);
  }

  // deterministic shuffle for the held-out split
  std::vector<std::size_t> idx(points.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  Rng rng(seed);
  for (std::size_t i = idx.size(); i > 1; --i)
    std::swap(idx[i - 1], idx[rng.bounded(i)]);
  std::size_t n_train = (points.size() * 4) / 5;

  auto leg = legendre_table(degree);
  auto fill_row = [&](const Viewpoint& p, double* row) {
    double sx = (p.x - center[0]) / half[0];
    double sy = (p.y - center[1]) / half[1];
    double sz = (p.z - center[2]) / half[2];
    std::vector<double> vx(degree + 1), vy(degree + 1), vz(degree + 1);
    for (int nD = 0; nD <= degree; ++nD) {
      auto ev = [&](const std::vector<double>& c, double t) {
        double r = 0.0;
        for (int i = int(c.size()) - 1; i >= 0; --i) r = r * t + c[i];
        return r;
      };
      vx[nD] = ev(leg[nD], sx);
      vy[nD] = ev(leg[nD], sy);
      vz[nD] = ev(leg[nD], sz);
    }
    for (std::size_t c = 0; c < mons.size(); ++c)
      row[c] = vx[mons[c][0]] * vy[mons[c][1]] * vz[mons[c][2]];
  };

  Eigen::MatrixXd V(n_train, mons.size());
  std::vector<double> row(mons.size());
  for (std::size_t r = 0; r < n_train; ++r) {
    fill_row(points[idx[r]], row.data());
    for (std::size_t c = 0; c < mons.size(); ++c) V(r, c) = row[c];
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(V, Eigen::ComputeThinV);
  Eigen::VectorXd coef = svd.matrixV().col(mons.size() - 1);
  double smin = svd.singularValues()(mons.size() - 1);
  double snext = svd.singularValues()(mons.size() - 2);

  double rms = 0.0, mx = 0.0;
  std::size_t n_test = points.size() - n_train;
  for (std::size_t r = n_train; r < points.size(); ++r) {
    fill_row(points[idx[r]], row.data());
    double v = 0.0;
    for (std::size_t c = 0; c < mons.size(); ++c) v += row[c] * coef(c);
    rms += v * v;
    mx = std::max(mx, std::abs(v));
  }
  rms = n_test ? std::sqrt(rms / double(n_test)) : 0.0;

  if (report) {
    report->degree = degree;
    report->even_in_z = even_in_z;
    report->basis_size = mons.size();
    report->n_train = n_train;
    report->n_heldout = n_test;
    report->rms = rms;
    report->max_abs = mx;
    report->sigma_min = smin;
    report->sigma_next = snext;
    report->gap = smin > 0 ? snext / smin : HUGE_VAL;
    report->rank_deficient = report->gap < 10.0;
    report->box_lo = lo;
    report->box_hi = hi;
  }

  // convert the Legendre-tensor expansion to sparse monomials
  TrivariatePoly poly;
  poly.center = center;
  poly.half = half;
  for (std::size_t c = 0; c < mons.size(); ++c) {
    double w = coef(c);
    if (w == 0.0) continue;
    const auto& cx = leg[mons[c][0]];
    const auto& cy = leg[mons[c][1]];
    const auto& cz = leg[mons[c][2]];
    for (std::size_t i = 0; i < cx.size(); ++i) {
      if (cx[i] == 0.0) continue;
      for (std::size_t j = 0; j < cy.size(); ++j) {
        if (cy[j] == 0.0) continue;
        for (std::size_t k = 0; k < cz.size(); ++k) {
          if (cz[k] == 0.0) continue;
          double add = w * cx[i] * cy[j] * cz[k];
          poly.set(int(i), int(j), int(k), poly.coeff(int(i), int(j), int(k)) + add);
        }
      }
    }
  }
  return poly.normalized();
}

double dc_nondivisibility(const TrivariatePoly& poly, std::uint64_t seed, int n) {
  Rng rng(seed);
  double zlo = poly.center[2] - poly.half[2];
  double zhi = poly.center[2] + poly.half[2];
  double mn = HUGE_VAL;
  for (int i = 0; i < n; ++i) {
    double th = rng.uniform(0.0, 2.0 * M_PI);
    double z = rng.uniform(zlo, zhi);
    mn = std::min(mn, std::abs(poly.eval(std::cos(th), std::sin(th), z)));
  }
  return mn;
}

DeltoidReport deltoid_limit_check(const ControlTriangle& tri,
                                  const std::vector<double>& z0_values, int theta_count,
                                  const Tolerances& tol) {
  DeltoidReport rep;
  for (double z0 : z0_values) {
    std::vector<double> thetas(theta_count);
    for (int i = 0; i < theta_count; ++i) thetas[i] = 2.0 * M_PI * i / theta_count;
    auto samples = sweep_dc(tri, thetas, {z0}, tol, nullptr, 1);
    DeltoidRow row;
    row.z0 = z0;
    row.companions = int(samples.size());
    for (const auto& s : samples) {
      double q = deltoid_value(s.companion.x, s.companion.y);
      row.max_abs_q = std::max(row.max_abs_q, std::abs(q));
      // radial Newton toward the quartic zero set
      double x = s.companion.x, y = s.companion.y;
      double t = 1.0;
      for (int it = 0; it < 80; ++it) {
        double h = 1e-7;
        double f = deltoid_value(t * x, t * y);
        double fp = (deltoid_value((t + h) * x, (t + h) * y) -
                     deltoid_value((t - h) * x, (t - h) * y)) /
                    (2.0 * h);
        if (fp == 0.0) break;
        double step = f / fp;
        t -= step;
        if (std::abs(step) < 1e-13) break;
      }
      row.max_root_dist = std::max(row.max_root_dist, std::abs(t - 1.0) * std::hypot(x, y));
    }
    rep.rows.push_back(row);
  }
  rep.monotone = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i)
    rep.monotone = rep.monotone && rep.rows[i].max_abs_q < rep.rows[i - 1].max_abs_q;
  return rep;
}

void export_samples_csv(const std::vector<SurfaceSample>& samples, std::ostream& os) {
  os << "theta,z0,x,y,z,dc_value,residual\n";
  for (const auto& s : samples) {
    fmt(os, s.theta); os << ',';
    fmt(os, s.z0); os << ',';
    fmt(os, s.companion.x); os << ',';
    fmt(os, s.companion.y); os << ',';
    fmt(os, s.companion.z); os << ',';
    fmt(os, s.companion_dc); os << ',';
    fmt(os, s.solver_residual); os << '\n';
  }
}

std::vector<SurfaceSample> read_samples_csv(std::istream& is) {
  std::vector<SurfaceSample> out;
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    SurfaceSample s;
    std::istringstream ls(line);
    std::string tok;
    double vals[7];
    int i = 0;
    while (std::getline(ls, tok, ',') && i < 7) vals[i++] = std::strtod(tok.c_str(), nullptr);
    if (i != 7) continue;
    s.theta = vals[0];
    s.z0 = vals[1];
    s.companion = {vals[2], vals[3], vals[4]};
    s.companion_dc = vals[5];
    s.solver_residual = vals[6];
    s.source = {std::cos(s.theta), std::sin(s.theta), s.z0};
    out.push_back(s);
  }
  return out;
}

}  // namespace csdc
