#include "csdc/partition.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "csdc/parallel.hpp"

namespace csdc {

namespace {

Viewpoint lerp(const Viewpoint& a, const Viewpoint& b, double t) {
  return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y), a.z + t * (b.z - a.z)};
}

double disc_at(const ControlTriangle& tri, const Viewpoint& O, const Tolerances& tol) {
  return quartic_discriminant(grunert_quartic(tri, angles_from_viewpoint(tri, O, tol), tol));
}

int real_root_count(const SolutionSet& s, double imag_tol) {
  int n = 0;
  for (const auto& r : s.roots)
    if (std::abs(r.imag()) <= imag_tol * (1.0 + std::abs(r))) ++n;
  return n;
}

// merging pair = the two closest distinct triplets; returns |dc| of the
// trilaterated midpoint, or +inf when no plausible pair exists
double merging_pair_midpoint_dc(const ControlTriangle& tri, const SolutionSet& sol,
                                const std::array<double, 3>& own, const Tolerances& tol) {
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
  const TripletSolution* dup = nullptr;
  for (const auto& T : sol.triplets)
    if (T.multiplicity >= 2) dup = &T;
  std::array<double, 3> mid;
  if (dup) {
    for (int k = 0; k < 3; ++k) mid[k] = std::abs(dup->s[k].real());
  } else if (pa && pb) {
    for (int k = 0; k < 3; ++k) mid[k] = std::abs(0.5 * (pa->s[k] + pb->s[k]).real());
  } else {
    return HUGE_VAL;
  }
  double self = 0.0;
  for (int k = 0; k < 3; ++k) self = std::max(self, std::abs(mid[k] - own[k]));
  if (self <= 1e-8) return HUGE_VAL;  // the pair collapses onto O itself
  auto centers = centers_from_distances(tri, mid[0], mid[1], mid[2], tol);
  double best = HUGE_VAL;
  for (const auto& c : centers) best = std::min(best, std::abs(dc_value(c)));
  return best;
}

}  // namespace

std::vector<CrossingReport> detect_crossings(const ControlTriangle& tri, const PathSpec& path,
                                             const Tolerances& tol) {
  std::vector<CrossingReport> out;
  int n = std::max(path.samples, 16);
  auto at = [&](double t) { return lerp(path.start, path.end, t); };

  std::vector<double> ts(n), dv(n);
  for (int i = 0; i < n; ++i) {
    ts[i] = double(i) / (n - 1);
    dv[i] = disc_at(tri, at(ts[i]), tol);
  }
  double dscale = 0.0;
  for (double d : dv) dscale = std::max(dscale, std::abs(d));
  if (dscale == 0.0) return out;

  for (int i = 0; i + 1 < n; ++i) {
    bool sign_change = dv[i] * dv[i + 1] < 0.0;
    bool touching = !sign_change && i > 0 && std::abs(dv[i]) < std::abs(dv[i - 1]) &&
                    std::abs(dv[i]) < std::abs(dv[i + 1]) &&
                    std::abs(dv[i]) <= 1e-7 * dscale;
    if (!sign_change && !touching) continue;

    CrossingReport rep;
    double tstar;
    if (sign_change) {
      double lo = ts[i], hi = ts[i + 1], flo = dv[i];
      while (hi - lo > path.refine_tol) {
        double mid = 0.5 * (lo + hi);
        double fm = disc_at(tri, at(mid), tol);
        if (flo * fm <= 0.0)
          hi = mid;
        else {
          lo = mid;
          flo = fm;
        }
      }
      tstar = 0.5 * (lo + hi);
    } else {
      rep.tangential = true;
      tstar = ts[i];
    }
    rep.t_star = tstar;
    Viewpoint Oc = at(tstar);
    rep.dc_at_crossing = dc_value(Oc);

    SolutionSet sc = solve_at(tri, Oc, tol);
    rep.pair_midpoint_dc =
        merging_pair_midpoint_dc(tri, sc, distances(tri, Oc), tol);

    bool on_dc = std::abs(rep.dc_at_crossing) <= tol.dc_membership;
    bool on_csdc = rep.pair_midpoint_dc <= tol.csdc_pair_midpoint;
    if (on_dc && on_csdc)
      rep.hit = SurfaceHit::Both;
    else if (on_dc)
      rep.hit = SurfaceHit::DC;
    else if (on_csdc)
      rep.hit = SurfaceHit::CSDC;
    else
      rep.hit = SurfaceHit::Other;

    if (!rep.tangential) {
      // probes must clear the crossing but stay within the adjacent cells
      double lim = ts[i + 1] - ts[i];
      double delta = std::max(1e-6, 1e4 * path.refine_tol);
      delta = std::min(delta, 0.45 * lim);
      rep.probe_delta = delta;
      SolutionSet sa = solve_at(tri, at(tstar - delta), tol);
      SolutionSet sb = solve_at(tri, at(tstar + delta), tol);
      rep.count_before = sa.p3p_count;
      rep.count_after = sb.p3p_count;
      rep.count_before_mult = sa.p3p_count_multiplicity;
      rep.count_after_mult = sb.p3p_count_multiplicity;
      rep.delta = rep.count_after - rep.count_before;
      rep.real_roots_before = real_root_count(sa, tol.real_component);
      rep.real_roots_after = real_root_count(sb, tol.real_component);
      rep.conjugate_pair_transition =
          std::abs(rep.real_roots_after - rep.real_roots_before) == 2;
    }
    out.push_back(rep);
  }
  return out;
}

const char* to_string(SurfaceHit h) {
  switch (h) {
    case SurfaceHit::DC: return "DC";
    case SurfaceHit::CSDC: return "CSDC";
    case SurfaceHit::Both: return "Both";
    case SurfaceHit::Other: return "Other";
  }
  return "?";
}

CountMap count_map(const ControlTriangle& tri, const SliceSpec& slice, const Tolerances& tol,
                   unsigned threads) {
  CountMap map;
  map.slice = slice;
  map.counts.assign(std::size_t(slice.nx) * slice.ny, -1);
  parallel_for(map.counts.size(), threads, [&](std::size_t n) {
    int iy = int(n) / slice.nx;
    int ix = int(n) % slice.nx;
    double x = slice.nx > 1 ? slice.xmin + (slice.xmax - slice.xmin) * ix / (slice.nx - 1)
                            : slice.xmin;
    double y = slice.ny > 1 ? slice.ymin + (slice.ymax - slice.ymin) * iy / (slice.ny - 1)
                            : slice.ymin;
    try {
      map.counts[n] = count_p3p(tri, {x, y, slice.z}, tol);
    } catch (const std::exception&) {
      map.counts[n] = -1;
    }
  });
  return map;
}

void write_count_csv(const CountMap& map, std::ostream& os) {
  os << "ix,iy,x,y,count\n";
  char buf[96];
  for (int iy = 0; iy < map.slice.ny; ++iy)
    for (int ix = 0; ix < map.slice.nx; ++ix) {
      double x = map.slice.nx > 1
                     ? map.slice.xmin + (map.slice.xmax - map.slice.xmin) * ix / (map.slice.nx - 1)
                     : map.slice.xmin;
      double y = map.slice.ny > 1
                     ? map.slice.ymin + (map.slice.ymax - map.slice.ymin) * iy / (map.slice.ny - 1)
                     : map.slice.ymin;
      std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%d\n", ix, iy, x, y, map.at(ix, iy));
      os << buf;
    }
}

void write_count_pgm(const CountMap& map, std::ostream& os) {
  os << "P5\n" << map.slice.nx << ' ' << map.slice.ny << "\n255\n";
  for (int iy = 0; iy < map.slice.ny; ++iy)
    for (int ix = 0; ix < map.slice.nx; ++ix) {
      int c = map.at(ix, iy);
      unsigned char g = c < 0 ? 255 : static_cast<unsigned char>(std::min(51 * c, 254));
      os.put(char(g));
    }
}

JacobianAnalysis jacobian_from(const std::array<double, 3>& s, const AngleTriple& ang) {
  JacobianAnalysis out;
  double s1 = s[0], s2 = s[1], s3 = s[2];
  out.J(0, 0) = 0.0;
  out.J(0, 1) = (s2 - s3 * ang.cos_alpha) / (s2 * s3);
  out.J(0, 2) = (s3 - s2 * ang.cos_alpha) / (s2 * s3);
  out.J(1, 0) = (s1 - s3 * ang.cos_beta) / (s3 * s1);
  out.J(1, 1) = 0.0;
  out.J(1, 2) = (s3 - s1 * ang.cos_beta) / (s3 * s1);
  out.J(2, 0) = (s1 - s2 * ang.cos_gamma) / (s1 * s2);
  out.J(2, 1) = (s2 - s1 * ang.cos_gamma) / (s1 * s2);
  out.J(2, 2) = 0.0;
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(out.J, Eigen::ComputeFullU | Eigen::ComputeFullV);
  for (int i = 0; i < 3; ++i) out.singular_values[i] = svd.singularValues()(i);
  out.right_null = svd.matrixV().col(2);
  out.left_null = svd.matrixU().col(2);
  return out;
}

JacobianAnalysis jacobian_analysis(const ControlTriangle& tri, const Viewpoint& O,
                                   const Tolerances& tol) {
  AngleTriple ang = angles_from_viewpoint(tri, O, tol);
  SolutionSet sol = solve(tri, ang, tol);
  auto ds = distances(tri, O);
  // select the triplet corresponding to O
  const TripletSolution* best = nullptr;
  double bd = HUGE_VAL;
  for (const auto& T : sol.triplets) {
    double d = 0.0;
    for (int i = 0; i < 3; ++i) d = std::max(d, std::abs(T.s[i] - ds[i]));
    if (d < bd) {
      bd = d;
      best = &T;
    }
  }
  std::array<double, 3> s = ds;
  if (best && bd <= 1e-6 * (1.0 + std::abs(ds[0])))
    s = {best->s[0].real(), best->s[1].real(), best->s[2].real()};
  return jacobian_from(s, ang);
}

FoldReport fold_scaling(const ControlTriangle& tri, const Viewpoint& O_d,
                        const std::array<double, 3>& direction,
                        const std::vector<double>& epsilons, const Tolerances& tol) {
  if (std::abs(dc_value(O_d)) > 1e-10)
    throw std::invalid_argument("fold_scaling requires a danger-cylinder viewpoint");
  AngleTriple ang0 = angles_from_viewpoint(tri, O_d, tol);
  auto s0 = distances(tri, O_d);

  auto run = [&](const std::array<double, 3>& dir, std::vector<double>& sep,
                 std::vector<double>& imag) -> bool {
    sep.clear();
    imag.clear();
    // track the merging pair by continuation from the double root at eps=0
    std::array<std::complex<double>, 3> prev_a{s0[0], s0[1], s0[2]};
    std::array<std::complex<double>, 3> prev_b = prev_a;
    // descend from the largest epsilon; continuation runs smallest-first
    std::vector<double> eps_sorted = epsilons;
    std::sort(eps_sorted.begin(), eps_sorted.end());
    std::vector<double> sep_by_eps(eps_sorted.size(), 0.0), im_by_eps(eps_sorted.size(), 0.0);
    for (std::size_t k = 0; k < eps_sorted.size(); ++k) {
      double eps = eps_sorted[k];
      AngleTriple ang{ang0.cos_alpha + eps * dir[0], ang0.cos_beta + eps * dir[1],
                      ang0.cos_gamma + eps * dir[2]};
      SolutionSet sol;
      try {
        sol = solve(tri, ang, tol);
      } catch (const LeadingCoefficientVanishes&) {
        return false;
      }
      // expand multiplicities into individual candidates
      std::vector<std::array<std::complex<double>, 3>> cands;
      for (const auto& T : sol.triplets)
        for (int m = 0; m < T.multiplicity; ++m) cands.push_back(T.s);
      auto nearest = [&](const std::array<std::complex<double>, 3>& ref,
                         std::size_t skip) -> std::size_t {
        std::size_t bi = SIZE_MAX;
        double bd = HUGE_VAL;
        for (std::size_t i = 0; i < cands.size(); ++i) {
          if (i == skip) continue;
          double d = 0.0;
          for (int c = 0; c < 3; ++c) d = std::max(d, std::abs(cands[i][c] - ref[c]));
          if (d < bd) {
            bd = d;
            bi = i;
          }
        }
        return bi;
      };
      std::size_t ia = nearest(prev_a, SIZE_MAX);
      if (ia == SIZE_MAX) return false;
      std::size_t ib = nearest(prev_b, ia);
      if (ib == SIZE_MAX) return false;
      prev_a = cands[ia];
      prev_b = cands[ib];
      double sp = 0.0, im = 0.0;
      for (int c = 0; c < 3; ++c) {
        sp = std::max(sp, std::abs(prev_a[c] - prev_b[c]));
        im = std::max({im, std::abs(prev_a[c].imag()), std::abs(prev_b[c].imag())});
      }
      sep_by_eps[k] = sp;
      im_by_eps[k] = im;
    }
    for (std::size_t k = 0; k < eps_sorted.size(); ++k) {
      sep.push_back(sep_by_eps[k]);
      imag.push_back(im_by_eps[k]);
    }
    return true;
  };

  auto slope = [](const std::vector<double>& xs, const std::vector<double>& ys, double* resid) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = xs.size();
    for (std::size_t i = 0; i < m; ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
    }
    double sl = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    if (resid) {
      double b = (sy - sl * sx) / m, r2 = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        double e = ys[i] - (sl * xs[i] + b);
        r2 += e * e;
      }
      *resid = std::sqrt(r2 / m);
    }
    return sl;
  };

  FoldReport rep;
  std::vector<double> eps_sorted = epsilons;
  std::sort(eps_sorted.begin(), eps_sorted.end());
  rep.epsilons = eps_sorted;

  std::vector<double> sep_p, im_p, sep_m, im_m;
  bool ok_p = run(direction, sep_p, im_p);
  std::array<double, 3> neg = {-direction[0], -direction[1], -direction[2]};
  bool ok_m = run(neg, sep_m, im_m);
  if (!ok_p && !ok_m) throw std::runtime_error("fold_scaling: tracking failed");

  auto is_real_branch = [&](const std::vector<double>& sep, const std::vector<double>& im) {
    // judge at the largest epsilon where the pair is widest
    return !sep.empty() && im.back() <= 1e-6 * (1.0 + sep.back());
  };

  bool p_real = ok_p && is_real_branch(sep_p, im_p);
  bool m_real = ok_m && is_real_branch(sep_m, im_m);

  const std::vector<double>*real_sep, *cplx_im;
  if (p_real) {
    rep.pair_real = true;
    rep.flipped = false;
    rep.direction = direction;
    real_sep = &sep_p;
    cplx_im = &im_m;
  } else if (m_real) {
    rep.pair_real = false;
    rep.flipped = true;
    rep.direction = neg;
    real_sep = &sep_m;
    cplx_im = &im_p;
  } else {
    throw std::runtime_error("fold_scaling: neither direction yields a real pair");
  }

  std::vector<double> lx;
  for (double e : eps_sorted) lx.push_back(std::log(e));
  std::vector<double> ly;
  for (double s : *real_sep) ly.push_back(std::log(std::max(s, 1e-300)));
  rep.separation = *real_sep;
  rep.exponent = slope(lx, ly, &rep.fit_residual);

  std::vector<double> lyi;
  bool has_imag = true;
  for (double v : *cplx_im) {
    if (v <= 0.0) has_imag = false;
    lyi.push_back(std::log(std::max(v, 1e-300)));
  }
  rep.imag_part = *cplx_im;
  rep.exponent_imag = has_imag ? slope(lx, lyi, nullptr) : 0.0;
  return rep;
}

}  // namespace csdc
