#include "csdc/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "csdc/entities.hpp"
#include "csdc/partition.hpp"
#include "csdc/rng.hpp"
#include "csdc/surface.hpp"

namespace csdc {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void require_keys(const json& j, const std::string& where, std::set<std::string> allowed,
                  std::set<std::string> required) {
  if (!j.is_object()) throw ConfigInvalid(where + ": expected an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigInvalid(where + ": unknown key '" + k + "'");
  for (const auto& k : required)
    if (!j.contains(k)) throw ConfigInvalid(where + ": missing key '" + k + "'");
}

double num(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigInvalid(where + ": expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigInvalid(where + ": expected an integer");
  return j.get<int>();
}

ControlTriangle triangle_from(const json& cfg) {
  if (!cfg.contains("triangle")) throw ConfigInvalid("config: missing key 'triangle'");
  const json& t = cfg["triangle"];
  require_keys(t, "triangle", {"phi"}, {"phi"});
  const json& p = t["phi"];
  if (!p.is_array() || p.size() != 3)
    throw ConfigInvalid("triangle.phi: expected an array of 3 angles");
  return ControlTriangle::make(num(p[0], "triangle.phi[0]"), num(p[1], "triangle.phi[1]"),
                               num(p[2], "triangle.phi[2]"));
}

std::uint64_t seed_from(const json& cfg, const RunOptions& opts, bool required) {
  if (opts.seed_override) return *opts.seed_override;
  if (cfg.contains("seed")) {
    if (!cfg["seed"].is_number_unsigned() && !cfg["seed"].is_number_integer())
      throw ConfigInvalid("seed: expected an unsigned integer");
    return cfg["seed"].get<std::uint64_t>();
  }
  if (required) throw ConfigInvalid("seed: required for randomized experiments");
  return 0;
}

Viewpoint viewpoint_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) throw ConfigInvalid(where + ": expected [x, y, z]");
  return {num(j[0], where), num(j[1], where), num(j[2], where)};
}

json viewpoint_json(const Viewpoint& v) { return json::array({v.x, v.y, v.z}); }

struct Manifest {
  json config;
  std::string command;
  std::vector<std::pair<std::string, std::uintmax_t>> outputs;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  void add(const fs::path& p) { outputs.push_back({p.filename().string(), fs::file_size(p)}); }

  void write(const fs::path& dir) const {
    json m;
    m["command"] = command;
    m["config"] = config;
    m["version"] = version_string();
    json files = json::array();
    for (const auto& [name, size] : outputs) files.push_back({{"file", name}, {"bytes", size}});
    m["outputs"] = files;
    m["wall_time_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
            .count();
    std::ofstream os(dir / "manifest.json", std::ios::binary);
    os << m.dump(2) << '\n';
  }
};

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  os << text;
}

// ---------------------------------------------------------------------------

int cmd_sweep(const json& cfg, const RunOptions& opts, Manifest& man) {
  require_keys(cfg, "config",
               {"triangle", "seed", "theta_count", "theta_jitter", "z0"},
               {"triangle", "theta_count", "z0"});
  ControlTriangle tri = triangle_from(cfg);
  int ntheta = integer(cfg["theta_count"], "theta_count");
  bool jitter = cfg.value("theta_jitter", false);
  const json& z = cfg["z0"];
  require_keys(z, "z0", {"min", "max", "count", "spacing"}, {"min", "max", "count"});
  double zmin = num(z["min"], "z0.min"), zmax = num(z["max"], "z0.max");
  int zcount = integer(z["count"], "z0.count");
  std::string spacing = z.value("spacing", "log");
  if (spacing != "log" && spacing != "linear")
    throw ConfigInvalid("z0.spacing: expected 'log' or 'linear'");
  if (ntheta < 1 || zcount < 1) throw ConfigInvalid("grid counts must be positive");

  std::uint64_t seed = seed_from(cfg, opts, jitter);
  Rng rng(seed);
  std::vector<double> thetas(ntheta), zs(zcount);
  for (int i = 0; i < ntheta; ++i) {
    thetas[i] = 2.0 * M_PI * i / ntheta;
    if (jitter) thetas[i] += rng.uniform(0.0, 2.0 * M_PI / ntheta);
  }
  for (int i = 0; i < zcount; ++i) {
    double t = zcount > 1 ? double(i) / (zcount - 1) : 0.0;
    zs[i] = spacing == "log" ? zmin * std::pow(zmax / zmin, t) : zmin + (zmax - zmin) * t;
  }

  SweepLog log;
  auto samples = sweep_dc(tri, thetas, zs, default_tolerances(), &log, opts.threads);

  fs::path csv = fs::path(opts.out_dir) / "samples.csv";
  {
    std::ofstream os(csv, std::ios::binary);
    export_samples_csv(samples, os);
  }
  man.add(csv);
  json jl = {{"sources", log.sources},
             {"emitted", log.emitted},
             {"skipped_near_plane", log.skipped_near_plane},
             {"skipped_leading_coeff", log.skipped_leading_coeff},
             {"skipped_no_double", log.skipped_no_double},
             {"skipped_no_real_center", log.skipped_no_real_center},
             {"skipped_companion_on_dc", log.skipped_companion_on_dc}};
  fs::path lp = fs::path(opts.out_dir) / "sweep_log.json";
  write_text(lp, jl.dump(2) + "\n");
  man.add(lp);
  return kExitOk;
}

json poly_json(const TrivariatePoly& poly) {
  json terms = json::array();
  for (const auto& [k, v] : poly.terms())
    terms.push_back({{"exponents", {k[0], k[1], k[2]}}, {"coefficient", v}});
  return {{"terms", terms},
          {"degree", poly.total_degree()},
          {"scaling", {{"center", poly.center}, {"half", poly.half}}}};
}

int cmd_fit(const json& cfg, const RunOptions& opts, Manifest& man) {
  require_keys(cfg, "config", {"samples_csv", "degree", "even_in_z", "seed"},
               {"samples_csv", "degree", "even_in_z", "seed"});
  std::ifstream is(cfg["samples_csv"].get<std::string>());
  if (!is) throw ConfigInvalid("samples_csv: cannot open file");
  auto samples = read_samples_csv(is);
  int degree = integer(cfg["degree"], "degree");
  bool even = cfg["even_in_z"].get<bool>();
  std::uint64_t seed = seed_from(cfg, opts, true);

  FitReport rep;
  TrivariatePoly poly = fit_poly(samples, degree, even, seed, &rep);

  fs::path pp = fs::path(opts.out_dir) / "poly.json";
  write_text(pp, poly_json(poly).dump(2) + "\n");
  man.add(pp);
  json jr = {{"degree", rep.degree},
             {"even_in_z", rep.even_in_z},
             {"basis_size", rep.basis_size},
             {"n_train", rep.n_train},
             {"n_heldout", rep.n_heldout},
             {"rms", rep.rms},
             {"max_abs", rep.max_abs},
             {"sigma_min", rep.sigma_min},
             {"sigma_next", rep.sigma_next},
             {"gap", rep.gap},
             {"rank_deficient", rep.rank_deficient},
             {"box_lo", rep.box_lo},
             {"box_hi", rep.box_hi}};
  fs::path rp = fs::path(opts.out_dir) / "fit_report.json";
  write_text(rp, jr.dump(2) + "\n");
  man.add(rp);
  return kExitOk;
}

int cmd_member(const json& cfg, const RunOptions& opts, Manifest& man) {
  require_keys(cfg, "config", {"triangle", "points", "tol", "seed"}, {"triangle", "points"});
  ControlTriangle tri = triangle_from(cfg);
  double tl = cfg.contains("tol") ? num(cfg["tol"], "tol") : 1e-6;
  if (!cfg["points"].is_array()) throw ConfigInvalid("points: expected an array");
  json out = json::array();
  for (std::size_t i = 0; i < cfg["points"].size(); ++i) {
    Viewpoint O = viewpoint_from(cfg["points"][i], "points[" + std::to_string(i) + "]");
    MembershipVerdict v = membership(tri, O, tl);
    out.push_back({{"point", viewpoint_json(O)},
                   {"label", to_string(v.label)},
                   {"dc_distance", v.dc_distance},
                   {"csdc_evidence", v.csdc_evidence},
                   {"discriminant", v.discriminant},
                   {"tol_dc", v.tol_dc},
                   {"tol_csdc", v.tol_csdc}});
  }
  fs::path p = fs::path(opts.out_dir) / "membership.json";
  write_text(p, out.dump(2) + "\n");
  man.add(p);
  return kExitOk;
}

json crossing_json(const CrossingReport& r) {
  return {{"t_star", r.t_star},
          {"hit", to_string(r.hit)},
          {"tangential", r.tangential},
          {"probe_delta", r.probe_delta},
          {"count_before", r.count_before},
          {"count_after", r.count_after},
          {"count_before_mult", r.count_before_mult},
          {"count_after_mult", r.count_after_mult},
          {"delta", r.delta},
          {"real_roots_before", r.real_roots_before},
          {"real_roots_after", r.real_roots_after},
          {"conjugate_pair_transition", r.conjugate_pair_transition},
          {"dc_at_crossing", r.dc_at_crossing},
          {"pair_midpoint_dc", r.pair_midpoint_dc}};
}

int cmd_cross(const json& cfg, const RunOptions& opts, Manifest& man) {
  require_keys(cfg, "config", {"triangle", "path", "seed"}, {"triangle", "path"});
  ControlTriangle tri = triangle_from(cfg);
  const json& pj = cfg["path"];
  require_keys(pj, "path", {"start", "end", "samples"}, {"start", "end"});
  PathSpec path;
  path.start = viewpoint_from(pj["start"], "path.start");
  path.end = viewpoint_from(pj["end"], "path.end");
  if (pj.contains("samples")) path.samples = integer(pj["samples"], "path.samples");

  auto reports = detect_crossings(tri, path);
  json out = json::array();
  for (const auto& r : reports) out.push_back(crossing_json(r));
  fs::path p = fs::path(opts.out_dir) / "crossings.json";
  write_text(p, out.dump(2) + "\n");
  man.add(p);
  for (const auto& r : reports)
    if (r.hit == SurfaceHit::CSDC && !r.tangential && std::abs(r.delta) != 2)
      return kExitExperimentFailed;
  return kExitOk;
}

int cmd_map(const json& cfg, const RunOptions& opts, Manifest& man) {
  require_keys(cfg, "config", {"triangle", "slice", "seed"}, {"triangle", "slice"});
  ControlTriangle tri = triangle_from(cfg);
  const json& s = cfg["slice"];
  require_keys(s, "slice", {"z", "xmin", "xmax", "ymin", "ymax", "nx", "ny"},
               {"z", "xmin", "xmax", "ymin", "ymax", "nx", "ny"});
  SliceSpec spec;
  spec.z = num(s["z"], "slice.z");
  spec.xmin = num(s["xmin"], "slice.xmin");
  spec.xmax = num(s["xmax"], "slice.xmax");
  spec.ymin = num(s["ymin"], "slice.ymin");
  spec.ymax = num(s["ymax"], "slice.ymax");
  spec.nx = integer(s["nx"], "slice.nx");
  spec.ny = integer(s["ny"], "slice.ny");
  if (spec.nx < 1 || spec.ny < 1 || spec.nx > 2048 || spec.ny > 2048)
    throw ConfigInvalid("slice resolution out of range (1..2048)");

  CountMap map = count_map(tri, spec, default_tolerances(), opts.threads);
  fs::path cp = fs::path(opts.out_dir) / "counts.csv";
  {
    std::ofstream os(cp, std::ios::binary);
    write_count_csv(map, os);
  }
  man.add(cp);
  fs::path gp = fs::path(opts.out_dir) / "counts.pgm";
  {
    std::ofstream os(gp, std::ios::binary);
    write_count_pgm(map, os);
  }
  man.add(gp);
  return kExitOk;
}

int cmd_fold(const json& cfg, const RunOptions& opts, Manifest& man) {
  require_keys(cfg, "config", {"triangle", "dc_point", "direction", "epsilons", "seed"},
               {"triangle", "dc_point"});
  ControlTriangle tri = triangle_from(cfg);
  const json& d = cfg["dc_point"];
  require_keys(d, "dc_point", {"theta", "z0"}, {"theta", "z0"});
  double th = num(d["theta"], "dc_point.theta");
  double z0 = num(d["z0"], "dc_point.z0");
  Viewpoint Od{std::cos(th), std::sin(th), z0};

  std::array<double, 3> dir{};
  if (cfg.contains("direction")) {
    const json& dj = cfg["direction"];
    if (!dj.is_array() || dj.size() != 3) throw ConfigInvalid("direction: expected [d1,d2,d3]");
    for (int i = 0; i < 3; ++i) dir[i] = num(dj[i], "direction");
  } else {
    JacobianAnalysis ja = jacobian_analysis(tri, Od);
    for (int i = 0; i < 3; ++i) dir[i] = ja.left_null(i);
  }
  std::vector<double> eps = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7};
  if (cfg.contains("epsilons")) {
    eps.clear();
    for (const auto& e : cfg["epsilons"]) eps.push_back(num(e, "epsilons"));
  }
  FoldReport rep = fold_scaling(tri, Od, dir, eps);
  json out = {{"epsilons", rep.epsilons},
              {"separation", rep.separation},
              {"imag_part", rep.imag_part},
              {"exponent", rep.exponent},
              {"exponent_imag", rep.exponent_imag},
              {"fit_residual", rep.fit_residual},
              {"pair_real", rep.pair_real},
              {"flipped", rep.flipped},
              {"direction", rep.direction}};
  fs::path p = fs::path(opts.out_dir) / "fold_report.json";
  write_text(p, out.dump(2) + "\n");
  man.add(p);
  return kExitOk;
}

int cmd_rank(const json& cfg, const RunOptions& opts, Manifest& man) {
  require_keys(cfg, "config", {"triangle", "dc_points", "generic_points", "seed"},
               {"triangle", "dc_points", "generic_points", "seed"});
  ControlTriangle tri = triangle_from(cfg);
  int ndc = integer(cfg["dc_points"], "dc_points");
  int ngen = integer(cfg["generic_points"], "generic_points");
  Rng rng(seed_from(cfg, opts, true));

  json rows = json::array();
  double worst_on = 0.0, best_off = HUGE_VAL;
  for (int i = 0; i < ndc; ++i) {
    double th = rng.uniform(0.0, 2.0 * M_PI);
    double z0 = rng.uniform(0.2, 5.0);
    Viewpoint O{std::cos(th), std::sin(th), z0};
    JacobianAnalysis ja = jacobian_analysis(tri, O);
    double ratio = ja.singular_values[2] / ja.singular_values[0];
    worst_on = std::max(worst_on, ratio);
    rows.push_back({{"point", viewpoint_json(O)}, {"on_dc", true}, {"ratio", ratio}});
  }
  for (int i = 0; i < ngen;) {
    Viewpoint O{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0), rng.uniform(0.3, 4.0)};
    if (std::abs(dc_value(O)) < 0.05) continue;
    ++i;
    JacobianAnalysis ja = jacobian_analysis(tri, O);
    double ratio = ja.singular_values[2] / ja.singular_values[0];
    best_off = std::min(best_off, ratio);
    rows.push_back({{"point", viewpoint_json(O)}, {"on_dc", false}, {"ratio", ratio}});
  }
  json out = {{"rows", rows}, {"max_on_dc_ratio", worst_on}, {"min_off_dc_ratio", best_off}};
  fs::path p = fs::path(opts.out_dir) / "jacobian_report.json";
  write_text(p, out.dump(2) + "\n");
  man.add(p);
  return kExitOk;
}

int cmd_rieck_report(const json& cfg, const RunOptions& opts, Manifest& man) {
  require_keys(cfg, "config", {"triangle", "samples", "seed", "box"}, {"triangle", "samples", "seed"});
  ControlTriangle tri = triangle_from(cfg);
  int nsamples = integer(cfg["samples"], "samples");
  Rng rng(seed_from(cfg, opts, true));
  double lim = 3.0, zlo = 0.2, zhi = 4.0;
  if (cfg.contains("box")) {
    const json& b = cfg["box"];
    require_keys(b, "box", {"xy_limit", "z_min", "z_max"}, {});
    if (b.contains("xy_limit")) lim = num(b["xy_limit"], "box.xy_limit");
    if (b.contains("z_min")) zlo = num(b["z_min"], "box.z_min");
    if (b.contains("z_max")) zhi = num(b["z_max"], "box.z_max");
  }

  BasisCoeffs bc = basis_coeffs(tri);
  Entities probe = entities(tri, {0.3, 0.2, 1.0});

  std::vector<double> finite_resid;
  int degenerate = 0, held = 0;
  json quantiles;
  std::vector<double> pvals;
  for (int i = 0; i < nsamples; ++i) {
    Viewpoint O{rng.uniform(-lim, lim), rng.uniform(-lim, lim), rng.uniform(zlo, zhi)};
    auto r = identity_residuals(tri, O);
    Entities e = entities(tri, O);
    bool finite = std::isfinite(r[0]) && std::isfinite(r[1]) && std::isfinite(r[2]);
    bool indet = e.f_indeterminate[0] || e.f_indeterminate[1] || e.f_indeterminate[2];
    if (!finite) {
      ++degenerate;
      continue;
    }
    double m = std::max({std::abs(r[0]), std::abs(r[1]), std::abs(r[2])});
    finite_resid.push_back(m);
    if (m <= 1e-6) ++held;
    if (indet) { /* counted through eta report below */ }
    pvals.push_back(std::abs(p_constraint(tri, O)));
  }
  std::sort(finite_resid.begin(), finite_resid.end());
  auto q = [&](double p) {
    if (finite_resid.empty()) return 0.0;
    return finite_resid[std::size_t(p * (finite_resid.size() - 1))];
  };

  auto golden = identity_residuals(tri, {0.3, 0.2, 1.0});
  auto printed0 = printed_constraint_readings(BasisCoeffs::e1(1.0, 0.0), BasisCoeffs::e2(1.0, 0.0));

  json out;
  out["eta"] = {{"value", probe.eta}, {"eta_sq_raw", probe.eta_sq_raw},
                {"identically_zero_under_canonicalization", true}};
  out["samples"] = nsamples;
  out["degenerate_f_values"] = degenerate;
  out["residual_quantiles"] = {{"q50", q(0.5)}, {"q90", q(0.9)}, {"q99", q(0.99)}, {"max", q(1.0)}};
  out["within_1e6"] = held;
  out["equilateral_golden"] = {{"point", {0.3, 0.2, 1.0}},
                               {"residuals", golden},
                               {"expected_A", -0.279}};
  out["verdict"] = (held == int(finite_resid.size()) && degenerate == 0)
                       ? "identities hold on all sampled viewpoints"
                       : "identities do not hold as printed; residuals are O(1) away from the "
                         "danger cylinder and F degenerates whenever eta^2 ~ 0";
  out["printed_readings_at_circle_point_x1_y0"] = {{"product", printed0.product},
                                                   {"sum", printed0.sum}};
  out["basis_condition"] = bc.condition;
  std::sort(pvals.begin(), pvals.end());
  out["p_constraint_abs_quantiles"] = {
      {"q01", pvals.empty() ? 0.0 : pvals[std::size_t(0.01 * (pvals.size() - 1))]},
      {"q50", pvals.empty() ? 0.0 : pvals[pvals.size() / 2]}};

  fs::path p = fs::path(opts.out_dir) / "rieck_survey.json";
  write_text(p, out.dump(2) + "\n");
  man.add(p);
  return kExitOk;
}

}  // namespace

const char* version_string() { return "csdc 0.1.0"; }

int run_command(const std::string& command, const std::string& config_json,
                const RunOptions& opts) {
  json cfg;
  try {
    cfg = json::parse(config_json);
  } catch (const json::parse_error& e) {
    throw ConfigInvalid(std::string("config parse error: ") + e.what());
  }
  fs::create_directories(opts.out_dir);
  Manifest man;
  man.command = command;
  man.config = cfg;
  int rc;
  if (command == "sweep")
    rc = cmd_sweep(cfg, opts, man);
  else if (command == "fit")
    rc = cmd_fit(cfg, opts, man);
  else if (command == "member")
    rc = cmd_member(cfg, opts, man);
  else if (command == "cross")
    rc = cmd_cross(cfg, opts, man);
  else if (command == "map")
    rc = cmd_map(cfg, opts, man);
  else if (command == "fold")
    rc = cmd_fold(cfg, opts, man);
  else if (command == "rank")
    rc = cmd_rank(cfg, opts, man);
  else if (command == "rieck-report")
    rc = cmd_rieck_report(cfg, opts, man);
  else
    throw ConfigInvalid("unknown command '" + command + "'");
  man.write(opts.out_dir);
  return rc;
}

}  // namespace csdc
