#include "lcft/registry.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>

#include "lcft/bergman.hpp"
#include "lcft/dbar_operator.hpp"
#include "lcft/rng.hpp"

namespace lcft {

namespace {

std::string out_dir(const ExperimentConfig& cfg) { return cfg.output_dir; }

std::string cell(double v) { return format_g17(v); }

struct Emitter {
  std::string dir;
  uint64_t config_hash;
  uint64_t seed;
  std::string manifest_path;

  Emitter(const ExperimentConfig& cfg, const std::string& name)
      : dir(out_dir(cfg)), config_hash(cfg.hash()), seed(cfg.seed) {
    std::filesystem::create_directories(dir);
    manifest_path = dir + "/" + name + ".manifest.json";
    write_manifest(manifest_path, config_hash, seed, false);
  }
  void finish() { write_manifest(manifest_path, config_hash, seed, true); }
};

C2 parse_point(const std::string& s, const C2& fallback) {
  if (s.empty()) return fallback;
  double a = 0, b = 0, c = 0, d = 0;
  if (std::sscanf(s.c_str(), "%lf,%lf,%lf,%lf", &a, &b, &c, &d) != 4)
    throw std::invalid_argument("point must be 're1,im1,re2,im2'");
  return {cplx(a, b), cplx(c, d)};
}

// ---------------------------------------------------------------------------
// individual experiments
// ---------------------------------------------------------------------------

ExperimentOutcome run_geom_tau(const ExperimentConfig& cfg) {
  Emitter em(cfg, "geom_tau");
  ModelDomain dom = parse_domain_spec(cfg.domain);
  C2 zeta = parse_point(cfg.param_or("zeta", ""), {cplx(0.9), cplx(0)});
  C2 v = parse_point(cfg.param_or("v", ""), {cplx(0), cplx(1)});
  v = normalized(v);
  CsvWriter csv({"experiment_id", "t_or_level", "num", "den", "ratio", "q", "pass"});
  std::string js = "[";
  bool first = true;
  for (double eps = cfg.param_num("eps_min", 1e-4); eps <= cfg.param_num("eps_max", 1e-1) * 1.0000001;
       eps *= 2.0) {
    double t = tau(dom, zeta, v, eps);
    csv.add({"geom_tau", cell(eps), cell(t), "1", cell(t), "0", "1"});
    if (!first) js += ",";
    first = false;
    js += "\n  {\"zeta\": [" + cell(zeta[0].real()) + "," + cell(zeta[0].imag()) + "," +
          cell(zeta[1].real()) + "," + cell(zeta[1].imag()) + "], \"eps\": " + cell(eps) +
          ", \"v\": [" + cell(v[0].real()) + "," + cell(v[0].imag()) + "," + cell(v[1].real()) +
          "," + cell(v[1].imag()) + "], \"tau\": " + cell(t) + "}";
  }
  js += "\n]\n";
  csv.write(em.dir + "/geom_tau.csv");
  write_text_file(em.dir + "/geom_tau.json", js);
  em.finish();
  return {0, true, "tau sweep written"};
}

ExperimentOutcome run_geom_basis(const ExperimentConfig& cfg) {
  Emitter em(cfg, "geom_basis");
  ModelDomain dom = parse_domain_spec(cfg.domain);
  C2 zeta = parse_point(cfg.param_or("zeta", ""), {cplx(0.9), cplx(0)});
  double eps = cfg.param_num("eps", 0.01);
  ExtremalFrame f = extremal_basis(dom, zeta, eps);
  std::string js = "{\n";
  js += "  \"eps\": " + cell(eps) + ",\n";
  js += "  \"v1\": [" + cell(f.v1[0].real()) + "," + cell(f.v1[0].imag()) + "," +
        cell(f.v1[1].real()) + "," + cell(f.v1[1].imag()) + "],\n";
  js += "  \"v2\": [" + cell(f.v2[0].real()) + "," + cell(f.v2[0].imag()) + "," +
        cell(f.v2[1].real()) + "," + cell(f.v2[1].imag()) + "],\n";
  js += "  \"tau1\": " + cell(f.tau1) + ",\n  \"tau2\": " + cell(f.tau2) + "\n}\n";
  write_text_file(em.dir + "/geom_basis.json", js);
  em.finish();
  return {0, true, "frame written"};
}

ExperimentOutcome run_geom_pdist(const ExperimentConfig& cfg) {
  Emitter em(cfg, "geom_pdist");
  ModelDomain dom = parse_domain_spec(cfg.domain);
  C2 zeta = parse_point(cfg.param_or("zeta", ""), {cplx(0.5), cplx(0)});
  C2 z = parse_point(cfg.param_or("z", ""), {cplx(0.5), cplx(0.2)});
  auto d = pseudo_distance(dom, zeta, z, cfg.c0);
  std::string js = std::string("{\"c0\": ") + cell(cfg.c0) + ", \"d\": " +
                   (d ? cell(*d) : std::string("\">=1\"")) + "}\n";
  write_text_file(em.dir + "/geom_pdist.json", js);
  em.finish();
  return {0, true, d ? "d = " + cell(*d) : "z outside P_1(zeta)"};
}

ExperimentOutcome run_kernel_check_k0(const ExperimentConfig& cfg) {
  Emitter em(cfg, "kernel_check_k0");
  ModelDomain dom = parse_domain_spec(cfg.domain);
  KernelParams p = cfg.kernel_params(dom);
  auto cal = calibrate_k0(dom, p, (int)cfg.param_num("samples", 10000), cfg.seed);
  CsvWriter csv({"experiment_id", "t_or_level", "num", "den", "ratio", "q", "pass"});
  csv.add({"kernel_check_k0", cell(cal.K0), cell(cal.min_margin_rel), "1",
           cell(cal.min_margin_rel), "0", cal.min_margin_rel >= 0.1 ? "1" : "0"});
  csv.write(em.dir + "/kernel_check_k0.csv");
  em.finish();
  bool pass = cal.min_margin_rel >= 0.1;
  std::string sign = cal.sign == SupportSign::z_minus_zeta ? "z-zeta" : "zeta-z";
  return {pass ? 0 : 1, pass,
          "K0 = " + cell(cal.K0) + ", margin = " + cell(cal.min_margin_rel) + ", sign " + sign +
              (cal.sign_flipped ? " (flipped)" : "")};
}

ExperimentOutcome run_kernel_bounds(const ExperimentConfig& cfg) {
  Emitter em(cfg, "kernel_bounds");
  ModelDomain dom = parse_domain_spec(cfg.domain);
  KernelParams p = cfg.kernel_params(dom);
  C2 z = parse_point(cfg.param_or("z", ""), {cplx(0.9985), cplx(0)});
  int levels = (int)cfg.param_num("levels", 6);
  auto rep = check_kernel_bounds(dom, p, z, levels, (int)cfg.param_num("samples", 200), cfg.seed);
  CsvWriter csv({"level", "eps", "max_ratio", "min_denominator"});
  for (const auto& r : rep.rows)
    csv.add({std::to_string(r.level), cell(r.eps), cell(r.max_ratio), cell(r.min_denominator)});
  csv.write(em.dir + "/kernel_bounds.csv");
  em.finish();
  return {rep.pass ? 0 : 1, rep.pass,
          "spread = " + cell(rep.ratio_spread) + ", floor = " + cell(rep.min_denominator)};
}

ExperimentOutcome run_solve_homotopy(const ExperimentConfig& cfg) {
  Emitter em(cfg, "solve_homotopy");
  ModelDomain dom = parse_domain_spec(cfg.domain);
  KernelParams p = cfg.kernel_params(dom);
  QuadratureSpec quad = cfg.quadrature();
  Form01 f;
  std::string kind = cfg.param_or("form", "bump");
  if (kind == "bump")
    f = dbar_round_bump(parse_point(cfg.param_or("center", ""), {cplx(0.25), cplx(0.15)}),
                        cfg.param_num("radius", 0.45));
  else if (kind == "dzbar1")
    f = coordinate_form(0);
  else if (kind == "dzbar2")
    f = coordinate_form(1);
  else
    throw std::invalid_argument("unknown form kind: " + kind);
  PreparedForm pf(dom, p, f, quad);
  auto pts_all = dom.sample_interior(300, cfg.seed ^ 0x777ULL);
  std::vector<C2> pts;
  double dmin = cfg.param_num("delta_min", 0.15);
  for (const auto& z : pts_all)
    if (dom.delta(z) >= dmin && pts.size() < (size_t)cfg.param_num("points", 10)) pts.push_back(z);
  auto rows = solve_and_report(pf, pts);
  CsvWriter csv({"z1_re", "z1_im", "z2_re", "z2_im", "u_re", "u_im", "residual", "warn"});
  double worst = 0.0;
  for (const auto& r : rows) {
    csv.add({cell(r.z[0].real()), cell(r.z[0].imag()), cell(r.z[1].real()), cell(r.z[1].imag()),
             cell(r.u.real()), cell(r.u.imag()), cell(r.residual), r.warn ? "1" : "0"});
    worst = std::max(worst, r.residual);
  }
  csv.write(em.dir + "/solve_homotopy.csv");
  em.finish();
  bool pass = worst <= 0.05;
  return {pass ? 0 : 1, pass, "max residual = " + cell(worst)};
}

ExperimentOutcome run_solve_field(const ExperimentConfig& cfg) {
  Emitter em(cfg, "solve_field");
  ModelDomain dom = parse_domain_spec(cfg.domain);
  KernelParams p = cfg.kernel_params(dom);
  QuadratureSpec quad = cfg.quadrature();
  Form01 f = dbar_round_bump(parse_point(cfg.param_or("center", ""), {cplx(0.25), cplx(0.15)}),
                             cfg.param_num("radius", 0.45));
  PreparedForm pf(dom, p, f, quad);
  double z2c = cfg.param_num("slice_z2", 0.0);
  int n = (int)cfg.param_num("grid", 21);
  CsvWriter csv({"x", "y", "u_re", "u_im"});
  std::vector<std::array<double, 4>> rows((size_t)n * n, {0, 0, 0, 0});
  std::vector<size_t> live;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double x = -1.0 + 2.0 * i / (n - 1);
      double y = -1.0 + 2.0 * j / (n - 1);
      C2 z{cplx(x, y), cplx(z2c)};
      if (dom.rho(z) < -1e-3) {
        rows[i * n + j] = {x, y, 0, 0};
        live.push_back((size_t)i * n + j);
      } else {
        rows[i * n + j] = {x, y, std::nan(""), std::nan("")};
      }
    }
  parallel_for(live.size(), [&](size_t k) {
    auto& r = rows[live[k]];
    cplx u = pf.tk_value({cplx(r[0], r[1]), cplx(z2c)});
    r[2] = u.real();
    r[3] = u.imag();
  });
  for (const auto& r : rows)
    if (!std::isnan(r[2])) csv.add({cell(r[0]), cell(r[1]), cell(r[2]), cell(r[3])});
  csv.write(em.dir + "/solve_field.csv");
  em.finish();
  return {0, true, "slice written"};
}

ExperimentOutcome run_estimate_lp_gain(const ExperimentConfig& cfg) {
  Emitter em(cfg, "estimate_lp_gain");
  ModelDomain dom = parse_domain_spec(cfg.domain);
  KernelParams kp = cfg.kernel_params(dom);
  GainConfig gc;
  gc.norm_quad = cfg.norm_quad();
  gc.quad_base = std::max(8, cfg.quad_base_n);
  double tmin = cfg.param_num("tmin", 0.0125), tmax = cfg.param_num("tmax", 0.1);
  gc.t_grid.clear();
  for (double t = tmax; t >= tmin * 0.9999; t /= 2.0) gc.t_grid.push_back(t);
  auto rep = gain_experiment(dom, kp, cfg.param_num("p", 2.0), cfg.param_num("gamma", 0.0),
                             cfg.param_num("gammap", 0.0), gc, cfg.seed);
  report_csv({rep}).write(em.dir + "/estimate_lp_gain.csv");
  write_text_file(em.dir + "/estimate_lp_gain.json", report_json({rep}, cfg.hash(), cfg.seed));
  em.finish();
  return {rep.pass ? 0 : 1, rep.pass, "slope = " + cell(rep.fitted_exponent)};
}

ExperimentOutcome run_estimate_schur(const ExperimentConfig& cfg) {
  Emitter em(cfg, "estimate_schur");
  ModelDomain dom = parse_domain_spec(cfg.domain);
  KernelParams kp = cfg.kernel_params(dom);
  auto rep = schur_test_kernel(dom, kp, cfg.param_num("gamma", 0.0), {0.1, 0.05, 0.025},
                               (int)cfg.param_num("points", 10), 10, cfg.seed);
  EstimateReport er;
  er.id = "schur_gamma" + cfg.param_or("gamma", "0");
  er.rows = rep.z_side.rows;
  for (const auto& r : rep.zeta_side.rows) er.rows.push_back(r);
  er.pass = rep.pass;
  er.constant = rep.z_side.spread;
  report_csv({er}).write(em.dir + "/estimate_schur.csv");
  em.finish();
  return {rep.pass ? 0 : 1, rep.pass, "mu0 = " + cell(rep.mu0)};
}

ExperimentOutcome run_estimate_nevanlinna(const ExperimentConfig& cfg) {
  Emitter em(cfg, "estimate_nevanlinna");
  ModelDomain dom = parse_domain_spec(cfg.domain);
  KernelParams kp = cfg.kernel_params(dom);
  NevanlinnaConfig nc;
  nc.norm_quad = cfg.norm_quad();
  nc.t = cfg.param_num("t", 0.05);
  auto rep = nevanlinna_experiment(dom, kp, nc, cfg.seed);
  report_csv({rep}).write(em.dir + "/estimate_nevanlinna.csv");
  write_text_file(em.dir + "/estimate_nevanlinna.json",
                  report_json({rep}, cfg.hash(), cfg.seed));
  em.finish();
  return {rep.pass ? 0 : 1, rep.pass, "spread = " + cell(rep.spread)};
}

ExperimentOutcome run_estimate_dyadic(const ExperimentConfig& cfg) {
  Emitter em(cfg, "estimate_dyadic");
  ModelDomain dom = parse_domain_spec(cfg.domain);
  C2 z = parse_point(cfg.param_or("z", ""), {cplx(0.9998), cplx(0)});
  std::vector<EstimateReport> reps;
  bool pass = true;
  for (double mu : {0.0, 0.5}) {
    auto r = dyadic_integral_check_mu(dom, z, mu, 3, 8, cfg.c0, 10);
    r.id += "_mu" + cell(mu);
    pass = pass && r.pass;
    reps.push_back(r);
  }
  for (double alpha : {0.25, 0.5, 1.0}) {
    auto r = dyadic_integral_check_alpha(dom, z, alpha, 3, 8, cfg.c0, 8);
    r.id += "_alpha" + cell(alpha);
    pass = pass && r.pass;
    reps.push_back(r);
  }
  report_csv(reps).write(em.dir + "/estimate_dyadic.csv");
  write_text_file(em.dir + "/estimate_dyadic.json", report_json(reps, cfg.hash(), cfg.seed));
  em.finish();
  return {pass ? 0 : 1, pass, "dyadic lemmas checked"};
}

ExperimentOutcome run_estimate_lipschitz(const ExperimentConfig& cfg) {
  Emitter em(cfg, "estimate_lipschitz");
  ModelDomain dom = parse_domain_spec(cfg.domain);
  KernelParams kp = cfg.kernel_params(dom);
  QuadratureSpec quad = cfg.quadrature();
  // T_K of a smooth global form at p = infinity: Lipschitz 1/m per the
  // exponent calculus
  Form01 f = concentration_family(dom, cfg.param_num("t", 0.1),
                                  FamilyKind::tangential_oscillation, kp.c0);
  PreparedForm pf(dom, kp, f, quad);
  ScalarField u = [&pf](const C2& z) { return pf.tk_value(z); };
  double alpha = 1.0 / dom.type();
  double est_coarse = lipschitz_estimate(dom, u, alpha, 40, 1e-2, 0.5, cfg.seed);
  double est = lipschitz_estimate(dom, u, alpha, 40, 1e-3, 0.5, cfg.seed);
  CsvWriter csv({"alpha", "bin_lo", "estimate"});
  csv.add({cell(alpha), "1e-2", cell(est_coarse)});
  csv.add({cell(alpha), "1e-3", cell(est)});
  csv.write(em.dir + "/estimate_lipschitz.csv");
  em.finish();
  bool pass = std::isfinite(est) && est <= 2.0 * est_coarse + 1e-12;
  return {pass ? 0 : 1, pass, "estimate = " + cell(est)};
}

ExperimentOutcome run_estimate_bmo(const ExperimentConfig& cfg) {
  Emitter em(cfg, "estimate_bmo");
  ModelDomain dom = parse_domain_spec(cfg.domain);
  KernelParams kp = cfg.kernel_params(dom);
  QuadratureSpec quad = cfg.quadrature();
  Form01 f = concentration_family(dom, cfg.param_num("t", 0.1),
                                  FamilyKind::tangential_oscillation, kp.c0);
  PreparedForm pf(dom, kp, f, quad);
  ScalarField u = [&pf](const C2& z) { return pf.tk_value(z); };
  double b1 = bmo_estimate(dom, u, 24, 120, cfg.seed, 1e-2);
  double b2 = bmo_estimate(dom, u, 24, 120, cfg.seed, 1e-3);
  CsvWriter csv({"min_depth", "estimate"});
  csv.add({"1e-2", cell(b1)});
  csv.add({"1e-3", cell(b2)});
  csv.write(em.dir + "/estimate_bmo.csv");
  em.finish();
  bool pass = std::isfinite(b2) && b2 <= 2.0 * b1 + 1e-12;
  return {pass ? 0 : 1, pass, "bmo estimate = " + cell(b2)};
}

ExperimentOutcome run_bergman_moments(const ExperimentConfig& cfg) {
  Emitter em(cfg, "bergman_moments");
  ModelDomain dom = parse_domain_spec(cfg.domain);
  WeightSpec w;
  w.r = cfg.param_num("r", 1.0);
  int D = (int)cfg.param_num("D", 8);
  CsvWriter csv({"a", "b", "moment", "closed_form", "rel_err"});
  double worst = 0.0;
  for (int a = 0; a <= D; ++a)
    for (int b = 0; a + b <= D; ++b) {
      double q = monomial_moment(dom, w, a, b);
      double c = monomial_moment_closed_form(dom, w.r, a, b);
      double rel = std::abs(q - c) / c;
      worst = std::max(worst, rel);
      csv.add({std::to_string(a), std::to_string(b), cell(q), cell(c), cell(rel)});
    }
  csv.write(em.dir + "/bergman_moments.csv");
  em.finish();
  bool pass = worst <= 1e-6;
  return {pass ? 0 : 1, pass, "worst rel err = " + cell(worst)};
}

ExperimentOutcome run_bergman_project_norm(const ExperimentConfig& cfg) {
  Emitter em(cfg, "bergman_project_norm");
  ModelDomain dom = parse_domain_spec(cfg.domain);
  WeightSpec w;
  w.r = cfg.param_num("r", 1.0);
  ProjectionSlopeConfig pc;
  pc.norm_quad = cfg.norm_quad();
  auto rep = projection_norm_experiment(dom, w, cfg.param_num("p", 2.0),
                                        cfg.param_num("beta", 0.0), pc);
  report_csv({rep}).write(em.dir + "/bergman_project_norm.csv");
  write_text_file(em.dir + "/bergman_project_norm.json",
                  report_json({rep}, cfg.hash(), cfg.seed));
  em.finish();
  return {rep.pass ? 0 : 1, rep.pass, "slope = " + cell(rep.fitted_exponent)};
}

ExperimentOutcome run_bergman_lipschitz(const ExperimentConfig& cfg) {
  Emitter em(cfg, "bergman_lipschitz");
  ModelDomain dom = parse_domain_spec(cfg.domain);
  WeightSpec w;
  w.r = cfg.param_num("r", 1.0);
  auto rep = lipschitz_projection_experiment(dom, w, cfg.param_num("alpha", 1.0 / dom.type()),
                                             (int)cfg.param_num("D", 24), 10.0, cfg.seed);
  report_csv({rep}).write(em.dir + "/bergman_lipschitz.csv");
  em.finish();
  return {rep.pass ? 0 : 1, rep.pass, "max ratio = " + cell(rep.constant)};
}

ExperimentOutcome run_acceptance(const ExperimentConfig& cfg) {
  auto results = run_acceptance_suite(cfg);
  bool all = true;
  for (const auto& r : results) all = all && r.pass;
  return {all ? 0 : 1, all, all ? "all criteria passed" : "some criteria failed"};
}

using Runner = std::function<ExperimentOutcome(const ExperimentConfig&)>;

const std::vector<std::pair<std::string, Runner>>& runners() {
  static const std::vector<std::pair<std::string, Runner>> table = {
      {"geom-tau", run_geom_tau},
      {"geom-basis", run_geom_basis},
      {"geom-pdist", run_geom_pdist},
      {"kernel-check-k0", run_kernel_check_k0},
      {"kernel-bounds", run_kernel_bounds},
      {"solve-homotopy", run_solve_homotopy},
      {"solve-field", run_solve_field},
      {"estimate-lp-gain", run_estimate_lp_gain},
      {"estimate-schur", run_estimate_schur},
      {"estimate-nevanlinna", run_estimate_nevanlinna},
      {"estimate-dyadic", run_estimate_dyadic},
      {"estimate-lipschitz", run_estimate_lipschitz},
      {"estimate-bmo", run_estimate_bmo},
      {"bergman-moments", run_bergman_moments},
      {"bergman-project-norm", run_bergman_project_norm},
      {"bergman-lipschitz", run_bergman_lipschitz},
      {"acceptance-suite", run_acceptance},
  };
  return table;
}

}  // namespace

std::vector<std::string> experiment_names() {
  std::vector<std::string> names;
  for (const auto& [n, _] : runners()) names.push_back(n);
  return names;
}

ExperimentOutcome run_experiment(const ExperimentConfig& cfg) {
  for (const auto& [name, fn] : runners())
    if (name == cfg.experiment) return fn(cfg);
  std::string listing = "unknown experiment '" + cfg.experiment + "'; available:";
  for (const auto& [name, _] : runners()) listing += " " + name;
  return {2, false, listing};
}

}  // namespace lcft
