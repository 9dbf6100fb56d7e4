// The acceptance suite: every criterion pinned to its stated tolerance, one
// pass/fail line per criterion.
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "lcft/bergman.hpp"
#include "lcft/dbar_operator.hpp"
#include "lcft/registry.hpp"
#include "lcft/rng.hpp"

namespace lcft {

namespace {

std::string cell(double v) { return format_g17(v); }

std::string out_dir_for_suite(const ExperimentConfig& cfg) { return cfg.output_dir; }

struct SuiteContext {
  ExperimentConfig cfg;
  std::string dir;
};

const std::vector<std::pair<int, int>>& model_exponents() {
  static const std::vector<std::pair<int, int>> doms = {{1, 1}, {1, 2}, {2, 2}};
  return doms;
}

// --- criterion 1: geometry suite -------------------------------------------

CriterionResult criterion_geometry(const SuiteContext& sc) {
  CriterionResult res{1, "geometry comparability and tau closed forms", true, ""};
  CsvWriter csv({"domain", "check", "lo", "hi", "spread", "pass"});
  for (auto [m1, m2] : model_exponents()) {
    ModelDomain dom(m1, m2);
    auto p2 = property2_range(dom, 100, 2024);
    auto p3 = property3_range(dom, 100, 2025);
    double c5 = property5_constant(dom, 100, 2026);
    auto eq = tau_equiv_range(dom, 100, 2027, 0.1);
    bool ok2 = p2.spread() <= 50.0;
    bool ok3 = p3.spread() <= 50.0;
    bool ok5 = c5 <= 10.0;
    bool okeq = eq.lo >= 0.25 && eq.hi <= 4.0;
    csv.add({dom.spec_string(), "property2", cell(p2.lo), cell(p2.hi), cell(p2.spread()),
             ok2 ? "1" : "0"});
    csv.add({dom.spec_string(), "property3", cell(p3.lo), cell(p3.hi), cell(p3.spread()),
             ok3 ? "1" : "0"});
    csv.add({dom.spec_string(), "property5", cell(c5), cell(c5), "1", ok5 ? "1" : "0"});
    csv.add({dom.spec_string(), "tau_equiv", cell(eq.lo), cell(eq.hi), cell(eq.spread()),
             okeq ? "1" : "0"});
    res.pass = res.pass && ok2 && ok3 && ok5 && okeq;
  }
  // closed forms: tangential tau on the ball and on E(1,2), relative 1e-4
  {
    ModelDomain ball(1, 1);
    double t = tau(ball, {cplx(0), cplx(0)}, {cplx(1), cplx(0)}, 0.01);
    bool ok = std::abs(t - 0.1) <= 1e-4 * 0.1;
    csv.add({"ellipsoid:1,1", "tau_sqrt_eps", cell(t), "0.1", cell(std::abs(t - 0.1) / 0.1),
             ok ? "1" : "0"});
    res.pass = res.pass && ok;
    ModelDomain e12(1, 2);
    double t2 = tau(e12, {cplx(0.9), cplx(0)}, {cplx(0), cplx(1)}, 0.01);
    double ref = std::pow(0.01, 0.25);
    bool ok2 = std::abs(t2 - ref) <= 1e-4 * ref;
    csv.add({"ellipsoid:1,2", "tau_eps_quarter", cell(t2), cell(ref),
             cell(std::abs(t2 - ref) / ref), ok2 ? "1" : "0"});
    res.pass = res.pass && ok2;
  }
  csv.write(sc.dir + "/criterion1_geometry.csv");
  res.detail = "spreads within 50, tau closed forms to 1e-4";
  return res;
}

// --- criterion 2: K0 calibration --------------------------------------------

CriterionResult criterion_k0(const SuiteContext& sc) {
  CriterionResult res{2, "K0 calibration margin on all model domains", true, ""};
  CsvWriter csv({"domain", "K0", "margin_rel", "sign_flipped", "pass"});
  std::string detail;
  for (auto [m1, m2] : model_exponents()) {
    ModelDomain dom(m1, m2);
    KernelParams p = KernelParams::defaults(dom);
    auto cal = calibrate_k0(dom, p, 10000, sc.cfg.seed);
    bool ok = cal.min_margin_rel >= 0.1;
    res.pass = res.pass && ok;
    csv.add({dom.spec_string(), cell(cal.K0), cell(cal.min_margin_rel),
             cal.sign_flipped ? "1" : "0", ok ? "1" : "0"});
    detail += dom.spec_string() + ": K0=" + cell(cal.K0) + " margin=" + cell(cal.min_margin_rel) +
              "  ";
  }
  csv.write(sc.dir + "/criterion2_k0.csv");
  res.detail = detail;
  return res;
}

// --- criterion 3: homotopy identity -----------------------------------------

CriterionResult criterion_homotopy(const SuiteContext& sc) {
  CriterionResult res{3, "homotopy identity residuals (2 forms x 10 points)", true, ""};
  ModelDomain ball(1, 1);
  KernelParams p = KernelParams::defaults(ball);
  p.N = 6;
  p.K0 = 4.0;
  QuadratureSpec quad;
  quad.base_n = 28;
  quad.shell_angular = 28;
  auto pts_all = ball.sample_interior(300, 777);
  std::vector<C2> pts;
  for (const auto& z : pts_all)
    if (ball.delta(z) >= 0.15 && pts.size() < 10) pts.push_back(z);
  std::vector<Form01> forms;
  forms.push_back(dbar_round_bump({cplx(0.25), cplx(0.15)}, 0.45));
  forms.push_back(coordinate_form(0));
  CsvWriter csv({"form", "level", "max_residual"});
  double worst_L = 0.0, worst_L1 = 0.0;
  for (size_t fi = 0; fi < forms.size(); ++fi) {
    for (int lev = 0; lev < 2; ++lev) {
      QuadratureSpec q = lev == 0 ? quad : quad.refined();
      PreparedForm pf(ball, p, forms[fi], q);
      std::vector<double> residuals(pts.size());
      parallel_for(pts.size(), [&](size_t i) {
        residuals[i] = homotopy_residual(pf, pts[i]).residual_rel;
      });
      double worst = 0.0;
      for (double r : residuals) worst = std::max(worst, r);
      (lev == 0 ? worst_L : worst_L1) = std::max(lev == 0 ? worst_L : worst_L1, worst);
      csv.add({fi == 0 ? "bump" : "dzbar1", lev == 0 ? "L" : "L+1", cell(worst)});
    }
  }
  csv.write(sc.dir + "/criterion3_homotopy.csv");
  res.pass = worst_L <= 0.05 && worst_L1 < worst_L;
  res.detail = "max residual L = " + cell(worst_L) + ", L+1 = " + cell(worst_L1);
  return res;
}

// --- criterion 4: kernel bounds ---------------------------------------------

CriterionResult criterion_kernel_bounds(const SuiteContext& sc) {
  CriterionResult res{4, "kernel shell bounds and denominator floor", true, ""};
  ModelDomain ball(1, 1);
  KernelParams p = KernelParams::defaults(ball);
  C2 z{cplx(0.9985), cplx(0)};
  auto rep = check_kernel_bounds(ball, p, z, 6, 200, sc.cfg.seed);
  CsvWriter csv({"level", "eps", "max_ratio", "max_ratio_weighted", "min_denominator"});
  for (const auto& r : rep.rows)
    csv.add({std::to_string(r.level), cell(r.eps), cell(r.max_ratio),
             cell(r.max_ratio_weighted), cell(r.min_denominator)});
  // recorded (not asserted): the spec example point at delta = 0.05
  auto rec = check_kernel_bounds(ball, p, {cplx(0.95), cplx(0)}, 6, 200, sc.cfg.seed ^ 1);
  for (const auto& r : rec.rows)
    csv.add({std::to_string(100 + r.level), cell(r.eps), cell(r.max_ratio),
             cell(r.max_ratio_weighted), cell(r.min_denominator)});
  csv.write(sc.dir + "/criterion4_kernel_bounds.csv");
  res.pass = rep.pass;
  res.detail =
      "spread = " + cell(rep.ratio_spread) + ", denominator floor = " + cell(rep.min_denominator);
  return res;
}

// --- criterion 5: dyadic integral lemmas -------------------------------------

CriterionResult criterion_dyadic(const SuiteContext& sc) {
  CriterionResult res{5, "dyadic integral lemmas with 1/alpha scaling", true, ""};
  ModelDomain ball(1, 1);
  // deep enough that every dyadic polydisc straddles the boundary layer
  C2 z{cplx(0.9998), cplx(0)};
  std::vector<EstimateReport> reps;
  for (double mu : {0.0, 0.5}) {
    auto r = dyadic_integral_check_mu(ball, z, mu, 3, 8, 0.1, 10);
    r.id += "_mu" + cell(mu);
    res.pass = res.pass && r.pass;
    reps.push_back(r);
  }
  std::vector<double> mean_ratio;
  for (double alpha : {0.25, 0.5, 1.0}) {
    auto r = dyadic_integral_check_alpha(ball, z, alpha, 3, 8, 0.1, 8);
    r.id += "_alpha" + cell(alpha);
    res.pass = res.pass && r.pass;
    // reach-normalized means isolate the 1/alpha dependence
    double m = 0.0;
    for (const auto& row : r.rows) m += row.q / r.rows.size();
    mean_ratio.push_back(m);
    reps.push_back(r);
  }
  for (double a : mean_ratio)
    for (double b : mean_ratio)
      if (a / b > 2.0) res.pass = false;
  report_csv(reps).write(sc.dir + "/criterion5_dyadic.csv");
  res.detail = "alpha-normalized means: " + cell(mean_ratio[0]) + ", " + cell(mean_ratio[1]) +
               ", " + cell(mean_ratio[2]);
  return res;
}

// --- criterion 6: Schur and gain suite ---------------------------------------

CriterionResult criterion_schur_gain(const SuiteContext& sc) {
  CriterionResult res{6, "Schur tests and concentration gain slopes", true, ""};
  ModelDomain ball(1, 1);
  KernelParams p = KernelParams::defaults(ball);
  p.N = 6;
  p.K0 = 4.0;
  std::vector<EstimateReport> reps;
  for (double gamma : {0.0, 1.0}) {
    auto rep = schur_test_kernel(ball, p, gamma, {0.1, 0.05, 0.025}, 10, 10, sc.cfg.seed);
    EstimateReport er;
    er.id = "schur_gamma" + cell(gamma);
    er.rows = rep.z_side.rows;
    for (const auto& r : rep.zeta_side.rows) er.rows.push_back(r);
    er.pass = rep.pass;
    er.spread = std::max(rep.z_side.spread, rep.zeta_side.spread);
    res.pass = res.pass && rep.pass;
    reps.push_back(er);
  }
  // designed negative control: a non-integrable kernel must fail
  KernelSampler bad = [](const C2& z, const C2& zeta) {
    double r2 = norm2(zeta - z);
    return r2 < 1e-24 ? 0.0 : 1.0 / (r2 * r2);
  };
  auto neg = schur_test(ball, bad, 1.0, {0.1}, 0.0, 8, 10, sc.cfg.seed);
  EstimateReport negr;
  negr.id = "schur_negative_control";
  negr.rows = neg.rows;
  negr.pass = !neg.pass; // the control is required to fail
  res.pass = res.pass && !neg.pass;
  reps.push_back(negr);
  // gain slopes at the paper exponents
  GainConfig gc;
  gc.norm_quad = NormQuad{4, 8, 0, 1, 8};
  std::vector<GainTuple> tuples = {{1, 0, 0}, {2, 0, 0}, {2, 1, 1}, {2, 1, 0.75}};
  auto gains = gain_suite(ball, p, tuples, gc, sc.cfg.seed);
  std::string slopes;
  for (auto& g : gains) {
    res.pass = res.pass && g.pass;
    slopes += g.id + ": " + cell(g.fitted_exponent) + "  ";
    reps.push_back(g);
  }
  report_csv(reps).write(sc.dir + "/criterion6_schur_gain.csv");
  write_text_file(sc.dir + "/criterion6_schur_gain.json",
                  report_json(reps, sc.cfg.hash(), sc.cfg.seed));
  res.detail = slopes;
  return res;
}

// --- criterion 7: Nevanlinna suite -------------------------------------------

CriterionResult criterion_nevanlinna(const SuiteContext& sc) {
  CriterionResult res{7, "Nevanlinna ratio spread over alpha", true, ""};
  std::vector<EstimateReport> reps;
  std::string detail;
  for (auto [m1, m2] : {std::pair{1, 1}, {1, 2}}) {
    ModelDomain dom(m1, m2);
    KernelParams p = KernelParams::defaults(dom);
    p.K0 = 4.0;
    NevanlinnaConfig nc;
    auto rep = nevanlinna_experiment(dom, p, nc, sc.cfg.seed);
    rep.id += "_" + dom.spec_string();
    res.pass = res.pass && rep.pass;
    detail += dom.spec_string() + " spread = " + cell(rep.spread) + "  ";
    reps.push_back(rep);
  }
  report_csv(reps).write(sc.dir + "/criterion7_nevanlinna.csv");
  res.detail = detail;
  return res;
}

// --- criterion 8: Bergman suite ----------------------------------------------

CriterionResult criterion_bergman(const SuiteContext& sc) {
  CriterionResult res{8, "Bergman moments, projector algebra, and slopes", true, ""};
  ModelDomain ball(1, 1);
  CsvWriter csv({"check", "value", "threshold", "pass"});
  // moment table against the Dirichlet closed form
  double worst_m = 0.0;
  for (double r : {0.0, 1.0, 2.0}) {
    WeightSpec w;
    w.r = r;
    for (int a = 0; a <= 6; ++a)
      for (int b = 0; a + b <= 6; ++b) {
        double q = monomial_moment(ball, w, a, b);
        double c = monomial_moment_closed_form(ball, r, a, b);
        worst_m = std::max(worst_m, std::abs(q - c) / c);
      }
  }
  bool ok_m = worst_m <= 1e-6;
  csv.add({"moments_rel_err", cell(worst_m), "1e-6", ok_m ? "1" : "0"});
  res.pass = res.pass && ok_m;
  // projector idempotence and self-adjointness
  WeightSpec w1;
  w1.r = 1.0;
  BergmanProjector proj(ball, w1, 12);
  ScalarField f = [](const C2& z) {
    return z[0] * z[0] + 2.0 * std::conj(z[1]) + cplx(std::norm(z[0])) * z[1];
  };
  ScalarField g = [](const C2& z) { return z[1] + std::conj(z[0]) * z[0]; };
  auto pf = proj.project(f);
  auto pg = proj.project(g);
  ScalarField pf_field = [pf](const C2& z) { return pf.eval(z); };
  ScalarField pg_field = [pg](const C2& z) { return pg.eval(z); };
  auto ppf = proj.project(pf_field);
  double idem = 0.0, scale = 0.0;
  for (const auto& [ab, c] : pf.coef) {
    cplx other = ppf.coef.count(ab) ? ppf.coef.at(ab) : cplx(0.0);
    idem = std::max(idem, std::abs(c - other));
    scale = std::max(scale, std::abs(c));
  }
  bool ok_idem = idem <= 1e-8 * (scale + 1.0);
  csv.add({"idempotence", cell(idem), "1e-8", ok_idem ? "1" : "0"});
  cplx ipa = proj.inner(pf_field, g);
  cplx ipb = proj.inner(f, pg_field);
  bool ok_adj = std::abs(ipa - ipb) <= 1e-8 * (std::abs(ipa) + std::abs(ipb) + 1.0);
  csv.add({"self_adjointness", cell(std::abs(ipa - ipb)), "1e-8", ok_adj ? "1" : "0"});
  res.pass = res.pass && ok_idem && ok_adj;
  // projection norm slopes
  std::vector<EstimateReport> reps;
  ProjectionSlopeConfig pc;
  pc.norm_quad = NormQuad{4, 8, 0, 1, 8};
  for (auto [pp, beta] : std::vector<std::pair<double, double>>{{2, 0}, {2, 1}, {4, 0}}) {
    auto rep = projection_norm_experiment(ball, w1, pp, beta, pc);
    res.pass = res.pass && rep.pass;
    csv.add({"slope_" + rep.id, cell(rep.fitted_exponent), "0.1", rep.pass ? "1" : "0"});
    reps.push_back(rep);
  }
  // Lipschitz stability at alpha = 1/m = 1/2
  auto lrep = lipschitz_projection_experiment(ball, w1, 0.5, 24, 10.0, sc.cfg.seed);
  res.pass = res.pass && lrep.pass;
  csv.add({"lipschitz_ratio", cell(lrep.constant), "10", lrep.pass ? "1" : "0"});
  reps.push_back(lrep);
  csv.write(sc.dir + "/criterion8_bergman.csv");
  write_text_file(sc.dir + "/criterion8_bergman.json",
                  report_json(reps, sc.cfg.hash(), sc.cfg.seed));
  res.detail = "moment err " + cell(worst_m) + ", idempotence " + cell(idem);
  return res;
}

// --- criterion 9: exponent calculator ----------------------------------------

CriterionResult criterion_exponents(const SuiteContext& sc) {
  CriterionResult res{9, "exact rational exponent calculus on a parameter grid", true, ""};
  int points = 0;
  CsvWriter csv({"m", "gamma", "gamma_prime", "p", "regime", "value"});
  for (int m : {2, 4, 6}) {
    for (int gn = 0; gn <= 5 && points < 160; ++gn) {
      Rational gamma(gn, 2);
      Rational critical = Rational(m) * (gamma + Rational(2)) + Rational(2);
      // BMO boundary is exact
      auto r = exponent_q(m, 2, critical, gamma, gamma);
      if (r.regime != EstimateRegime::bmo) res.pass = false;
      csv.add({std::to_string(m), gamma.str(), gamma.str(), critical.str(), "bmo", "0"});
      ++points;
      // 1/q -> 0 from below along p -> critical
      for (int k : {100, 1000}) {
        Rational pb = critical - Rational(1, k);
        auto rb = exponent_q(m, 2, pb, gamma, gamma);
        if (rb.regime != EstimateRegime::lq) res.pass = false;
        // exact identity: 1/q = 1/p - 1/critical
        Rational inv_q = Rational(1) / *rb.q;
        Rational expect = Rational(1) / pb - Rational(1) / critical;
        if (!(inv_q == expect)) res.pass = false;
        csv.add({std::to_string(m), gamma.str(), gamma.str(), pb.str(), "lq", rb.q->str()});
        ++points;
      }
      // Lipschitz regime at p = 2 critical: alpha = (1/m)(1 - 1/2)
      auto rl = exponent_q(m, 2, critical * Rational(2), gamma, gamma);
      if (rl.regime != EstimateRegime::lipschitz || !(*rl.alpha == Rational(1, 2 * m)))
        res.pass = false;
      csv.add({std::to_string(m), gamma.str(), gamma.str(), (critical * Rational(2)).str(),
               "lipschitz", rl.alpha->str()});
      ++points;
      // remark inequality for gamma' < gamma, exact rational comparison
      for (int dn = 1; dn <= 3; ++dn) {
        Rational gp = gamma - Rational(dn, 4 * m);
        if (gp < Rational(-1)) continue;
        auto rr = exponent_q(m, 2, Rational(1), gamma, gp);
        if (!rr.case1_bound || !(*rr.case1_bound > rr.critical_p)) res.pass = false;
        csv.add({std::to_string(m), gamma.str(), gp.str(), "1", "bound",
                 rr.case1_bound ? rr.case1_bound->str() : "inf"});
        ++points;
      }
    }
  }
  csv.write(sc.dir + "/criterion9_exponents.csv");
  res.detail = std::to_string(points) + " grid points checked exactly";
  res.pass = res.pass && points >= 100;
  return res;
}

// --- criterion 10: reproducibility -------------------------------------------

CriterionResult criterion_reproducibility(const SuiteContext& sc) {
  CriterionResult res{10, "byte-identical reruns", true, ""};
  // rerun a subset that exercises every source of nondeterminism (seeded
  // sampling, parallel reductions, quadrature node ordering) twice
  auto run_into = [&](const std::string& sub) {
    ExperimentConfig c = sc.cfg;
    c.output_dir = sc.dir + "/" + sub;
    std::vector<std::string> files;
    for (const char* name :
         {"geom-tau", "kernel-bounds", "estimate-dyadic", "bergman-moments"}) {
      c.experiment = name;
      run_experiment(c);
    }
    // one quadrature-backed experiment with threads engaged
    c.experiment = "estimate-nevanlinna";
    c.params["t"] = "0.1";
    run_experiment(c);
    return c.output_dir;
  };
  std::string a = run_into("repro_a");
  std::string b = run_into("repro_b");
  bool same = true;
  for (const char* f :
       {"geom_tau.csv", "kernel_bounds.csv", "estimate_dyadic.csv", "bergman_moments.csv",
        "estimate_nevanlinna.csv"}) {
    std::string ta = read_text_file(a + "/" + f);
    std::string tb = read_text_file(b + "/" + f);
    if (ta != tb) {
      same = false;
      res.detail += std::string(f) + " differs  ";
    }
  }
  res.pass = same;
  if (same) res.detail = "all rerun outputs byte-identical";
  return res;
}

}  // namespace

std::vector<CriterionResult> run_acceptance_suite(const ExperimentConfig& cfg) {
  SuiteContext sc{cfg, out_dir_for_suite(cfg)};
  std::filesystem::create_directories(sc.dir);
  write_manifest(sc.dir + "/acceptance.manifest.json", cfg.hash(), cfg.seed, false);
  std::vector<CriterionResult> results;
  using Fn = CriterionResult (*)(const SuiteContext&);
  const Fn criteria[] = {criterion_geometry,   criterion_k0,         criterion_homotopy,
                         criterion_kernel_bounds, criterion_dyadic,  criterion_schur_gain,
                         criterion_nevanlinna, criterion_bergman,    criterion_exponents,
                         criterion_reproducibility};
  for (Fn fn : criteria) {
    CriterionResult r = fn(sc);
    std::printf("%s  criterion %d: %s%s%s\n", r.pass ? "PASS" : "FAIL", r.index,
                r.name.c_str(), r.detail.empty() ? "" : " -- ", r.detail.c_str());
    std::fflush(stdout);
    results.push_back(r);
  }
  CsvWriter csv({"criterion", "name", "pass", "detail"});
  for (const auto& r : results)
    csv.add({std::to_string(r.index), r.name, r.pass ? "1" : "0", r.detail});
  csv.write(sc.dir + "/acceptance.csv");
  write_manifest(sc.dir + "/acceptance.manifest.json", cfg.hash(), cfg.seed, true);
  return results;
}

}  // namespace lcft
