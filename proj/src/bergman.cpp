#include "lcft/bergman.hpp"

#include <cmath>

#include "lcft/estimates.hpp"
#include "lcft/quadrature.hpp"
#include "lcft/rng.hpp"

namespace lcft {

namespace {

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// tanh-sinh nodes on (0, 1); handles endpoint algebraic singularities
struct TanhSinh {
  std::vector<double> x, w;
  explicit TanhSinh(int level) {
    double h = 1.0 / (1 << (level - 2));
    const double half_pi = 1.5707963267948966;
    for (int k = -(6 << (level - 2)); k <= (6 << (level - 2)); ++k) {
      double t = k * h;
      double s = half_pi * std::sinh(t);
      double xx = 0.5 * (1.0 + std::tanh(s));
      double ww = 0.5 * h * half_pi * std::cosh(t) / (std::cosh(s) * std::cosh(s));
      if (xx <= 1e-17 || xx >= 1.0 - 1e-17 || ww < 1e-300) continue;
      x.push_back(xx);
      w.push_back(ww);
    }
  }
};

}  // namespace

void WeightSpec::validate() const {
  if (r < 0.0) throw std::invalid_argument("weight exponent must be non-negative");
  if (!radial) throw std::runtime_error("diagonal method requires radial weight");
}

double weight_value(const ModelDomain& dom, const WeightSpec& w, double w1, double w2) {
  double base;
  if (w.chi_pow) {
    base = (*w.chi_pow)(std::sqrt(w1), std::sqrt(w2));
  } else {
    base = 1.0 - ipow(w1, dom.m1()) - ipow(w2, dom.m2());
  }
  if (base < 0.0) base = 0.0;
  double v = w.r == 0.0 ? 1.0 : std::pow(base, w.r);
  if (w.eta) v *= (*w.eta)(std::sqrt(w1), std::sqrt(w2));
  return v;
}

double monomial_moment(const ModelDomain& dom, const WeightSpec& w, int a, int b, int level) {
  w.validate();
  TanhSinh outer(level), inner(level);
  double total = 0.0;
  for (size_t i = 0; i < outer.x.size(); ++i) {
    double w1 = outer.x[i];
    double W2 = std::pow(std::max(0.0, 1.0 - ipow(w1, dom.m1())), 1.0 / dom.m2());
    if (W2 <= 0.0) continue;
    double inner_sum = 0.0;
    for (size_t j = 0; j < inner.x.size(); ++j) {
      double w2 = W2 * inner.x[j];
      inner_sum += W2 * inner.w[j] * ipow(w2, b) * weight_value(dom, w, w1, w2);
    }
    total += outer.w[i] * ipow(w1, a) * inner_sum;
  }
  return 9.869604401089358 * total; // pi^2
}

double monomial_moment_closed_form(const ModelDomain& dom, double r, int a, int b) {
  double ap = (a + 1.0) / dom.m1();
  double bp = (b + 1.0) / dom.m2();
  double lg = std::lgamma(ap) + std::lgamma(bp) + std::lgamma(r + 1.0) -
              std::lgamma(ap + bp + r + 1.0);
  return 9.869604401089358 / (dom.m1() * dom.m2()) * std::exp(lg);
}

MomentTable::MomentTable(const ModelDomain& dom, const WeightSpec& w, int degree)
    : degree_(degree) {
  w.validate();
  TanhSinh outer(6), inner(6);
  for (size_t i = 0; i < outer.x.size(); ++i) {
    double w1 = outer.x[i];
    double W2 = std::pow(std::max(0.0, 1.0 - ipow(w1, dom.m1())), 1.0 / dom.m2());
    if (W2 <= 0.0) continue;
    for (size_t j = 0; j < inner.x.size(); ++j) {
      double w2 = W2 * inner.x[j];
      double wt = 0.25 * outer.w[i] * W2 * inner.w[j] * weight_value(dom, w, w1, w2);
      if (wt <= 0.0) continue;
      radial_.push_back({w1, w2, wt});
    }
  }
  grid_moments_.assign((degree + 1) * (degree + 1), 0.0);
  for (const auto& nd : radial_) {
    double p1 = 1.0;
    for (int a = 0; a <= degree; ++a) {
      double p2 = 1.0;
      for (int b = 0; b <= degree; ++b) {
        grid_moments_[a * (degree + 1) + b] += nd.wt * p1 * p2;
        p2 *= nd.w2;
      }
      p1 *= nd.w1;
    }
  }
  const double four_pi2 = 39.478417604357434;
  for (auto& m : grid_moments_) m *= four_pi2;
  refined_moments_.assign((degree + 1) * (degree + 1), 0.0);
  for (int a = 0; a <= degree; ++a)
    for (int b = 0; b <= degree; ++b)
      refined_moments_[a * (degree + 1) + b] = monomial_moment(dom, w, a, b);
}

double MomentTable::moment(int a, int b) const {
  if (a < 0 || b < 0 || a > degree_ || b > degree_)
    throw std::out_of_range("moment index beyond table degree");
  return grid_moments_[a * (degree_ + 1) + b];
}

double MomentTable::refined(int a, int b) const {
  if (a < 0 || b < 0 || a > degree_ || b > degree_)
    throw std::out_of_range("moment index beyond table degree");
  return refined_moments_[a * (degree_ + 1) + b];
}

cplx MonomialExpansion::eval(const C2& z) const {
  cplx total = 0.0;
  for (const auto& [ab, c] : coef) {
    cplx p = c;
    for (int i = 0; i < ab.first; ++i) p *= z[0];
    for (int i = 0; i < ab.second; ++i) p *= z[1];
    total += p;
  }
  return total;
}

BergmanProjector::BergmanProjector(const ModelDomain& dom, const WeightSpec& w, int degree,
                                   int n_theta)
    : dom_(dom), w_(w), degree_(degree),
      n_theta_(n_theta > 0 ? n_theta : 2 * degree + 16), table_(dom, w, degree) {}

MonomialExpansion BergmanProjector::project(const ScalarField& f) const {
  const int D = degree_, n = n_theta_;
  const double two_pi = 6.283185307179586;
  // accumulate <f, z^(a,b)> over the product grid; theta sums are exact for
  // frequency differences below n
  std::vector<cplx> acc((D + 1) * (D + 1), 0.0);
  const auto& radial = table_.radial_nodes();
  std::vector<std::vector<cplx>> partial(radial.size(),
                                         std::vector<cplx>((D + 1) * (D + 1), 0.0));
  parallel_for(radial.size(), [&](size_t ri) {
    const auto& nd = radial[ri];
    double r1 = std::sqrt(nd.w1), r2 = std::sqrt(nd.w2);
    std::vector<cplx> s_a(D + 1);
    std::vector<cplx> column(D + 1);
    auto& out = partial[ri];
    for (int i2 = 0; i2 < n; ++i2) {
      double th2 = two_pi * (i2 + 0.5) / n;
      cplx z2 = r2 * cplx(std::cos(th2), std::sin(th2));
      std::fill(s_a.begin(), s_a.end(), cplx(0.0));
      for (int i1 = 0; i1 < n; ++i1) {
        double th1 = two_pi * (i1 + 0.5) / n;
        cplx z1 = r1 * cplx(std::cos(th1), std::sin(th1));
        cplx fv = f({z1, z2});
        if (fv == cplx(0.0)) continue;
        cplx e1 = cplx(std::cos(th1), -std::sin(th1)); // e^{-i th1}
        cplx ph = 1.0;
        for (int a = 0; a <= D; ++a) {
          s_a[a] += fv * ph;
          ph *= e1;
        }
      }
      cplx e2 = cplx(std::cos(th2), -std::sin(th2));
      cplx ph2 = 1.0;
      for (int b = 0; b <= D; ++b) {
        column[b] = ph2;
        ph2 *= e2;
      }
      for (int a = 0; a <= D; ++a)
        for (int b = 0; b <= D; ++b) out[a * (D + 1) + b] += s_a[a] * column[b];
    }
    // radial factors r1^a r2^b and the node mass
    double p1 = 1.0;
    for (int a = 0; a <= D; ++a) {
      double p2 = 1.0;
      for (int b = 0; b <= D; ++b) {
        out[a * (D + 1) + b] *= nd.wt * p1 * p2;
        p2 *= r2;
      }
      p1 *= r1;
    }
  });
  for (const auto& part : partial)
    for (size_t i = 0; i < acc.size(); ++i) acc[i] += part[i];
  double theta_mass = (two_pi / n) * (two_pi / n);
  MonomialExpansion out;
  out.degree = D;
  double norm_total = 0.0, norm_tail = 0.0;
  for (int a = 0; a <= D; ++a)
    for (int b = 0; b <= D; ++b) {
      cplx ip = acc[a * (D + 1) + b] * theta_mass;
      double c_ab = table_.moment(a, b);
      cplx coef = ip / c_ab;
      if (std::abs(coef) > 0.0) out.coef[{a, b}] = coef;
      double mass = std::norm(coef) * c_ab;
      norm_total += mass;
      if (a + b >= D - 1) norm_tail += mass;
    }
  out.tail_warning = norm_total > 0.0 && norm_tail > 1e-2 * norm_total;
  return out;
}

cplx BergmanProjector::inner(const ScalarField& f, const ScalarField& g) const {
  const int n = n_theta_;
  const double two_pi = 6.283185307179586;
  const auto& radial = table_.radial_nodes();
  std::vector<cplx> vals(radial.size(), 0.0);
  parallel_for(radial.size(), [&](size_t ri) {
    const auto& nd = radial[ri];
    double r1 = std::sqrt(nd.w1), r2 = std::sqrt(nd.w2);
    cplx s = 0.0;
    for (int i1 = 0; i1 < n; ++i1) {
      double th1 = two_pi * (i1 + 0.5) / n;
      cplx z1 = r1 * cplx(std::cos(th1), std::sin(th1));
      for (int i2 = 0; i2 < n; ++i2) {
        double th2 = two_pi * (i2 + 0.5) / n;
        cplx z2 = r2 * cplx(std::cos(th2), std::sin(th2));
        C2 z{z1, z2};
        s += f(z) * std::conj(g(z));
      }
    }
    vals[ri] = s * nd.wt;
  });
  cplx total = pairwise_sum(std::span<const cplx>(vals));
  return total * (two_pi / n) * (two_pi / n);
}

double BergmanProjector::norm2_omega(const ScalarField& f) const {
  return inner(f, f).real();
}

// ---------------------------------------------------------------------------
// experiments
// ---------------------------------------------------------------------------

namespace {

// holomorphic boundary peak at the reference anchor: (t / (t + w))^s with
// w = 2 <drho(a), a - z> / |drho(a)| (Re w > 0 inside by convexity)
ScalarField boundary_peak(const ModelDomain& dom, double t, int s) {
  C2 a = dom.reference_boundary_point();
  RhoDerivatives der = dom.rho_derivatives(a, 1);
  double g = norm(der.grad);
  C2 grad = der.grad;
  return [a, grad, g, t, s](const C2& z) -> cplx {
    cplx w = 2.0 * (grad[0] * (a[0] - z[0]) + grad[1] * (a[1] - z[1])) / g;
    cplx base = t / (t + w);
    cplx p = 1.0;
    for (int i = 0; i < s; ++i) p *= base;
    return p;
  };
}

}  // namespace

EstimateReport projection_norm_experiment(const ModelDomain& dom, const WeightSpec& w, double p,
                                          double beta, const ProjectionSlopeConfig& cfg) {
  EstimateReport rep;
  rep.id = "bergman_norm_p" + std::to_string(p) + "_b" + std::to_string(beta);
  BergmanProjector proj(dom, w, cfg.degree);
  bool any_tail = false;
  for (double t : cfg.t_grid) {
    ScalarField h = boundary_peak(dom, t, cfg.peak_power);
    ScalarField hbar = [h](const C2& z) { return std::conj(h(z)); };
    double best = 0.0;
    std::string best_tag;
    for (int member = 0; member < 2; ++member) {
      const ScalarField& f = member == 0 ? h : hbar;
      MonomialExpansion pf = proj.project(f);
      any_tail = any_tail || pf.tail_warning;
      ScalarField pf_field = [pf](const C2& z) { return pf.eval(z); };
      double den = weighted_lp_norm(dom, magnitude(f), {p, beta}, cfg.norm_quad);
      double num = weighted_lp_norm(dom, magnitude(pf_field), {p, beta}, cfg.norm_quad);
      double ratio = num / den;
      if (ratio > best) {
        best = ratio;
        best_tag = member == 0 ? "holomorphic" : "antiholomorphic";
      }
    }
    ReportRow row;
    row.level = t;
    row.ratio = best;
    row.num = best;
    row.den = 1.0;
    row.tag = best_tag;
    rep.rows.push_back(row);
  }
  rep.fitted_exponent = fitted_slope(rep.rows);
  double lo = 1e300, hi = 0.0;
  for (const auto& r : rep.rows) {
    lo = std::min(lo, r.ratio);
    hi = std::max(hi, r.ratio);
  }
  rep.constant = hi;
  rep.spread = hi / lo;
  rep.pass = std::abs(rep.fitted_exponent) <= cfg.slope_band;
  if (any_tail) rep.note = "increase D";
  return rep;
}

EstimateReport lipschitz_projection_experiment(const ModelDomain& dom, const WeightSpec& w,
                                               double alpha, int degree, double ratio_limit,
                                               uint64_t seed) {
  if (!(alpha > 0.0 && alpha <= 1.0 / dom.type() + 1e-12))
    throw std::invalid_argument("alpha must lie in (0, 1/m]");
  EstimateReport rep;
  rep.id = "bergman_lipschitz_a" + std::to_string(alpha);
  BergmanProjector proj(dom, w, degree);
  for (double sigma : {0.05, 0.02}) {
    ScalarField u = [alpha, sigma](const C2& z) {
      double x = z[0].real();
      return cplx(std::pow(x * x + sigma * sigma, alpha / 2.0));
    };
    MonomialExpansion pu = proj.project(u);
    ScalarField pu_field = [pu](const C2& z) { return pu.eval(z); };
    double lu = lipschitz_estimate(dom, u, alpha, 120, 1e-3, 0.5, seed);
    double lpu = lipschitz_estimate(dom, pu_field, alpha, 120, 1e-3, 0.5, seed);
    ReportRow row;
    row.level = sigma;
    row.num = lpu;
    row.den = lu;
    row.ratio = lpu / lu;
    rep.rows.push_back(row);
  }
  // holomorphic polynomials are fixed points
  ScalarField poly = [](const C2& z) { return z[0] * z[0] + 3.0 * z[1]; };
  MonomialExpansion pp = proj.project(poly);
  ScalarField pp_field = [pp](const C2& z) { return pp.eval(z); };
  double lp_ratio = lipschitz_estimate(dom, pp_field, alpha, 80, 1e-2, 0.5, seed) /
                    lipschitz_estimate(dom, poly, alpha, 80, 1e-2, 0.5, seed);
  ReportRow prow;
  prow.level = 0.0;
  prow.ratio = lp_ratio;
  prow.tag = "polynomial";
  rep.rows.push_back(prow);
  double hi = 0.0;
  for (const auto& r : rep.rows) hi = std::max(hi, r.ratio);
  rep.constant = hi;
  rep.pass = hi <= ratio_limit;
  return rep;
}

}  // namespace lcft
