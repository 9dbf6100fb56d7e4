#include "lcft/geometry.hpp"

#include <cmath>

#include "lcft/rng.hpp"

namespace lcft {

double tau(const DirectionalJet& jet, double eps, int n_angles, double rel_tol) {
  if (eps <= 0.0) throw std::invalid_argument("eps must be positive");
  // bracket: M(c) is nondecreasing (convexity), M(0) = 0
  double hi = std::pow(eps, 1.0 / jet.max_order);
  double lo = 0.0;
  int guard = 0;
  while (jet.max_on_circle(hi, n_angles) < eps) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 200) return hi; // eps beyond any rho variation at this scale
  }
  while (hi - lo > rel_tol * hi) {
    double mid = 0.5 * (lo + hi);
    (jet.max_on_circle(mid, n_angles) < eps ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double tau(const ModelDomain& dom, const C2& zeta, const C2& unit_v, double eps,
           int n_angles, double rel_tol) {
  if (std::abs(norm(unit_v) - 1.0) > 1e-9)
    throw std::invalid_argument("direction must be unit");
  return tau(dom.directional_jet(zeta, unit_v), eps, n_angles, rel_tol);
}

ExtremalFrame extremal_basis(const ModelDomain& dom, const C2& zeta, double eps) {
  RhoDerivatives d = dom.rho_derivatives(zeta, 1);
  double g = norm(d.grad);
  if (g < 1e-12) throw std::domain_error("degenerate gradient");
  ExtremalFrame f;
  f.base = zeta;
  f.eps = eps;
  // the real gradient sits in the line spanned by conj(drho)
  f.v1 = normalized(conj(d.grad));
  f.v2 = {-std::conj(f.v1[1]), std::conj(f.v1[0])};
  // phase normalization: first nonzero component real positive
  for (int i = 0; i < 2; ++i) {
    if (std::abs(f.v2[i]) > 1e-9) {
      cplx ph = std::abs(f.v2[i]) / f.v2[i];
      f.v2 = {ph * f.v2[0], ph * f.v2[1]};
      break;
    }
  }
  f.tau1 = tau(dom, zeta, f.v1, eps);
  f.tau2 = tau(dom, zeta, f.v2, eps);
  return f;
}

TauNormalScale tau_normal_scale(const ModelDomain& dom, const C2& zeta, double eps,
                                double lo, double hi) {
  ExtremalFrame f = extremal_basis(dom, zeta, eps);
  TauNormalScale out{f.tau1, f.tau1 / eps};
  if (out.ratio < lo || out.ratio > hi)
    throw std::runtime_error("normal tau/eps ratio outside expected bounds");
  return out;
}

std::array<cplx, 2> frame_coords(const ExtremalFrame& f, const C2& z) {
  C2 w = z - f.base;
  return {hdot(w, f.v1), hdot(w, f.v2)};
}

bool polydisc_contains(const Polydisc& pd, const C2& z) {
  auto lam = frame_coords(pd.frame, z);
  double b = pd.c0 * pd.A;
  return std::abs(lam[0]) <= b * pd.frame.tau1 && std::abs(lam[1]) <= b * pd.frame.tau2;
}

std::optional<double> pseudo_distance(const ModelDomain& dom, const C2& zeta, const C2& z,
                                      double c0) {
  // the frame directions do not depend on eps, only the radii do
  ExtremalFrame f = extremal_basis(dom, zeta, 1e-8);
  auto lam = frame_coords(f, z);
  DirectionalJet j1 = dom.directional_jet(zeta, f.v1);
  DirectionalJet j2 = dom.directional_jet(zeta, f.v2);
  auto contained = [&](double eps) {
    return std::abs(lam[0]) <= c0 * tau(j1, eps) && std::abs(lam[1]) <= c0 * tau(j2, eps);
  };
  if (std::abs(lam[0]) < 1e-14 && std::abs(lam[1]) < 1e-14) return 1e-8;
  if (!contained(1.0)) return std::nullopt;
  if (contained(1e-8)) return 1e-8;
  double llo = std::log(1e-8), lhi = 0.0;
  while (lhi - llo > 1e-4) {
    double mid = 0.5 * (llo + lhi);
    (contained(std::exp(mid)) ? lhi : llo) = mid;
  }
  return std::exp(0.5 * (llo + lhi));
}

double k_weight(const ModelDomain& dom, const C2& z, const C2& unit_v) {
  double del = dom.delta(z);
  return del / tau(dom, z, unit_v, del);
}

double k_norm_value(const ModelDomain& dom, const std::array<cplx, 2>& f, const C2& z,
                    int n_random, uint64_t seed) {
  if (std::abs(f[0]) == 0.0 && std::abs(f[1]) == 0.0) return 0.0;
  double del = dom.delta(z);
  ExtremalFrame fr = extremal_basis(dom, z, del);
  auto pair_over_k = [&](const C2& v, double tau_v) {
    cplx p = f[0] * std::conj(v[0]) + f[1] * std::conj(v[1]);
    return std::abs(p) * tau_v / del;
  };
  double best = std::max(pair_over_k(fr.v1, fr.tau1), pair_over_k(fr.v2, fr.tau2));
  Rng rng = Rng::substream(seed, "k_norm");
  for (int i = 0; i < n_random; ++i) {
    C2 v = rng.unit_c2();
    best = std::max(best, pair_over_k(v, tau(dom, z, v, del)));
  }
  return best;
}

std::vector<C2> sample_near_boundary(const ModelDomain& dom, int n, uint64_t seed, double dmin,
                                     double dmax) {
  Rng rng = Rng::substream(seed, "near_boundary");
  std::vector<C2> out;
  out.reserve(n);
  while ((int)out.size() < n) {
    C2 w;
    for (int i = 0; i < 2; ++i) w[i] = rng.gaussian_cplx();
    if (norm(w) < 1e-9) continue;
    w = normalized(w);
    double R = dom.boundary_radius(std::abs(w[0]), std::abs(w[1]));
    C2 p = {R * w[0], R * w[1]};
    double d = rng.log_uniform(dmin, dmax);
    // walk inward along the true boundary normal at p
    RhoDerivatives der = dom.rho_derivatives(p, 1);
    C2 nu = normalized(conj(der.grad));
    C2 z = p - d * nu;
    if (dom.rho(z) >= 0.0) continue;
    double dl = dom.delta(z);
    if (dl < dmin * 0.5 || dl > dmax * 2.0) continue;
    out.push_back(z);
  }
  return out;
}

RatioRange property2_range(const ModelDomain& dom, int n_samples, uint64_t seed) {
  Rng rng = Rng::substream(seed, "property2");
  auto pts = sample_near_boundary(dom, n_samples, seed, 1e-3, 5e-2);
  RatioRange rr;
  for (const auto& zeta : pts) {
    C2 nu = rng.unit_c2();
    double eps = rng.log_uniform(1e-4, 1e-1);
    DirectionalJet jet = dom.directional_jet(zeta, nu);
    double t = tau(jet, eps);
    double s = 0.0;
    double tp = 1.0;
    for (int order = 1; order <= jet.max_order; ++order) {
      tp *= t;
      double cs = 0.0;
      for (int a = 0; a <= order; ++a) {
        int b = order - a;
        if (a <= jet.max_order && b <= jet.max_order) cs += std::abs(jet.c[a][b]);
      }
      s += cs * tp;
    }
    rr.absorb(s / eps);
  }
  return rr;
}

RatioRange property3_range(const ModelDomain& dom, int n_samples, uint64_t seed) {
  Rng rng = Rng::substream(seed, "property3");
  auto pts = sample_near_boundary(dom, n_samples, seed ^ 0xabcdULL, 1e-3, 5e-2);
  RatioRange rr;
  for (const auto& zeta : pts) {
    double eps = rng.log_uniform(1e-4, 1e-1);
    ExtremalFrame fr = extremal_basis(dom, zeta, eps);
    cplx a1 = rng.gaussian_cplx(), a2 = rng.gaussian_cplx();
    double nn = std::sqrt(std::norm(a1) + std::norm(a2));
    a1 /= nn;
    a2 /= nn;
    C2 gamma = a1 * fr.v1 + a2 * fr.v2;
    double t = tau(dom, zeta, normalized(gamma), eps);
    double lhs = 1.0 / t;
    double rhs = std::abs(a1) / fr.tau1 + std::abs(a2) / fr.tau2;
    rr.absorb(lhs / rhs);
  }
  return rr;
}

double property5_constant(const ModelDomain& dom, int n_samples, uint64_t seed) {
  Rng rng = Rng::substream(seed, "property5");
  auto pts = sample_near_boundary(dom, n_samples, seed ^ 0x77ULL, 1e-3, 5e-2);
  double m = dom.type();
  double C = 0.0;
  for (const auto& zeta : pts) {
    C2 v = rng.unit_c2();
    double eps = rng.log_uniform(1e-4, 2e-2);
    DirectionalJet jet = dom.directional_jet(zeta, v);
    double t1 = tau(jet, eps);
    for (double lam : {2.0, 4.0, 8.0}) {
      double t2 = tau(jet, lam * eps);
      C = std::max(C, std::pow(lam, 1.0 / m) * t1 / t2);
      C = std::max(C, t2 / (lam * t1));
    }
  }
  return C;
}

RatioRange tau_equiv_range(const ModelDomain& dom, int n_samples, uint64_t seed, double c0) {
  Rng rng = Rng::substream(seed, "tau_equiv");
  auto pts = sample_near_boundary(dom, n_samples, seed ^ 0x99ULL, 2e-3, 5e-2);
  RatioRange rr;
  for (const auto& z : pts) {
    double eps = rng.log_uniform(1e-4, 1e-2);
    ExtremalFrame fz = extremal_basis(dom, z, eps);
    // random point of P_eps(z)
    double u1 = rng.uniform(-1.0, 1.0), w1 = rng.uniform(-1.0, 1.0);
    double u2 = rng.uniform(-1.0, 1.0), w2 = rng.uniform(-1.0, 1.0);
    C2 zeta = z + (c0 * fz.tau1 * cplx(u1, w1)) * fz.v1 + (c0 * fz.tau2 * cplx(u2, w2)) * fz.v2;
    if (dom.rho(zeta) >= -1e-12) continue;
    ExtremalFrame fzeta;
    try {
      fzeta = extremal_basis(dom, zeta, eps);
    } catch (const std::domain_error&) {
      continue;
    }
    rr.absorb(fzeta.tau1 / fz.tau1);
    rr.absorb(fzeta.tau2 / fz.tau2);
  }
  return rr;
}

double engulfing_c2(const ModelDomain& dom, int n_samples, uint64_t seed, double c0) {
  auto pts = sample_near_boundary(dom, n_samples, seed ^ 0x1234ULL, 2e-3, 5e-2);
  Rng rng = Rng::substream(seed, "engulfing");
  double c_fit = 1e300;
  for (const auto& zeta : pts) {
    double eps = rng.log_uniform(1e-4, 1e-2);
    ExtremalFrame fr = extremal_basis(dom, zeta, eps);
    Polydisc twice{fr, c0, 2.0};
    // largest dyadic-bisected c such that the boundary samples of P_{c eps}
    // stay inside 2 P_eps
    auto inside = [&](double c) {
      ExtremalFrame fc = extremal_basis(dom, zeta, c * eps);
      for (int k = 0; k < 16; ++k) {
        double th = 0.39269908169872414 * k;
        C2 zv = zeta + (c0 * fc.tau1 * cplx(std::cos(th), std::sin(th))) * fc.v1 +
                (c0 * fc.tau2 * cplx(std::cos(1.3 * th), std::sin(1.3 * th))) * fc.v2;
        if (!polydisc_contains(twice, zv)) return false;
      }
      return true;
    };
    double lo = 0.0, hi = 1.0;
    if (inside(1.0)) {
      while (inside(hi) && hi < 64.0) hi *= 2.0;
      lo = hi / 2.0;
    }
    for (int it = 0; it < 20; ++it) {
      double mid = 0.5 * (lo + hi);
      (inside(mid) ? lo : hi) = mid;
    }
    c_fit = std::min(c_fit, lo);
  }
  return c_fit;
}

}  // namespace lcft
