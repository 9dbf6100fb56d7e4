#include "lcft/quadrature.hpp"

#include <cmath>
#include <cstdlib>
#include <thread>

#include "lcft/rng.hpp"

namespace lcft {

void QuadratureSpec::validate() const {
  if (base_n < 8) throw std::invalid_argument("base_n must be >= 8");
  if (shell_levels < 4) throw std::invalid_argument("shell_levels must be >= 4");
  if (shell_angular < 8) throw std::invalid_argument("shell_angular must be >= 8");
  if (shell_radial < 1) throw std::invalid_argument("shell_radial must be >= 1");
}

QuadratureSpec QuadratureSpec::refined() const {
  QuadratureSpec q = *this;
  q.base_n *= 2;
  q.shell_levels += 1;
  q.shell_angular += q.shell_angular / 2;
  return q;
}

QuadratureSpec QuadratureSpec::coarsened() const {
  QuadratureSpec q = *this;
  q.base_n = std::max(8, q.base_n / 2);
  q.shell_levels = std::max(4, q.shell_levels - 1);
  q.shell_angular = std::max(8, q.shell_angular * 2 / 3);
  return q;
}

int worker_count() {
  if (const char* env = std::getenv("LCFT_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : (int)hw;
}

void parallel_for(size_t n, const std::function<void(size_t)>& fn) {
  int workers = worker_count();
  if (workers <= 1 || n < 2) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    size_t lo = w * chunk;
    size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

namespace {

template <typename T>
T pairwise_impl(std::span<const T> v) {
  if (v.size() == 0) return T{};
  if (v.size() == 1) return v[0];
  if (v.size() == 2) return v[0] + v[1];
  size_t half = v.size() / 2;
  return pairwise_impl(v.subspan(0, half)) + pairwise_impl(v.subspan(half));
}

// Gauss-Legendre nodes on [-1, 1]
struct GL {
  std::vector<double> x, w;
};

GL gauss_legendre(int n) {
  switch (n) {
    case 1:
      return {{0.0}, {2.0}};
    case 2:
      return {{-0.5773502691896257, 0.5773502691896257}, {1.0, 1.0}};
    case 3:
      return {{-0.7745966692414834, 0.0, 0.7745966692414834},
              {0.5555555555555556, 0.8888888888888888, 0.5555555555555556}};
    default:
      return {{-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
               0.8611363115940526},
              {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
               0.3478548451374538}};
  }
}

}  // namespace

double pairwise_sum(std::span<const double> v) { return pairwise_impl(v); }
cplx pairwise_sum(std::span<const cplx> v) { return pairwise_impl(v); }

std::vector<SourceNode> build_source_nodes(const ModelDomain& dom, const Form01& f,
                                           const QuadratureSpec& quad,
                                           const KernelParams* kp) {
  auto zdata = [&](const C2& z) {
    return kp ? kernel_zeta_data(dom, z, *kp) : ZetaData::at(dom, z);
  };
  std::vector<SourceNode> nodes;
  const int n = quad.base_n;
  if (f.support) {
    const SupportBox& box = *f.support;
    double w = (2.0 * box.R1 / n) * (2.0 * box.R1 / n) * (2.0 * box.R2 / n) *
               (2.0 * box.R2 / n);
    std::vector<C2> pts;
    for (int i1 = 0; i1 < n; ++i1)
      for (int j1 = 0; j1 < n; ++j1)
        for (int i2 = 0; i2 < n; ++i2)
          for (int j2 = 0; j2 < n; ++j2) {
            double x1 = box.R1 * (2.0 * (i1 + 0.5) / n - 1.0);
            double y1 = box.R1 * (2.0 * (j1 + 0.5) / n - 1.0);
            double x2 = box.R2 * (2.0 * (i2 + 0.5) / n - 1.0);
            double y2 = box.R2 * (2.0 * (j2 + 0.5) / n - 1.0);
            C2 z = box.center + cplx(x1, y1) * box.u1 + cplx(x2, y2) * box.u2;
            if (dom.rho(z) < -1e-12) pts.push_back(z);
          }
    nodes.resize(pts.size());
    parallel_for(pts.size(), [&](size_t i) {
      nodes[i].zd = zdata(pts[i]);
      nodes[i].f = f(pts[i]);
      nodes[i].w = w;
    });
    return nodes;
  }
  // global star-shaped grid z = t R(omega) omega with Hopf angular coordinates
  // and dyadic radial layers toward the boundary (the kernels vanish to high
  // order there, but the data may not)
  const int n_a = std::max(4, n / 2);
  const int n_ang = n;
  const int n_layers = 10;
  const int per_layer = std::max(2, n / 8);
  const double half_pi = 1.5707963267948966;
  const double two_pi = 6.283185307179586;
  struct Radial {
    double t, wt;
  };
  std::vector<Radial> radial;
  for (int k = 0; k < n_layers; ++k) {
    double hi = std::ldexp(1.0, -k);
    double lo = (k == n_layers - 1) ? 0.0 : 0.5 * hi;
    double t_lo = 1.0 - hi, t_hi = 1.0 - lo;
    for (int g = 0; g < per_layer; ++g)
      radial.push_back({t_lo + (t_hi - t_lo) * (g + 0.5) / per_layer,
                        (t_hi - t_lo) / per_layer});
  }
  std::vector<C2> pts;
  std::vector<double> wts;
  for (int ia = 0; ia < n_a; ++ia) {
    double alpha = half_pi * (ia + 0.5) / n_a;
    double ca = std::cos(alpha), sa = std::sin(alpha);
    double w_alpha = ca * sa * (half_pi / n_a);
    double R = dom.boundary_radius(ca, sa);
    for (int ib = 0; ib < n_ang; ++ib) {
      double beta = two_pi * (ib + 0.5) / n_ang;
      cplx e1 = ca * cplx(std::cos(beta), std::sin(beta));
      for (int ig = 0; ig < n_ang; ++ig) {
        double gamma = two_pi * (ig + 0.5) / n_ang;
        cplx e2 = sa * cplx(std::cos(gamma), std::sin(gamma));
        double w_ang = w_alpha * (two_pi / n_ang) * (two_pi / n_ang);
        for (const auto& r : radial) {
          C2 z = {r.t * R * e1, r.t * R * e2};
          if (dom.rho(z) >= -1e-12) continue;
          pts.push_back(z);
          wts.push_back(w_ang * r.wt * r.t * r.t * r.t * R * R * R * R);
        }
      }
    }
  }
  nodes.resize(pts.size());
  parallel_for(pts.size(), [&](size_t i) {
    nodes[i].zd = zdata(pts[i]);
    nodes[i].f = f(pts[i]);
    nodes[i].w = wts[i];
  });
  return nodes;
}

PreparedForm::PreparedForm(const ModelDomain& dom, const KernelParams& params, const Form01& f,
                           const QuadratureSpec& quad, const KernelNormalization& nrm)
    : dom_(dom), params_(params), form_(f), quad_(quad), nrm_(nrm) {
  quad.validate();
  nodes_ = build_source_nodes(dom, f, quad, &params_);
  coarse_nodes_ = build_source_nodes(dom, f, quad.coarsened(), &params_);
}

double PreparedForm::shell_cap(const C2& z) const {
  double dz = dom_.distance_to_boundary(z).delta;
  if (form_.support) {
    // the localized grid resolves the support at spacing ~ 2R/n; the shells
    // patch the kernel singularity over at least a few grid cells, and stay
    // clear of the finite-difference step used on top of the quadrature
    double R = std::max(form_.support->R1, form_.support->R2);
    double frac = std::max(0.3, 8.0 / quad_.base_n);
    return std::min(0.5 * dz, frac * R);
  }
  // global data: shell nodes are clipped to the domain and the integrand
  // vanishes to order N at the boundary, so the ball may cross it
  (void)dz;
  return 0.25 * dom_.diameter();
}

cplx PreparedForm::tk_on(const std::vector<SourceNode>& nodes, const QuadratureSpec& q,
                         const C2& z) const {
  double R0 = shell_cap(z);
  bool shells_active = R0 > 1e-12;
  if (form_.support && form_.support->distance(z) > R0) shells_active = false;

  std::vector<cplx> acc;
  acc.reserve(nodes.size() + 4096);
  double blend_a = 0.6 * R0, blend_b = 0.9 * R0;
  for (const auto& nd : nodes) {
    double r = norm(nd.zd.zeta - z);
    double outer = 1.0;
    if (shells_active) {
      if (r < 1e-14) continue;
      outer = 1.0 - smoothstep_down(r, blend_a, blend_b);
      if (outer == 0.0) continue;
    }
    K1Value k1 = kernel_K1(dom_, params_, z, nd.zd, nrm_);
    acc.push_back(outer * nd.w * pair_K1(nd.f[0], nd.f[1], k1));
  }
  cplx grid_part = pairwise_sum(std::span<const cplx>(acc));
  if (!shells_active) return grid_part;

  // shell system around z: dyadic radial intervals, Hopf angular product
  double dz = dom_.distance_to_boundary(z).delta;
  const double d1 = params_.chi_d1, d2 = params_.chi_d2;
  bool sigma_zero = dz - R0 >= d2;  // whole ball beyond the depth cutoff
  bool sigma_one = dz + R0 <= d1;   // whole ball on the inner depth plateau
  GL gl = gauss_legendre(q.shell_radial);
  int n_a = std::max(2, q.shell_angular / 2);
  int n_b = q.shell_angular;
  int n_g = q.shell_angular;
  Rng jit = Rng::substream(q.jitter_seed, "shell_jitter");
  std::vector<cplx> sacc;
  sacc.reserve((q.shell_levels + 1) * gl.x.size() * n_a * n_b * n_g);
  for (int lev = 0; lev <= q.shell_levels; ++lev) {
    double r_hi = R0 * std::ldexp(1.0, -lev);
    double r_lo = (lev == q.shell_levels) ? 0.0 : 0.5 * r_hi;
    double off_b = (q.jitter_seed ? jit.uniform() : 0.0);
    double off_g = (q.jitter_seed ? jit.uniform() : 0.0);
    for (size_t ir = 0; ir < gl.x.size(); ++ir) {
      double r = 0.5 * (r_lo + r_hi) + 0.5 * (r_hi - r_lo) * gl.x[ir];
      double wr = 0.5 * (r_hi - r_lo) * gl.w[ir];
      double win = smoothstep_down(r, blend_a, blend_b);
      if (win == 0.0) continue;
      for (int ia = 0; ia < n_a; ++ia) {
        double alpha = 1.5707963267948966 * (ia + 0.5) / n_a;
        double ca = std::cos(alpha), sa = std::sin(alpha);
        double wa = ca * sa * (1.5707963267948966 / n_a);
        for (int ib = 0; ib < n_b; ++ib) {
          double beta = 6.283185307179586 * (ib + 0.5 + off_b) / n_b;
          cplx e1 = ca * cplx(std::cos(beta), std::sin(beta));
          for (int ig = 0; ig < n_g; ++ig) {
            double gamma = 6.283185307179586 * (ig + 0.5 + off_g) / n_g;
            cplx e2 = sa * cplx(std::cos(gamma), std::sin(gamma));
            C2 zeta = {z[0] + r * e1, z[1] + r * e2};
            ZetaData zd;
            if (sigma_zero || sigma_one) {
              zd.zeta = zeta;
              zd.rho = dom_.rho(zeta);
              RhoDerivatives der = dom_.rho_derivatives(zeta, 2);
              zd.drho = der.grad;
              zd.hess_mixed = der.hess_mixed;
              zd.delta = sigma_zero ? (d2 + 1.0) : (0.5 * d1);
              zd.grad_delta = {0.0, 0.0};
            } else {
              zd = kernel_zeta_data(dom_, zeta, params_);
            }
            if (zd.rho >= -1e-14) continue;
            FormCoeffs fv = form_(zeta);
            K1Value k1 = kernel_K1(dom_, params_, z, zd, nrm_);
            double wt = wr * wa * (39.47841760435743 / (double(n_b) * n_g)); // (2 pi)^2
            sacc.push_back(win * wt * r * r * r * pair_K1(fv[0], fv[1], k1));
          }
        }
      }
    }
  }
  return grid_part + pairwise_sum(std::span<const cplx>(sacc));
}

std::array<cplx, 2> PreparedForm::pn_on(const std::vector<SourceNode>& nodes, const C2& z) const {
  std::vector<cplx> acc0, acc1;
  acc0.reserve(nodes.size());
  acc1.reserve(nodes.size());
  for (const auto& nd : nodes) {
    PNValue pn = kernel_PN(dom_, params_, z, nd.zd, nrm_);
    acc0.push_back(nd.w * pair_PN(nd.f[0], nd.f[1], pn, 0));
    acc1.push_back(nd.w * pair_PN(nd.f[0], nd.f[1], pn, 1));
  }
  return {pairwise_sum(std::span<const cplx>(acc0)), pairwise_sum(std::span<const cplx>(acc1))};
}

TKResult PreparedForm::apply_TK(const C2& z) const {
  if (dom_.rho(z) >= 0.0) throw std::domain_error("evaluation point outside domain");
  TKResult r;
  r.value = tk_on(nodes_, quad_, z);
  r.coarse = tk_on(coarse_nodes_, quad_.coarsened(), z);
  double scale = std::max(std::abs(r.value), std::abs(r.coarse));
  r.warn = scale > 1e-12 * form_.scale && std::abs(r.value - r.coarse) > 0.05 * scale;
  return r;
}

PNResult PreparedForm::apply_PN(const C2& z) const {
  if (dom_.rho(z) >= 0.0) throw std::domain_error("evaluation point outside domain");
  PNResult r;
  auto v = pn_on(nodes_, z);
  auto c = pn_on(coarse_nodes_, z);
  r.value = v;
  r.coarse = c;
  double scale = 0.0, diff = 0.0;
  for (int k = 0; k < 2; ++k) {
    scale = std::max({scale, std::abs(v[k]), std::abs(c[k])});
    diff = std::max(diff, std::abs(v[k] - c[k]));
  }
  r.warn = scale > 1e-12 * form_.scale && diff > 0.05 * scale;
  return r;
}

cplx PreparedForm::tk_value(const C2& z) const {
  if (dom_.rho(z) >= 0.0) throw std::domain_error("evaluation point outside domain");
  return tk_on(nodes_, quad_, z);
}

std::array<cplx, 2> PreparedForm::pn_value(const C2& z) const {
  if (dom_.rho(z) >= 0.0) throw std::domain_error("evaluation point outside domain");
  return pn_on(nodes_, z);
}

TKResult apply_TK(const ModelDomain& dom, const KernelParams& params, const Form01& f,
                  const C2& z, const QuadratureSpec& quad) {
  return PreparedForm(dom, params, f, quad).apply_TK(z);
}

PNResult apply_PN(const ModelDomain& dom, const KernelParams& params, const Form01& f,
                  const C2& z, const QuadratureSpec& quad) {
  return PreparedForm(dom, params, f, quad).apply_PN(z);
}

}  // namespace lcft
