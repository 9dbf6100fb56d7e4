#include "lcft/norms.hpp"

#include <cmath>

#include "lcft/kernel.hpp"
#include "lcft/quadrature.hpp"
#include "lcft/rng.hpp"

namespace lcft {

void WeightedLpSpec::validate() const {
  if (!(p >= 1.0)) throw std::invalid_argument("p must be >= 1");
  if (!(gamma > -1.0)) throw std::invalid_argument("gamma must exceed -1");
}

NormQuad NormQuad::refined() const {
  NormQuad q = *this;
  q.n_alpha += q.n_alpha / 2;
  q.n_ang += q.n_ang / 2;
  q.per_layer += 1;
  q.focus_n += q.focus_n / 2;
  return q;
}

MagnitudeField magnitude(const ScalarField& u) {
  return [u](const C2& z) { return std::abs(u(z)); };
}

MagnitudeField magnitude(const Form01& f) {
  return [f](const C2& z) {
    auto v = f(z);
    return std::sqrt(std::norm(v[0]) + std::norm(v[1]));
  };
}

namespace {

struct StarNode {
  C2 z{};
  double w = 0.0;
  double delta = 0.0;
  int layer = 0;
};

// star-shaped boundary-graded grid; delta and the boundary radius depend only
// on (alpha, t) by the Reinhardt symmetry, so they are cached per (alpha, t)
std::vector<StarNode> star_grid(const ModelDomain& dom, const NormQuad& q, int layers) {
  std::vector<StarNode> nodes;
  struct Radial {
    double t, wt;
    int layer;
  };
  std::vector<Radial> radial;
  for (int k = 0; k < layers; ++k) {
    // layer k: 1 - t in [2^{-k-1}, 2^{-k}]
    double hi = std::ldexp(1.0, -k);
    double lo = 0.5 * hi;
    double t_lo = 1.0 - hi, t_hi = 1.0 - lo;
    for (int g = 0; g < q.per_layer; ++g) {
      double t = t_lo + (t_hi - t_lo) * (g + 0.5) / q.per_layer;
      radial.push_back({t, (t_hi - t_lo) / q.per_layer, k});
    }
  }
  const double half_pi = 1.5707963267948966;
  const double two_pi = 6.283185307179586;
  for (int ia = 0; ia < q.n_alpha; ++ia) {
    double alpha = half_pi * (ia + 0.5) / q.n_alpha;
    double ca = std::cos(alpha), sa = std::sin(alpha);
    double w_alpha = ca * sa * (half_pi / q.n_alpha);
    double R = dom.boundary_radius(ca, sa);
    std::vector<double> delta_cache(radial.size());
    for (size_t it = 0; it < radial.size(); ++it) {
      C2 probe = {radial[it].t * R * ca, radial[it].t * R * sa};
      delta_cache[it] = dom.distance_to_boundary(probe).delta;
    }
    for (int ib = 0; ib < q.n_ang; ++ib) {
      double beta = two_pi * (ib + 0.5) / q.n_ang;
      cplx e1 = ca * cplx(std::cos(beta), std::sin(beta));
      for (int ig = 0; ig < q.n_ang; ++ig) {
        double gamma = two_pi * (ig + 0.5) / q.n_ang;
        cplx e2 = sa * cplx(std::cos(gamma), std::sin(gamma));
        double w_ang = w_alpha * (two_pi / q.n_ang) * (two_pi / q.n_ang);
        for (size_t it = 0; it < radial.size(); ++it) {
          const auto& r = radial[it];
          StarNode nd;
          nd.z = {r.t * R * e1, r.t * R * e2};
          if (dom.rho(nd.z) >= -1e-15) continue;
          nd.w = w_ang * r.wt * r.t * r.t * r.t * R * R * R * R;
          nd.delta = delta_cache[it];
          nd.layer = r.layer;
          nodes.push_back(nd);
        }
      }
    }
  }
  return nodes;
}

int auto_layers(double gamma) {
  // tail of the deepest layer ~ 2^{-K(1+gamma)}; layers beyond ~48 are below
  // double precision in the radial coordinate
  double need = 12.0 / std::max(0.125, 1.0 + gamma);
  return std::min(48, std::max(16, (int)std::ceil(need)));
}

double focus_weight(const SupportBox& box, const C2& z) {
  C2 d = z - box.center;
  double a1 = std::abs(hdot(d, box.u1));
  double a2 = std::abs(hdot(d, box.u2));
  return smoothstep_down(a1, box.R1, 2.0 * box.R1) *
         smoothstep_down(a2, box.R2, 2.0 * box.R2);
}

}  // namespace

FieldOnGrid::FieldOnGrid(const ModelDomain& dom, const MagnitudeField& field,
                         const NormQuad& quad, int layers,
                         const std::optional<SupportBox>& focus) {
  // beyond ~48 dyadic layers the radial coordinate saturates double precision
  layers_ = std::min(layers, 48);
  layers = layers_;
  auto nodes = star_grid(dom, quad, layers);
  star_v_.resize(nodes.size());
  star_w_.resize(nodes.size());
  star_d_.resize(nodes.size());
  star_loc_.resize(nodes.size());
  star_layer_.resize(nodes.size());
  parallel_for(nodes.size(), [&](size_t i) {
    star_v_[i] = field(nodes[i].z);
    star_w_[i] = nodes[i].w;
    star_d_[i] = nodes[i].delta;
    star_layer_[i] = nodes[i].layer;
    star_loc_[i] = focus ? focus_weight(*focus, nodes[i].z) : 0.0;
  });
  if (focus) {
    int n = quad.focus_n;
    std::vector<C2> pts;
    std::vector<double> loc;
    double w = (4.0 * focus->R1 / n) * (4.0 * focus->R1 / n) * (4.0 * focus->R2 / n) *
               (4.0 * focus->R2 / n);
    for (int i1 = 0; i1 < n; ++i1)
      for (int j1 = 0; j1 < n; ++j1)
        for (int i2 = 0; i2 < n; ++i2)
          for (int j2 = 0; j2 < n; ++j2) {
            double x1 = 2.0 * focus->R1 * (2.0 * (i1 + 0.5) / n - 1.0);
            double y1 = 2.0 * focus->R1 * (2.0 * (j1 + 0.5) / n - 1.0);
            double x2 = 2.0 * focus->R2 * (2.0 * (i2 + 0.5) / n - 1.0);
            double y2 = 2.0 * focus->R2 * (2.0 * (j2 + 0.5) / n - 1.0);
            C2 z = focus->center + cplx(x1, y1) * focus->u1 + cplx(x2, y2) * focus->u2;
            if (dom.rho(z) >= -1e-12) continue;
            double lw = focus_weight(*focus, z);
            if (lw == 0.0) continue;
            pts.push_back(z);
            loc.push_back(lw);
          }
    focus_v_.resize(pts.size());
    focus_w_.assign(pts.size(), w);
    focus_d_.resize(pts.size());
    focus_loc_ = loc;
    parallel_for(pts.size(), [&](size_t i) {
      focus_v_[i] = field(pts[i]);
      focus_d_[i] = dom.distance_to_boundary(pts[i]).delta;
    });
  }
}

double FieldOnGrid::lp(double p, double gamma) const {
  std::vector<double> contrib(star_v_.size());
  for (size_t i = 0; i < star_v_.size(); ++i) {
    if (star_w_[i] <= 0.0 || star_d_[i] <= 0.0) {
      contrib[i] = 0.0;
      continue;
    }
    contrib[i] = (1.0 - star_loc_[i]) * star_w_[i] * std::pow(star_v_[i], p) *
                 std::pow(star_d_[i], gamma);
  }
  std::vector<double> per_layer(layers_, 0.0);
  for (size_t i = 0; i < star_v_.size(); ++i) per_layer[star_layer_[i]] += contrib[i];
  double tail_prev = 0.0;
  int grow = 0;
  for (int k = layers_ - 4; k < layers_; ++k) {
    if (k < 1) continue;
    if (per_layer[k] > per_layer[k - 1] && per_layer[k] > 1e-12 * (per_layer[0] + 1e-300) &&
        per_layer[k] > tail_prev)
      ++grow;
    tail_prev = std::max(tail_prev, per_layer[k]);
  }
  if (grow >= 3) throw std::runtime_error("weight layering diverged");
  double total = pairwise_sum(std::span<const double>(contrib));
  if (!focus_v_.empty()) {
    std::vector<double> fc(focus_v_.size());
    for (size_t i = 0; i < focus_v_.size(); ++i)
      fc[i] = focus_loc_[i] * focus_w_[i] * std::pow(focus_v_[i], p) *
              std::pow(focus_d_[i], gamma);
    total += pairwise_sum(std::span<const double>(fc));
  }
  return std::pow(total, 1.0 / p);
}

double FieldOnGrid::sup() const {
  double best = 0.0;
  for (double v : star_v_) best = std::max(best, v);
  for (double v : focus_v_) best = std::max(best, v);
  return best;
}

double weighted_lp_norm(const ModelDomain& dom, const MagnitudeField& field,
                        const WeightedLpSpec& spec, const NormQuad& quad,
                        const std::optional<SupportBox>& focus) {
  spec.validate();
  int layers = quad.layers > 0 ? quad.layers : auto_layers(spec.gamma);
  FieldOnGrid g(dom, field, quad, layers, focus);
  if (std::isinf(spec.p)) return g.sup();
  return g.lp(spec.p, spec.gamma);
}

double lipschitz_estimate(const ModelDomain& dom, const ScalarField& u, double alpha,
                          int pairs_per_bin, double bin_lo, double bin_hi, uint64_t seed) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in (0,1]");
  Rng rng = Rng::substream(seed, "lipschitz");
  double best = 0.0;
  for (double r = bin_hi; r >= bin_lo; r /= 2.0) {
    int got = 0, guard = 0;
    std::vector<std::pair<C2, C2>> pairs;
    while (got < pairs_per_bin && guard < 100 * pairs_per_bin) {
      ++guard;
      C2 z;
      for (int i = 0; i < 2; ++i) z[i] = rng.gaussian_cplx();
      z = (0.9 * std::pow(rng.uniform(), 0.25) / norm(z)) * z;
      if (dom.rho(z) >= -1e-9) continue;
      C2 dir = rng.unit_c2();
      double rr = rng.uniform(0.5 * r, r);
      C2 w = z + rr * dir;
      if (dom.rho(w) >= -1e-9) continue;
      pairs.emplace_back(z, w);
      ++got;
    }
    std::vector<double> quot(pairs.size());
    parallel_for(pairs.size(), [&](size_t i) {
      const auto& [a, b] = pairs[i];
      quot[i] = std::abs(u(a) - u(b)) / std::pow(norm(a - b), alpha);
    });
    for (double q : quot) best = std::max(best, q);
  }
  return best;
}

double bmo_estimate(const ModelDomain& dom, const ScalarField& u, int n_balls,
                    int nodes_per_ball, uint64_t seed, double min_depth) {
  Rng rng = Rng::substream(seed, "bmo");
  std::vector<std::pair<C2, double>> balls;
  int guard = 0;
  while ((int)balls.size() < n_balls && guard < 100 * n_balls) {
    ++guard;
    C2 z;
    for (int i = 0; i < 2; ++i) z[i] = rng.gaussian_cplx();
    // log-graded center depths so the estimator probes boundary-adjacent balls
    double lg = -std::log10(min_depth);
    double scale = 1.0 - std::pow(10.0, -0.3 - (lg - 0.3) * rng.uniform());
    z = (scale / norm(z)) * z;
    if (dom.rho(z) >= -1e-9) continue;
    double dz = dom.distance_to_boundary(z).delta;
    double r = dz * 0.9 * std::pow(2.0, -rng.uniform(0.0, 6.0));
    if (r < 1e-6) continue;
    balls.emplace_back(z, r);
  }
  std::vector<double> osc(balls.size());
  parallel_for(balls.size(), [&](size_t bi) {
    const auto& [c, r] = balls[bi];
    Rng local = Rng::substream(seed ^ (bi * 0x9e3779b97f4a7c15ULL), "bmo_ball");
    std::vector<cplx> vals;
    vals.reserve(nodes_per_ball);
    for (int i = 0; i < nodes_per_ball; ++i) {
      C2 d;
      do {
        d = {cplx(local.uniform(-1, 1), local.uniform(-1, 1)),
             cplx(local.uniform(-1, 1), local.uniform(-1, 1))};
      } while (norm2(d) > 1.0);
      vals.push_back(u(c + r * d));
    }
    cplx mean = 0.0;
    for (const auto& v : vals) mean += v;
    mean /= double(vals.size());
    double m = 0.0;
    for (const auto& v : vals) m += std::abs(v - mean);
    osc[bi] = m / double(vals.size());
  });
  double best = 0.0;
  for (double v : osc) best = std::max(best, v);
  return best;
}

}  // namespace lcft
