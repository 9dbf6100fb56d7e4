#include "lcft/model_domain.hpp"

#include <algorithm>
#include <cmath>

#include "lcft/rng.hpp"

namespace lcft {

namespace {

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

cplx cpow_int(cplx x, int k) {
  cplx r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

double boundary_radius_solve(double a1, double a2, int m1, int m2) {
  // g(R) = (R a1)^{2m1} + (R a2)^{2m2} - 1, strictly increasing in R
  auto g = [&](double R) {
    return ipow(R * R * a1 * a1, m1) + ipow(R * R * a2 * a2, m2) - 1.0;
  };
  double lo = 0.0, hi = 1.0;
  while (g(hi) < 0.0) hi *= 2.0;
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double DirectionalJet::eval(cplx lambda) const {
  cplx lb = std::conj(lambda);
  cplx pow_l[kMaxOrder + 1];
  cplx pow_lb[kMaxOrder + 1];
  pow_l[0] = pow_lb[0] = 1.0;
  for (int k = 1; k <= max_order; ++k) {
    pow_l[k] = pow_l[k - 1] * lambda;
    pow_lb[k] = pow_lb[k - 1] * lb;
  }
  cplx s = 0.0;
  for (int a = 0; a <= max_order; ++a)
    for (int b = 0; a + b <= max_order; ++b) {
      if (a == 0 && b == 0) continue;
      if (c[a][b] != 0.0) s += c[a][b] * pow_l[a] * pow_lb[b];
    }
  return s.real();
}

double DirectionalJet::max_on_circle(double r, int n_angles) const {
  // rho is convex and the increment vanishes at 0, so the max of the
  // absolute increment over the closed disc equals the max of the signed
  // increment over the circle (pairing each angle with its antipode)
  double best = -1e300;
  for (int k = 0; k < n_angles; ++k) {
    double th = 6.283185307179586 * k / n_angles;
    double v = eval(cplx(r * std::cos(th), r * std::sin(th)));
    best = std::max(best, v);
  }
  return best;
}

ModelDomain::ModelDomain(int m1, int m2) : m1_(m1), m2_(m2) {
  if (m1 < 1 || m2 < 1) throw std::invalid_argument("exponents must be >= 1");
  if (2 * std::max(m1, m2) > DirectionalJet::kMaxOrder)
    throw std::invalid_argument("exponents must be <= 4");
  // diameter of the centrally symmetric convex body = 2 max |z|
  double best = 1.0;
  const int N = 4096;
  for (int i = 0; i <= N; ++i) {
    double a1 = std::cos(1.5707963267948966 * i / N);
    double a2 = std::sin(1.5707963267948966 * i / N);
    best = std::max(best, boundary_radius_solve(a1, a2, m1_, m2_));
  }
  diameter_ = 2.0 * best;
  // |grad rho| = 2 |d rho|, maximal on the boundary (rho is convex)
  double g = 0.0;
  for (int i = 0; i <= N; ++i) {
    double u = 1.5707963267948966 * i / N;
    double s1 = std::pow(std::max(std::cos(u), 0.0), 1.0 / m1_);
    double s2 = std::pow(std::max(std::sin(u), 0.0), 1.0 / m2_);
    double d1 = m1_ * s1 * ipow(s1 * s1, m1_ - 1);
    double d2 = m2_ * s2 * ipow(s2 * s2, m2_ - 1);
    g = std::max(g, 2.0 * std::sqrt(d1 * d1 + d2 * d2));
  }
  grad_max_ = g;
}

double ModelDomain::rho(const C2& z) const {
  return ipow(std::norm(z[0]), m1_) + ipow(std::norm(z[1]), m2_) - 1.0;
}

RhoDerivatives ModelDomain::rho_derivatives(const C2& z, int order) const {
  if (order < 1 || order > 2) throw std::invalid_argument("order must be 1 or 2");
  RhoDerivatives d;
  int m[2] = {m1_, m2_};
  for (int i = 0; i < 2; ++i) {
    double r2 = std::norm(z[i]);
    double r2m2 = ipow(r2, m[i] - 1); // |z_i|^{2(m_i-1)}
    d.grad[i] = double(m[i]) * std::conj(z[i]) * r2m2;
    d.hess_mixed[i] = double(m[i]) * double(m[i]) * r2m2;
    if (m[i] >= 2) {
      double r2m4 = ipow(r2, m[i] - 2);
      d.hess_holo[i] = double(m[i]) * double(m[i] - 1) * std::conj(z[i]) * std::conj(z[i]) * r2m4;
    } else {
      d.hess_holo[i] = 0.0;
    }
  }
  return d;
}

double ModelDomain::boundary_radius(double a1, double a2) const {
  return boundary_radius_solve(a1, a2, m1_, m2_);
}

BoundaryFoot ModelDomain::distance_to_boundary(const C2& z) const {
  double r1 = std::abs(z[0]);
  double r2 = std::abs(z[1]);
  // boundary curve in the (r1,r2) quadrant: s1 = cos(u)^(1/m1), s2 = sin(u)^(1/m2)
  auto s1 = [&](double u) { return std::pow(std::max(std::cos(u), 0.0), 1.0 / m1_); };
  auto s2 = [&](double u) { return std::pow(std::max(std::sin(u), 0.0), 1.0 / m2_); };
  auto d2 = [&](double u) {
    double ds1 = s1(u) - r1;
    double ds2 = s2(u) - r2;
    return ds1 * ds1 + ds2 * ds2;
  };
  // coarse scan (the squared distance may have two local minima), then golden
  const int NS = 64;
  const double half_pi = 1.5707963267948966;
  int best_i = 0;
  double best_v = 1e300;
  for (int i = 0; i <= NS; ++i) {
    double v = d2(half_pi * i / NS);
    if (v < best_v) {
      best_v = v;
      best_i = i;
    }
  }
  double lo = half_pi * std::max(best_i - 1, 0) / NS;
  double hi = half_pi * std::min(best_i + 1, NS) / NS;
  const double gr = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = d2(x1), f2 = d2(x2);
  for (int it = 0; it < 60; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = d2(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = d2(x2);
    }
  }
  double u = 0.5 * (a + b);
  BoundaryFoot out;
  out.delta = std::sqrt(d2(u));
  double p1 = s1(u), p2 = s2(u);
  cplx ph1 = (r1 > 1e-300) ? z[0] / r1 : cplx(1.0, 0.0);
  cplx ph2 = (r2 > 1e-300) ? z[1] / r2 : cplx(1.0, 0.0);
  out.foot = {p1 * ph1, p2 * ph2};
  return out;
}

double ModelDomain::delta(const C2& z) const {
  if (rho(z) > 1e-12) throw std::domain_error("point outside domain");
  return distance_to_boundary(z).delta;
}

DirectionalJet ModelDomain::directional_jet(const C2& base, const C2& unit_dir) const {
  if (std::abs(norm(unit_dir) - 1.0) > 1e-9)
    throw std::invalid_argument("direction must be unit");
  DirectionalJet jet;
  jet.base = base;
  jet.dir = unit_dir;
  jet.max_order = 2 * std::max(m1_, m2_);
  int m[2] = {m1_, m2_};
  for (int i = 0; i < 2; ++i) {
    // |zeta_i + lambda nu_i|^{2 m_i} = (A + B)^{m_i},
    // B = u lambda + conj(u) lbar + w lambda lbar,  u = nu_i conj(zeta_i), w = |nu_i|^2
    double A = std::norm(base[i]);
    cplx u = unit_dir[i] * std::conj(base[i]);
    double w = std::norm(unit_dir[i]);
    for (int k = 1; k <= m[i]; ++k) {
      double ck = binom(m[i], k) * ipow(A, m[i] - k);
      // B^k multinomial over (a,b,c), a+b+c=k
      for (int a = 0; a <= k; ++a)
        for (int b = 0; a + b <= k; ++b) {
          int cc = k - a - b;
          double mult = factorial(k) / (factorial(a) * factorial(b) * factorial(cc));
          cplx term = ck * mult * cpow_int(u, a) * cpow_int(std::conj(u), b) * ipow(w, cc);
          jet.c[a + cc][b + cc] += term;
        }
    }
  }
  jet.c[0][0] = 0.0;
  return jet;
}

C2 ModelDomain::reference_boundary_point() const {
  double a = 0.7071067811865476;
  double R = boundary_radius(a, a);
  return {R * a, R * a};
}

std::vector<C2> ModelDomain::sample_interior(int count, uint64_t seed,
                                             std::optional<double> concentration_t) const {
  if (count < 1) throw std::invalid_argument("count must be >= 1");
  std::vector<C2> out;
  out.reserve(count);
  Rng rng = Rng::substream(seed, "sample_interior",
                           (uint64_t(m1_) << 32) ^ uint64_t(m2_) ^
                               (concentration_t ? 0x5bf03635ULL : 0ULL));
  if (!concentration_t) {
    while ((int)out.size() < count) {
      C2 z;
      for (int i = 0; i < 2; ++i) {
        double r = std::sqrt(rng.uniform());
        double th = rng.uniform(0.0, 6.283185307179586);
        z[i] = cplx(r * std::cos(th), r * std::sin(th));
      }
      if (rho(z) < 0.0) out.push_back(z);
    }
    return out;
  }
  double t = *concentration_t;
  if (t <= 0.0) throw std::invalid_argument("concentration scale must be positive");
  C2 p0 = reference_boundary_point();
  RhoDerivatives d = rho_derivatives(p0, 1);
  C2 nu = normalized(conj(d.grad)); // inward step is -nu
  while ((int)out.size() < count) {
    double depth = rng.uniform(0.6 * t, 1.8 * t);
    double tang = rng.uniform(-1.0, 1.0) * std::sqrt(t);
    C2 v2 = {-std::conj(nu[1]), std::conj(nu[0])};
    double ph = rng.uniform(0.0, 6.283185307179586);
    C2 z = p0 - depth * nu + (tang * cplx(std::cos(ph), std::sin(ph))) * v2;
    if (rho(z) >= 0.0) continue;
    double del = distance_to_boundary(z).delta;
    if (del >= t / 2 && del <= 2 * t) out.push_back(z);
  }
  return out;
}

std::string ModelDomain::spec_string() const {
  return "ellipsoid:" + std::to_string(m1_) + "," + std::to_string(m2_);
}

ModelDomain parse_domain_spec(const std::string& spec) {
  const std::string prefix = "ellipsoid:";
  if (spec.rfind(prefix, 0) != 0)
    throw std::invalid_argument("domain spec must look like 'ellipsoid:m1,m2'");
  std::string rest = spec.substr(prefix.size());
  auto comma = rest.find(',');
  if (comma == std::string::npos)
    throw std::invalid_argument("domain spec must look like 'ellipsoid:m1,m2'");
  int m1 = std::stoi(rest.substr(0, comma));
  int m2 = std::stoi(rest.substr(comma + 1));
  return ModelDomain(m1, m2);
}

}  // namespace lcft
