// Anisotropic boundary geometry: the radii tau(zeta,v,eps), extremal frames,
// polydiscs, the associated pseudo-distance and the anisotropic k-norm.
#pragma once

#include <algorithm>
#include <functional>
#include <optional>

#include "lcft/model_domain.hpp"

namespace lcft {

// tau(zeta, v, eps): largest c such that |rho(zeta + lambda v) - rho(zeta)| < eps
// for all |lambda| < c. Evaluated on the exact directional jet, maximizing over
// 64 equispaced angles per circle and bisecting in the radius.
double tau(const ModelDomain& dom, const C2& zeta, const C2& unit_v, double eps,
           int n_angles = 64, double rel_tol = 1e-6);

// same, reusing a precomputed jet for (zeta, v)
double tau(const DirectionalJet& jet, double eps, int n_angles = 64, double rel_tol = 1e-6);

struct ExtremalFrame {
  C2 base{};
  double eps = 0.0;
  C2 v1{}; // complex normal direction (the line containing the real gradient)
  C2 v2{}; // tangential complement, phase-normalized
  double tau1 = 0.0;
  double tau2 = 0.0;
};

// v1 spans the complex normal line at zeta; for n=2 the orthogonal complement
// is a single complex line, so v2 is its generator with the first nonzero
// component made real positive. Throws "degenerate gradient" at critical
// points of rho (e.g. the center).
ExtremalFrame extremal_basis(const ModelDomain& dom, const C2& zeta, double eps);

struct TauNormalScale {
  double tau1 = 0.0;
  double ratio = 0.0; // tau1 / eps
};

// normal radius with its eps-ratio; throws if the ratio leaves [lo, hi]
TauNormalScale tau_normal_scale(const ModelDomain& dom, const C2& zeta, double eps,
                                double lo = 0.02, double hi = 5.0);

struct Polydisc {
  ExtremalFrame frame{};
  double c0 = 0.1;
  double A = 1.0;
};

// frame coordinates of z - zeta
std::array<cplx, 2> frame_coords(const ExtremalFrame& f, const C2& z);

bool polydisc_contains(const Polydisc& pd, const C2& z);

// d(zeta, z) = inf { eps : z in P_eps(zeta) }, bisected in log(eps) over
// [1e-8, 1] to relative 1e-4. nullopt means z is not in P_1(zeta) (">= 1").
std::optional<double> pseudo_distance(const ModelDomain& dom, const C2& zeta, const C2& z,
                                      double c0);

// k(z,v) = delta(z) / tau(z, v, delta(z))
double k_weight(const ModelDomain& dom, const C2& z, const C2& unit_v);

// pointwise anisotropic norm of a (0,1)-form value f = (f1, f2) at z:
// sup over unit v of |f1 conj(v1) + f2 conj(v2)| / k(z,v), estimated on the
// extremal frame plus n_random sampled directions
double k_norm_value(const ModelDomain& dom, const std::array<cplx, 2>& f, const C2& z,
                    int n_random = 1000, uint64_t seed = 1);

// ---------------------------------------------------------------------------
// sampled verification of the geometry comparisons (acceptance suite 1)
// ---------------------------------------------------------------------------

struct RatioRange {
  double lo = 1e300;
  double hi = 0.0;
  double spread() const { return lo > 0.0 ? hi / lo : 1e300; }
  void absorb(double r) {
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
};

// deterministic points with delta in [dmin, dmax], spread over the boundary
std::vector<C2> sample_near_boundary(const ModelDomain& dom, int n, uint64_t seed, double dmin,
                                     double dmax);

// sum_{1<=a+b<=2m} |c_ab| tau^{a+b} / eps over random (zeta, nu, eps)
RatioRange property2_range(const ModelDomain& dom, int n_samples, uint64_t seed);

// [1/tau(zeta,gamma,eps)] / [sum |a_j| / tau_j] over random frame mixtures
RatioRange property3_range(const ModelDomain& dom, int n_samples, uint64_t seed);

// smallest single C with lam^(1/m) tau(eps) <= C tau(lam eps) and
// tau(lam eps) <= C lam tau(eps) over samples and lam in {2,4,8}
double property5_constant(const ModelDomain& dom, int n_samples, uint64_t seed);

// tau_i(zeta,eps) / tau_i(z,eps) over zeta in P_eps(z) with the given c0
RatioRange tau_equiv_range(const ModelDomain& dom, int n_samples, uint64_t seed, double c0);

// fitted c with P_{c eps}(zeta) inside 2 P_eps(zeta), tested on box samples
double engulfing_c2(const ModelDomain& dom, int n_samples, uint64_t seed, double c0);

}  // namespace lcft
