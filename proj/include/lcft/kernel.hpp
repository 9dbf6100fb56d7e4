// The weighted integral kernels on model domains, reduced to n = 2 and
// (0,1)-form data. K1 solves dbar via T_K f = int f ^ K1; P_N is the smooth
// companion kernel of the homotopy identity
//   f = sigma * dbar_z (int f ^ K1) - int f ^ P_N.
//
// Conventions, spelled out once:
//   eta      = zeta - z
//   s        = sum_i conj(eta_i) d(eta_i)
//   S0       = 2 sum_i drho_i(zeta) (z_i - zeta_i)          (gradient pairing)
//   S        = chi S0 - (1 - chi) |z - zeta|^2
//   Q_i      = 2 chi drho_i(zeta) - (1 - chi)(conj(z_i) - conj(zeta_i)),
//              so that sum_i Q_i (z_i - zeta_i) = S identically
//   q_i      = Q_i / (K0 rho(zeta)),  Phi = (S/K0 + rho) / rho = 1 + <q-form>
//   K1       = c_sol [ rho^N [s ^ dbar_zeta s] / (|eta|^4 (S/K0 + rho)^N)
//                - N rho^{N+1} [s ^ dbar_zeta Q] / (|eta|^2 (S/K0 + rho)^{N+1}) ]
//   P_N      = c_proj N(N+1) rho^{N+2} [(dbar Q)^2]_{(0,1)_z x (2,1)_zeta} / (S/K0 + rho)^{N+2}
//
// The N-factors are structural: they are the derivatives of the weight
// G(Phi) = Phi^{-N} in the Cauchy-Fantappie expansion, and the assembled pair
// satisfies the pointwise Koppelman identity dbar K = -P off the diagonal
// (checked to 1e-7 against an independent exterior-algebra evaluation).
//
// The first K1 term is the weighted Bochner-Martinelli part (it carries the
// diagonal singularity that makes the homotopy identity reproduce f); the
// second is the weight-derivative part of the Cauchy-Fantappie expansion.
//
// The (2,1)_zeta component of s ^ dbar_zeta Q against dzeta1 ^ dzeta2 ^ dzbar_j:
//   B_j = -conj(eta_1) dq_2/dzetabar_j + conj(eta_2) dq_1/dzetabar_j
// (for the BM part, dq_l/dzetabar_j is replaced by delta_lj), and of
// (dbar Q)^2 against dzeta1 ^ dzeta2 ^ dzetabar_j ^ dzbar_k:
//   M_kj = dq_1/dzbar_k dq_2/dzetabar_j - dq_1/dzetabar_j dq_2/dzbar_k
// (the combinatorial factor 2 of the square is folded into c_proj).
//
// The sign of S0 ("paper": z - zeta, negative real part; "literal": zeta - z)
// is resolved empirically by calibrate_k0 and recorded; the paper-consistent
// choice is the default.
#pragma once

#include <cstdint>
#include <vector>

#include "lcft/geometry.hpp"
#include "lcft/model_domain.hpp"

namespace lcft {

enum class SupportSign {
  z_minus_zeta, // S0 = 2 <drho(zeta), z - zeta>; satisfies the K0 inequality
  zeta_minus_z, // S0 = 2 <drho(zeta), zeta - z>
};

struct KernelParams {
  int N = 6;
  double K0 = 4.0;
  double chi_r1 = 0.3; // |z - zeta| ramp of the cutoff
  double chi_r2 = 0.6;
  double chi_d1 = 0.1; // delta(zeta) ramp
  double chi_d2 = 0.2;
  double c0 = 0.1;
  SupportSign sign = SupportSign::z_minus_zeta;

  static KernelParams defaults(const ModelDomain& dom);
  // N must dominate the weights in play: N >= n + gamma_max + 2
  void validate(double gamma_max = 0.0) const;
};

// z-independent data cached per integration node
struct ZetaData {
  C2 zeta{};
  double rho = 0.0;
  C2 drho{};
  std::array<double, 2> hess_mixed{};
  double delta = 0.0;
  C2 grad_delta{}; // complex representation of the real gradient of delta
  static ZetaData at(const ModelDomain& dom, const C2& zeta);
};

// Like ZetaData::at, but when convexity bounds on delta
// (-rho/gradmax <= delta <= -rho/|grad rho(zeta)|) settle which plateau of
// the depth cutoff the point is on, the exact distance is skipped and a
// plateau representative stored (only sigma(delta) enters the kernels).
ZetaData kernel_zeta_data(const ModelDomain& dom, const C2& zeta, const KernelParams& p);

struct ChiValue {
  double value = 0.0;
  std::array<cplx, 2> d_zetabar{};
  std::array<cplx, 2> d_zbar{};
};

// quintic smoothstep profile: 1 below a, 0 above b
double smoothstep_down(double x, double a, double b);
double smoothstep_down_deriv(double x, double a, double b);

ChiValue chi_eval(const KernelParams& p, const C2& z, const ZetaData& zd);
double chi(const KernelParams& p, const ModelDomain& dom, const C2& z, const C2& zeta);

// literal gradient pairing 2 <drho(zeta), zeta - z> (convexity oracle target)
cplx support_S0_literal(const ModelDomain& dom, const C2& z, const C2& zeta);
// assembled S under the parameter sign convention
cplx support_S(const ModelDomain& dom, const KernelParams& p, const C2& z, const C2& zeta);
std::array<cplx, 2> q_components(const ModelDomain& dom, const KernelParams& p, const C2& z,
                                 const C2& zeta);

// K1 value: coefficients on dzeta1 ^ dzeta2 ^ dzetabar_j (scalar in z)
struct K1Value {
  std::array<cplx, 2> comp{};
  double abs() const;
};

// P_N value: [k][j] coefficient on dzbar_k (x) dzeta1 ^ dzeta2 ^ dzetabar_j
struct PNValue {
  std::array<std::array<cplx, 2>, 2> comp{};
  double abs() const;
};

// normalization constants, fixed by the homotopy identity on the ball at the
// default weight exponent N = 6 (see README)
struct KernelNormalization {
  double c_sol = 1.0;  // overall solving-kernel constant (BM residue scale)
  double c_proj = 1.0; // P_N constant (scales the structural N(N+1) factor)
  double sigma = 1.0;  // homotopy sign
};
const KernelNormalization& calibrated_normalization();

K1Value kernel_K1(const ModelDomain& dom, const KernelParams& p, const C2& z,
                  const ZetaData& zd, const KernelNormalization& nrm = calibrated_normalization());
K1Value kernel_K1(const ModelDomain& dom, const KernelParams& p, const C2& z, const C2& zeta,
                  const KernelNormalization& nrm = calibrated_normalization());

// the two K1 terms separately (both unnormalized): first the BM part, then
// the weight-derivative part; used by the calibration fit
std::pair<K1Value, K1Value> kernel_K1_parts(const ModelDomain& dom, const KernelParams& p,
                                            const C2& z, const ZetaData& zd);

PNValue kernel_PN(const ModelDomain& dom, const KernelParams& p, const C2& z,
                  const ZetaData& zd, const KernelNormalization& nrm = calibrated_normalization());
PNValue kernel_PN(const ModelDomain& dom, const KernelParams& p, const C2& z, const C2& zeta,
                  const KernelNormalization& nrm = calibrated_normalization());

// pairing of a (0,1)-form value (f1, f2) at zeta with the kernels; the factor
// 4 converts dzeta1 ^ dzetabar1 ^ dzeta2 ^ dzetabar2 to Lebesgue measure
inline cplx pair_K1(cplx f1, cplx f2, const K1Value& k) {
  return 4.0 * (f1 * k.comp[1] - f2 * k.comp[0]);
}
inline cplx pair_PN(cplx f1, cplx f2, const PNValue& pn, int k_out) {
  return 4.0 * (f1 * pn.comp[k_out][1] - f2 * pn.comp[k_out][0]);
}

struct K0Calibration {
  double K0 = 0.0;
  double min_margin_rel = 0.0; // min over pairs of margin / |rho(zeta)|
  SupportSign sign = SupportSign::z_minus_zeta;
  bool sign_flipped = false; // true if the literal convention had to be replaced
};

// smallest K0 in {1,2,4,...} with Re(rho(zeta) + S/K0) < rho(zeta)/2 and
// margin >= 0.1 |rho(zeta)| on all sampled pairs; tries the requested sign
// first and falls back to the other one, recording the flip
K0Calibration calibrate_k0(const ModelDomain& dom, const KernelParams& p, int sample_size,
                           uint64_t seed);

struct ShellBoundRow {
  int level = 0;
  double eps = 0.0;
  double max_ratio = 0.0;          // |K1| |eta| tau1(z,eps), max over the shell
  double max_ratio_weighted = 0.0; // same with the (eps/|rho|)^{N-1} weight (recorded only)
  double min_denominator = 0.0;    // min over shell of |rho + S/K0| / eps
  int samples = 0;
};

struct ShellBoundReport {
  std::vector<ShellBoundRow> rows;
  double ratio_spread = 0.0; // max/min of max_ratio over shells
  double min_denominator = 0.0;
  bool pass = false;
};

// Verifies the pointwise kernel bound |K1| <~ 1/(tau1(z,eps) |z-zeta|) and the
// denominator floor |rho + S/K0| >= c eps on dyadic polydisc shells
// P_{2 eps}(z) \ P_eps(z), eps = 2^j delta(z). Meaningful for z close enough
// to the boundary that every shell stays at small eps; the rho-weighted
// variants of the bound carry constants of size (K0/c0^2)^{N+1} and are
// reported but not asserted.
ShellBoundReport check_kernel_bounds(const ModelDomain& dom, const KernelParams& p, const C2& z,
                                     int levels, int samples_per_shell, uint64_t seed,
                                     double spread_limit = 1e2);

}  // namespace lcft
