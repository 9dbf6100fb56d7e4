// The experimental side of the weighted estimates: the exponent calculator,
// Schur-test verifier, dyadic integral checks, and the boundary-concentration
// experiments for the solution operator.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lcft/dbar_operator.hpp"
#include "lcft/families.hpp"
#include "lcft/norms.hpp"
#include "lcft/rational.hpp"

namespace lcft {

// ---------------------------------------------------------------------------
// exponent calculus
// ---------------------------------------------------------------------------

enum class EstimateRegime { lq, bmo, lipschitz };

struct ExponentResult {
  EstimateRegime regime = EstimateRegime::lq;
  std::optional<Rational> q;     // set in the lq regime
  std::optional<Rational> alpha; // set in the lipschitz regime (finite p)
  bool p_infinite = false;
  Rational critical_p;                 // m(gamma+n) + 2
  std::optional<Rational> case1_bound; // (m(gamma'+n)+2)/(1-m(gamma-gamma')), empty = infinite
};

// Solution-gain exponents: 1/q = 1/p - (1 - m(g - g')) / (m(g' + n) + 2),
// with the BMO regime at p = m(gamma+n)+2 and the Lipschitz regime above it.
// p empty means p = infinity. Throws naming the violated hypothesis.
ExponentResult exponent_q(int m, int n, const std::optional<Rational>& p, const Rational& gamma,
                          const Rational& gamma_prime);

// ---------------------------------------------------------------------------
// reports
// ---------------------------------------------------------------------------

struct ReportRow {
  double level = 0.0; // t or shell index or eps
  double num = 0.0;
  double den = 0.0;
  double ratio = 0.0;
  double q = 0.0;
  bool pass = true;
  std::string tag;
};

struct EstimateReport {
  std::string id;
  std::vector<ReportRow> rows;
  double fitted_exponent = 0.0; // log-log slope of ratio against level
  double constant = 0.0;        // max ratio
  double spread = 0.0;          // max/min ratio
  bool pass = false;
  std::string note;
};

// least-squares slope of log(ratio) against log(level); needs >= 4 rows
double fitted_slope(const std::vector<ReportRow>& rows);

// ---------------------------------------------------------------------------
// Schur-type verifications
// ---------------------------------------------------------------------------

using KernelSampler = std::function<double(const C2& z, const C2& zeta)>;

struct SchurReport {
  std::vector<ReportRow> rows; // one per eps: C(eps) at the two resolutions
  double growth = 0.0;         // max over eps of C_fine / C_coarse
  double spread = 0.0;         // max/min of C over the eps grid
  bool pass = false;
};

// hypothesis (1) of the Range-style lemma for the sampled kernel:
// sup_z int |K(z,zeta)|^s delta(zeta)^{gamma_mu - eps} dlambda <= C delta(z)^{-eps}
SchurReport schur_test(const ModelDomain& dom, const KernelSampler& K, double s,
                       const std::vector<double>& eps_grid, double gamma_mu, int n_z,
                       int grid_n, uint64_t seed, double spread_limit = 10.0,
                       double growth_limit = 1.15);

// both hypotheses specialized to the solving kernel, at the exponent
// mu0 = 1/(m(gamma+n)+1) (weight-transfer case gamma' = gamma)
struct KernelSchurReport {
  SchurReport z_side;    // integral in zeta, sup over z
  SchurReport zeta_side; // integral in z, sup over zeta
  double mu0 = 0.0;
  bool pass = false;
};

KernelSchurReport schur_test_kernel(const ModelDomain& dom, const KernelParams& params,
                                    double gamma, const std::vector<double>& eps_grid, int n_pts,
                                    int grid_n, uint64_t seed);

// ---------------------------------------------------------------------------
// dyadic integral lemmas
// ---------------------------------------------------------------------------

// int_{P(z,delta)} |z-zeta|^{-(1+mu)} against tau2^{1-mu} tau1^2, and
// int_{P(zeta,delta)} delta(z)^{alpha-1} |z-zeta|^{-1} against
// (delta^{alpha-1}/alpha) tau2 tau1^2, over dyadic delta levels
EstimateReport dyadic_integral_check_mu(const ModelDomain& dom, const C2& z, double mu,
                                        int level_lo, int level_hi, double c0, int grid_n,
                                        double spread_limit = 10.0);

EstimateReport dyadic_integral_check_alpha(const ModelDomain& dom, const C2& zeta, double alpha,
                                           int level_lo, int level_hi, double c0, int grid_n,
                                           double spread_limit = 10.0);

// ---------------------------------------------------------------------------
// concentration experiments for T_K
// ---------------------------------------------------------------------------

struct GainConfig {
  std::vector<double> t_grid = {0.1, 0.05, 0.025, 0.0125};
  std::vector<FamilyKind> kinds = {FamilyKind::bump, FamilyKind::tangential_oscillation};
  double slope_band = 0.1;
  double probe_factor = 1.25; // exploratory q-inflation, reported only
  int quad_base = 12;
  NormQuad norm_quad{4, 8, 0, 1, 8};
};

struct GainTuple {
  double p = 2.0;
  double gamma = 0.0;
  double gamma_prime = 0.0;
};

// ratios ||T_K f_t||_{L^q(delta^gamma')} / ||f_t||_{L^p(delta^gamma)} per t
// (max over family kinds), with the pass rule |log-log slope| <= 0.1.
// The suite variant shares the sampled solution fields across the tuples.
std::vector<EstimateReport> gain_suite(const ModelDomain& dom, const KernelParams& params,
                                       const std::vector<GainTuple>& tuples,
                                       const GainConfig& cfg, uint64_t seed);
EstimateReport gain_experiment(const ModelDomain& dom, const KernelParams& params, double p,
                               double gamma, double gamma_prime, const GainConfig& cfg,
                               uint64_t seed);

struct NevanlinnaConfig {
  std::vector<double> alpha_grid = {0.25, 0.5, 1.0};
  double t = 0.05;
  double spread_limit = 5.0;
  int quad_base = 12;
  NormQuad norm_quad{4, 8, 0, 1, 8};
  int knorm_random = 8;
};

// r(alpha) = int |T_K f| delta^{alpha-1} / ((1/alpha) int ||f||_k delta^alpha)
EstimateReport nevanlinna_experiment(const ModelDomain& dom, const KernelParams& params,
                                     const NevanlinnaConfig& cfg, uint64_t seed);

}  // namespace lcft
