// Weighted Bergman projection on the Reinhardt model domains, realized by
// monomial orthogonality: radial weights make the monomials z^(a,b) an
// orthogonal basis of L^2(D, omega), so the projector is diagonal once the
// moments c_ab = ||z^(a,b)||^2_omega are known.
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "lcft/estimates.hpp"
#include "lcft/forms.hpp"
#include "lcft/model_domain.hpp"
#include "lcft/norms.hpp"

namespace lcft {

// radial profile eta(|z1|, |z2|); the default weight is (-rho)^r
using RadialProfile = std::function<double(double, double)>;

struct WeightSpec {
  double r = 0.0;                       // exponent of the distance-like factor
  std::optional<RadialProfile> eta;     // strictly positive C^1 factor, default 1
  std::optional<RadialProfile> chi_pow; // distance-equivalent base, default -rho
  bool radial = true;                   // diagonal method precondition

  void validate() const;
};

// weight value at (w1, w2) = (|z1|^2, |z2|^2)
double weight_value(const ModelDomain& dom, const WeightSpec& w, double w1, double w2);

// c_(a,b) = int |z1|^{2a} |z2|^{2b} omega dlambda by nested tanh-sinh
// quadrature, relative accuracy ~1e-8
double monomial_moment(const ModelDomain& dom, const WeightSpec& w, int a, int b,
                       int level = 7);

// closed form on E(m1,m2) for omega = (-rho)^r:
// pi^2/(m1 m2) B((a+1)/m1, (b+1)/m2, r+1) (Dirichlet integral)
double monomial_moment_closed_form(const ModelDomain& dom, double r, int a, int b);

class MomentTable {
 public:
  MomentTable(const ModelDomain& dom, const WeightSpec& w, int degree);

  int degree() const { return degree_; }
  double moment(int a, int b) const; // quadrature-consistent value (grid)
  double refined(int a, int b) const; // tanh-sinh value

  // the radial grid shared with the projector, so that projecting a monomial
  // reproduces it exactly
  struct RadialNode {
    double w1, w2, wt; // (|z1|^2, |z2|^2) and Lebesgue x weight mass / (2pi)^2
  };
  const std::vector<RadialNode>& radial_nodes() const { return radial_; }

 private:
  int degree_;
  std::vector<RadialNode> radial_;
  std::vector<double> grid_moments_;
  std::vector<double> refined_moments_;
};

struct MonomialExpansion {
  int degree = 0;
  std::map<std::pair<int, int>, cplx> coef;
  bool tail_warning = false; // top-degree coefficients carry > 1% of the norm

  cplx eval(const C2& z) const;
};

class BergmanProjector {
 public:
  // theta resolution adapts to n_theta >= 2*degree + 16
  BergmanProjector(const ModelDomain& dom, const WeightSpec& w, int degree, int n_theta = 0);

  const MomentTable& moments() const { return table_; }

  // projection of a general field sampled on the product grid
  MonomialExpansion project(const ScalarField& f) const;
  // inner product <f, g>_omega on the same grid
  cplx inner(const ScalarField& f, const ScalarField& g) const;
  double norm2_omega(const ScalarField& f) const;

 private:
  const ModelDomain& dom_;
  WeightSpec w_;
  int degree_;
  int n_theta_;
  MomentTable table_;
};

// ---------------------------------------------------------------------------
// experiments for the projection bounds
// ---------------------------------------------------------------------------

struct ProjectionSlopeConfig {
  // depths where degree <= ~32 resolves the holomorphic peaks (their monomial
  // content grows like peak_power / t)
  std::vector<double> t_grid = {0.5, 0.35, 0.25, 0.18};
  int degree = 28;
  int peak_power = 3;
  double slope_band = 0.1;
  NormQuad norm_quad{6, 10, 0, 2, 10};
};

// || P_omega f_t ||_{L^p(delta^beta)} / || f_t ||_{L^p(delta^beta)} for the
// boundary-peak family h_t and its antiholomorphic part; pass if the slope of
// the per-t max ratio stays within the band
EstimateReport projection_norm_experiment(const ModelDomain& dom, const WeightSpec& w, double p,
                                          double beta, const ProjectionSlopeConfig& cfg);

// Lipschitz stability: estimate(P u)/estimate(u) for mollified |Re z1|^alpha
// test functions; bounded ratio rule
EstimateReport lipschitz_projection_experiment(const ModelDomain& dom, const WeightSpec& w,
                                               double alpha, int degree = 24,
                                               double ratio_limit = 10.0, uint64_t seed = 1);

}  // namespace lcft
