// Weighted L^p norms over the domain with boundary-layer stratification, and
// the pointwise regularity estimators (Lipschitz quotients, BMO oscillation).
#pragma once

#include <functional>
#include <limits>
#include <optional>

#include "lcft/forms.hpp"
#include "lcft/model_domain.hpp"

namespace lcft {

struct WeightedLpSpec {
  double p = 2.0; // use infinity() for the sup norm
  double gamma = 0.0;

  void validate() const;
  static double infinity() { return std::numeric_limits<double>::infinity(); }
};

struct NormQuad {
  int n_alpha = 8;
  int n_ang = 8;       // beta and gamma resolutions
  int layers = 0;      // dyadic boundary layers; 0 = auto from gamma
  int per_layer = 2;   // Gauss points per layer
  int focus_n = 10;    // nodes per real dimension of the focus-box grid

  NormQuad refined() const;
};

// magnitude field |F|(z); forms enter through their coefficient norm
using MagnitudeField = std::function<double(const C2&)>;

MagnitudeField magnitude(const ScalarField& u);
MagnitudeField magnitude(const Form01& f);

// A field sampled once over the composite norm grid (star grid plus optional
// focus box with a smooth partition of unity); any number of (p, gamma)
// norms can then be taken from the cached samples.
class FieldOnGrid {
 public:
  FieldOnGrid(const ModelDomain& dom, const MagnitudeField& field, const NormQuad& quad,
              int layers, const std::optional<SupportBox>& focus);

  double lp(double p, double gamma) const; // throws on layer divergence
  double sup() const;
  size_t node_count() const { return star_v_.size() + focus_v_.size(); }

 private:
  std::vector<double> star_v_, star_w_, star_d_, star_loc_;
  std::vector<int> star_layer_;
  std::vector<double> focus_v_, focus_w_, focus_d_, focus_loc_;
  int layers_ = 0;
};

// ( int_Omega |F|^p delta^gamma dlambda )^{1/p} on a star-shaped grid with
// dyadic radial layers toward the boundary; p = inf gives the sampled sup.
// When a focus box is given, a smooth partition of unity adds a local grid
// around it (for boundary-concentrated fields). Throws "weight layering
// diverged" when the deepest layer contributions fail the ratio test.
double weighted_lp_norm(const ModelDomain& dom, const MagnitudeField& field,
                        const WeightedLpSpec& spec, const NormQuad& quad = {},
                        const std::optional<SupportBox>& focus = std::nullopt);

// max over stratified pairs of |u(z)-u(w)| / |z-w|^alpha, dyadic separation
// bins from bin_hi down to bin_lo
double lipschitz_estimate(const ModelDomain& dom, const ScalarField& u, double alpha,
                          int pairs_per_bin = 120, double bin_lo = 1e-3, double bin_hi = 0.5,
                          uint64_t seed = 1);

// max over sampled interior balls of the mean oscillation (1/|B|) int_B |u - u_B|;
// ball centers reach depths down to min_depth
double bmo_estimate(const ModelDomain& dom, const ScalarField& u, int n_balls = 40,
                    int nodes_per_ball = 200, uint64_t seed = 1, double min_depth = 1e-3);

}  // namespace lcft
