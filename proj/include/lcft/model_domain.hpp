// Model domains E(m1,m2) = { |z1|^(2 m1) + |z2|^(2 m2) < 1 } in C^2:
// defining function, analytic derivatives, directional jets, boundary
// distance and deterministic interior sampling.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcft/complex2.hpp"

namespace lcft {

struct RhoDerivatives {
  C2 grad;                          // d rho / d z_i (holomorphic gradient)
  std::array<double, 2> hess_mixed; // d^2 rho / dz_i dzbar_i (off-diagonal vanishes)
  std::array<cplx, 2> hess_holo;    // d^2 rho / dz_i^2      (off-diagonal vanishes)
};

struct BoundaryFoot {
  double delta = 0.0; // Euclidean distance to the boundary
  C2 foot{};          // nearest boundary point
};

// Taylor coefficients c[a][b] of lambda -> rho(base + lambda dir) - rho(base),
// exact for the polynomial defining function. Orders run 0 <= a+b <= 2*max(m_i)
// with c[0][0] = 0.
class DirectionalJet {
 public:
  static constexpr int kMaxOrder = 8; // supports exponents m_i <= 4

  C2 base{};
  C2 dir{};
  int max_order = 2;
  cplx c[kMaxOrder + 1][kMaxOrder + 1] = {};

  // exact polynomial evaluation of rho(base + lambda dir) - rho(base)
  double eval(cplx lambda) const;

  // max over n_angles equispaced points of the increment on |lambda| = r
  double max_on_circle(double r, int n_angles) const;
};

class ModelDomain {
 public:
  ModelDomain(int m1, int m2);

  int m1() const { return m1_; }
  int m2() const { return m2_; }
  int type() const { return 2 * std::max(m1_, m2_); } // finite type of the boundary
  double diameter() const { return diameter_; }
  double grad_max() const { return grad_max_; } // sup of |grad rho| over the closure

  double rho(const C2& z) const;
  RhoDerivatives rho_derivatives(const C2& z, int order = 2) const;

  // boundary radius along the direction (a1,a2), a_i >= 0, a1^2+a2^2=1
  double boundary_radius(double a1, double a2) const;

  // Euclidean distance to the boundary with the nearest boundary point.
  // The domain is Reinhardt, so the 4d problem reduces to the distance from
  // (|z1|,|z2|) to the curve r1^(2m1) + r2^(2m2) = 1 in the first quadrant.
  BoundaryFoot distance_to_boundary(const C2& z) const;
  double delta(const C2& z) const; // throws if z is outside the closed domain

  DirectionalJet directional_jet(const C2& base, const C2& unit_dir) const;

  // deterministic pseudo-random interior points; when concentration_t is set,
  // the points satisfy delta in [t/2, 2t] near the reference boundary point
  std::vector<C2> sample_interior(int count, uint64_t seed,
                                  std::optional<double> concentration_t = std::nullopt) const;

  // fixed reference boundary point for concentration experiments: the
  // boundary hit of the direction (1,1)/sqrt(2)
  C2 reference_boundary_point() const;

  std::string spec_string() const;

 private:
  int m1_;
  int m2_;
  double diameter_;
  double grad_max_;
};

// parses "ellipsoid:m1,m2"
ModelDomain parse_domain_spec(const std::string& spec);

}  // namespace lcft
