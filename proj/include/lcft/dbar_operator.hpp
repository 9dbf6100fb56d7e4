// Numerical dbar of scalar fields (Wirtinger central differences with
// Richardson control), the closedness certificate check, and the
// homotopy-identity verifier  f = sigma dbar(T_K f) - int f ^ P_N.
#pragma once

#include "lcft/quadrature.hpp"

namespace lcft {

struct DbarValue {
  FormCoeffs value{};
  bool warn = false; // Richardson disagreement above 10%
};

// d/dzbar_j u at z via central differences at steps h and h/2
DbarValue dbar_field(const ScalarField& u, const C2& z, double step = 1e-3);

// numeric check of d f_1/dzbar_2 == d f_2/dzbar_1 on sampled interior points;
// updates the certificate to numerically_checked on success
bool check_closedness(const ModelDomain& dom, Form01& f, int n_points = 100,
                      uint64_t seed = 1, double tol_factor = 1e-3);

struct HomotopyResult {
  double residual_rel = 0.0; // |f - sigma dbar(T_K f) + PN-term| / (1 + |f|)
  FormCoeffs reconstructed{};
  bool warn = false;
};

// requires a closedness certificate and an interior point (delta >= 0.05)
HomotopyResult homotopy_residual(const PreparedForm& pf, const C2& z);

struct SolveRow {
  C2 z{};
  cplx u{};
  double residual = 0.0;
  bool warn = false;
};

std::vector<SolveRow> solve_and_report(const PreparedForm& pf, const std::vector<C2>& pts);

}  // namespace lcft
