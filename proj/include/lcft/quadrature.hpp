// Quadrature for the kernel integrals: a cached source grid over the domain
// (or the data's support box) plus dyadic spherical shells centered at the
// evaluation point, blended by a smooth partition of unity around the
// integrable |z-zeta|^{-1} kernel singularity. All reductions are fixed-order
// pairwise sums, so results do not depend on the number of worker threads.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lcft/forms.hpp"
#include "lcft/kernel.hpp"

namespace lcft {

struct QuadratureSpec {
  int base_n = 16;      // nodes per dimension of the source grid
  int shell_levels = 6; // dyadic radial shells around the singularity
  int shell_angular = 8;
  int shell_radial = 2; // Gauss points per shell
  uint64_t jitter_seed = 0;

  void validate() const;
  QuadratureSpec refined() const;   // next level: double base_n, one more shell
  QuadratureSpec coarsened() const; // previous level
};

// deterministic parallel map: fn(i) for i in [0, n), contiguous chunks
void parallel_for(size_t n, const std::function<void(size_t)>& fn);
int worker_count();

double pairwise_sum(std::span<const double> v);
cplx pairwise_sum(std::span<const cplx> v);

struct SourceNode {
  ZetaData zd;
  FormCoeffs f;
  double w = 0.0;
};

struct TKResult {
  cplx value{};
  cplx coarse{};
  bool warn = false; // refinement disagreement beyond 5%
};

struct PNResult {
  std::array<cplx, 2> value{};
  std::array<cplx, 2> coarse{};
  bool warn = false;
};

// A form with its cached integration grid. Building the grid evaluates the
// coefficients and the per-node domain data once; apply_* then only runs the
// z-dependent kernel factors.
class PreparedForm {
 public:
  PreparedForm(const ModelDomain& dom, const KernelParams& params, const Form01& f,
               const QuadratureSpec& quad,
               const KernelNormalization& nrm = calibrated_normalization());

  const ModelDomain& domain() const { return dom_; }
  const KernelParams& params() const { return params_; }
  const Form01& form() const { return form_; }
  const QuadratureSpec& quad() const { return quad_; }

  // T_K f(z) = int f ^ K1(z, .): grid part blended with shell part around z
  TKResult apply_TK(const C2& z) const;
  // int f ^ P_N(z, .): smooth integrand, grid only
  PNResult apply_PN(const C2& z) const;

  // single-resolution evaluations (no refinement companion), for norm sweeps
  cplx tk_value(const C2& z) const;
  std::array<cplx, 2> pn_value(const C2& z) const;

  size_t node_count() const { return nodes_.size(); }

 private:
  cplx tk_on(const std::vector<SourceNode>& nodes, const QuadratureSpec& q, const C2& z) const;
  std::array<cplx, 2> pn_on(const std::vector<SourceNode>& nodes, const C2& z) const;
  double shell_cap(const C2& z) const;

  const ModelDomain& dom_;
  KernelParams params_;
  Form01 form_;
  QuadratureSpec quad_;
  KernelNormalization nrm_;
  std::vector<SourceNode> nodes_;
  std::vector<SourceNode> coarse_nodes_;
};

// single-shot convenience wrappers (the spec-level operations)
TKResult apply_TK(const ModelDomain& dom, const KernelParams& params, const Form01& f,
                  const C2& z, const QuadratureSpec& quad);
PNResult apply_PN(const ModelDomain& dom, const KernelParams& params, const Form01& f,
                  const C2& z, const QuadratureSpec& quad);

// builds the source node list; with kernel params the boundary distance is
// resolved only where the depth cutoff needs it (exact otherwise)
std::vector<SourceNode> build_source_nodes(const ModelDomain& dom, const Form01& f,
                                           const QuadratureSpec& quad,
                                           const KernelParams* kp = nullptr);

}  // namespace lcft
