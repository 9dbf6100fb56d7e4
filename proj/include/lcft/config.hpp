// Line-oriented experiment configuration ("section.key = value"), with strict
// key validation, explicit defaults, and byte-stable serialization.
#pragma once

#include <map>
#include <string>

#include "lcft/kernel.hpp"
#include "lcft/norms.hpp"
#include "lcft/quadrature.hpp"

namespace lcft {

struct ExperimentConfig {
  std::string domain = "ellipsoid:1,1";
  uint64_t seed = 1;
  std::string output_dir = "out";

  int kernel_N = 6;
  double kernel_K0 = 4.0; // 0 = calibrate at startup
  double chi_r1 = 0.0;    // 0 = domain default (0.15 diam)
  double chi_r2 = 0.0;
  double chi_d1 = 0.1;
  double chi_d2 = 0.2;
  double c0 = 0.1;

  int quad_base_n = 16;
  int quad_shell_levels = 6;
  int quad_shell_angular = 8;
  int quad_shell_radial = 2;
  uint64_t quad_jitter_seed = 0;

  int norm_alpha = 6;
  int norm_ang = 8;
  int norm_layers = 0;
  int norm_per_layer = 2;
  int norm_focus_n = 10;

  std::string experiment = "";
  std::map<std::string, std::string> params; // experiment.param.* free keys

  KernelParams kernel_params(const ModelDomain& dom) const;
  QuadratureSpec quadrature() const;
  NormQuad norm_quad() const;

  std::string param_or(const std::string& key, const std::string& fallback) const;
  double param_num(const std::string& key, double fallback) const;

  // canonical serialization: every key explicit, fixed order, %.17g numbers
  std::string serialize() const;
  uint64_t hash() const;
};

// throws with the offending line number on unknown keys or bad values
ExperimentConfig parse_config(const std::string& text);

}  // namespace lcft
