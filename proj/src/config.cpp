#include "lcft/config.hpp"

#include <cstdio>
#include <sstream>

#include "lcft/rng.hpp"

namespace lcft {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

KernelParams ExperimentConfig::kernel_params(const ModelDomain& dom) const {
  KernelParams p = KernelParams::defaults(dom);
  p.N = kernel_N;
  if (kernel_K0 > 0.0) p.K0 = kernel_K0;
  if (chi_r1 > 0.0) p.chi_r1 = chi_r1;
  if (chi_r2 > 0.0) p.chi_r2 = chi_r2;
  p.chi_d1 = chi_d1;
  p.chi_d2 = chi_d2;
  p.c0 = c0;
  p.validate();
  return p;
}

QuadratureSpec ExperimentConfig::quadrature() const {
  QuadratureSpec q;
  q.base_n = quad_base_n;
  q.shell_levels = quad_shell_levels;
  q.shell_angular = quad_shell_angular;
  q.shell_radial = quad_shell_radial;
  q.jitter_seed = quad_jitter_seed;
  q.validate();
  return q;
}

NormQuad ExperimentConfig::norm_quad() const {
  return NormQuad{norm_alpha, norm_ang, norm_layers, norm_per_layer, norm_focus_n};
}

std::string ExperimentConfig::param_or(const std::string& key, const std::string& fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

double ExperimentConfig::param_num(const std::string& key, double fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : std::stod(it->second);
}

std::string ExperimentConfig::serialize() const {
  std::ostringstream os;
  os << "domain = " << domain << "\n";
  os << "seed = " << seed << "\n";
  os << "output.dir = " << output_dir << "\n";
  os << "kernel.N = " << kernel_N << "\n";
  os << "kernel.K0 = " << fmt17(kernel_K0) << "\n";
  os << "kernel.chi_r1 = " << fmt17(chi_r1) << "\n";
  os << "kernel.chi_r2 = " << fmt17(chi_r2) << "\n";
  os << "kernel.chi_d1 = " << fmt17(chi_d1) << "\n";
  os << "kernel.chi_d2 = " << fmt17(chi_d2) << "\n";
  os << "kernel.c0 = " << fmt17(c0) << "\n";
  os << "quad.base_n = " << quad_base_n << "\n";
  os << "quad.shell_levels = " << quad_shell_levels << "\n";
  os << "quad.shell_angular = " << quad_shell_angular << "\n";
  os << "quad.shell_radial = " << quad_shell_radial << "\n";
  os << "quad.jitter_seed = " << quad_jitter_seed << "\n";
  os << "norm.alpha = " << norm_alpha << "\n";
  os << "norm.ang = " << norm_ang << "\n";
  os << "norm.layers = " << norm_layers << "\n";
  os << "norm.per_layer = " << norm_per_layer << "\n";
  os << "norm.focus_n = " << norm_focus_n << "\n";
  os << "experiment.name = " << experiment << "\n";
  for (const auto& [k, v] : params) os << "experiment.param." << k << " = " << v << "\n";
  return os.str();
}

uint64_t ExperimentConfig::hash() const { return fnv1a(serialize()); }

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw std::invalid_argument("config line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(is, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    auto eq = s.find('=');
    if (eq == std::string::npos) fail("expected 'key = value'");
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    try {
      if (key == "domain") cfg.domain = value;
      else if (key == "seed") cfg.seed = std::stoull(value);
      else if (key == "output.dir") cfg.output_dir = value;
      else if (key == "kernel.N") cfg.kernel_N = std::stoi(value);
      else if (key == "kernel.K0") cfg.kernel_K0 = std::stod(value);
      else if (key == "kernel.chi_r1") cfg.chi_r1 = std::stod(value);
      else if (key == "kernel.chi_r2") cfg.chi_r2 = std::stod(value);
      else if (key == "kernel.chi_d1") cfg.chi_d1 = std::stod(value);
      else if (key == "kernel.chi_d2") cfg.chi_d2 = std::stod(value);
      else if (key == "kernel.c0") cfg.c0 = std::stod(value);
      else if (key == "quad.base_n") cfg.quad_base_n = std::stoi(value);
      else if (key == "quad.shell_levels") cfg.quad_shell_levels = std::stoi(value);
      else if (key == "quad.shell_angular") cfg.quad_shell_angular = std::stoi(value);
      else if (key == "quad.shell_radial") cfg.quad_shell_radial = std::stoi(value);
      else if (key == "quad.jitter_seed") cfg.quad_jitter_seed = std::stoull(value);
      else if (key == "norm.alpha") cfg.norm_alpha = std::stoi(value);
      else if (key == "norm.ang") cfg.norm_ang = std::stoi(value);
      else if (key == "norm.layers") cfg.norm_layers = std::stoi(value);
      else if (key == "norm.per_layer") cfg.norm_per_layer = std::stoi(value);
      else if (key == "norm.focus_n") cfg.norm_focus_n = std::stoi(value);
      else if (key == "experiment.name") cfg.experiment = value;
      else if (key.rfind("experiment.param.", 0) == 0)
        cfg.params[key.substr(17)] = value;
      else fail("unknown key '" + key + "'");
    } catch (const std::invalid_argument& e) {
      if (std::string(e.what()).rfind("config line", 0) == 0) throw;
      fail("bad value for '" + key + "'");
    }
  }
  // materialize validation early (the N invariant names its rule)
  ModelDomain dom = parse_domain_spec(cfg.domain);
  cfg.kernel_params(dom);
  cfg.quadrature();
  return cfg;
}

}  // namespace lcft
