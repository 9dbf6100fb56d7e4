// Command-line entry point: subcommands mirror the experiment registry, and
// `run <experiment>` executes any registered experiment from a config file or
// inline overrides.
#include <cstdio>
#include <cstdlib>

#include "CLI11.hpp"
#include "lcft/registry.hpp"

using namespace lcft;

namespace {

int execute(ExperimentConfig cfg) {
  if (const char* env = std::getenv("LCFT_OUTPUT_DIR")) cfg.output_dir = env;
  ExperimentOutcome out = run_experiment(cfg);
  std::printf("%s\n", out.summary.c_str());
  return out.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"anisotropic dbar and Bergman toolkit on model domains in C^2"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  std::string config_path;
  app.add_option("--config", config_path, "config file (section.key = value lines)");
  app.add_option("--domain", cfg.domain, "domain spec, e.g. ellipsoid:1,2");
  app.add_option("--seed", cfg.seed, "global seed");
  app.add_option("--out", cfg.output_dir, "output directory");
  app.add_option("--N", cfg.kernel_N, "kernel weight exponent");
  app.add_option("--K0", cfg.kernel_K0, "support constant");
  app.add_option("--quad", cfg.quad_base_n, "quadrature base resolution");

  std::vector<std::string> kv;
  app.add_option("--param", kv, "experiment parameter key=value (repeatable)");

  auto add_leaf = [&](CLI::App* parent, const std::string& name, const std::string& exp,
                      const std::string& desc) {
    CLI::App* sub = parent->add_subcommand(name, desc);
    sub->fallthrough();
    sub->callback([&cfg, exp]() { cfg.experiment = exp; });
    return sub;
  };

  CLI::App* geom = app.add_subcommand("geom", "anisotropic geometry queries");
  geom->fallthrough();
  geom->require_subcommand(1);
  add_leaf(geom, "tau", "geom-tau", "tau(zeta, v, eps) sweep");
  add_leaf(geom, "basis", "geom-basis", "extremal frame dump");
  add_leaf(geom, "pdist", "geom-pdist", "pseudo-distance between two points");

  CLI::App* kernel = app.add_subcommand("kernel", "kernel diagnostics");
  kernel->fallthrough();
  kernel->require_subcommand(1);
  add_leaf(kernel, "check-k0", "kernel-check-k0", "calibrate the support constant");
  add_leaf(kernel, "bounds", "kernel-bounds", "dyadic shell bounds of K1");

  CLI::App* solve = app.add_subcommand("solve", "solution operator");
  solve->fallthrough();
  solve->require_subcommand(1);
  add_leaf(solve, "homotopy", "solve-homotopy", "homotopy identity residuals");
  add_leaf(solve, "field", "solve-field", "solution field on a slice grid");

  CLI::App* est = app.add_subcommand("estimate", "weighted estimate experiments");
  est->fallthrough();
  est->require_subcommand(1);
  add_leaf(est, "lp-gain", "estimate-lp-gain", "concentration-family gain ratios");
  add_leaf(est, "schur", "estimate-schur", "Schur test of the kernel");
  add_leaf(est, "nevanlinna", "estimate-nevanlinna", "weighted L1 solution estimate");
  add_leaf(est, "dyadic", "estimate-dyadic", "dyadic integral lemmas");
  add_leaf(est, "lipschitz", "estimate-lipschitz", "Lipschitz estimator on T_K data");
  add_leaf(est, "bmo", "estimate-bmo", "BMO estimator on T_K data");

  CLI::App* berg = app.add_subcommand("bergman", "weighted Bergman projection");
  berg->fallthrough();
  berg->require_subcommand(1);
  add_leaf(berg, "moments", "bergman-moments", "monomial moment table");
  add_leaf(berg, "project-norm", "bergman-project-norm", "projection norm ratios");
  add_leaf(berg, "lipschitz", "bergman-lipschitz", "Lipschitz stability of the projection");

  CLI::App* runner = app.add_subcommand("run", "run a named experiment");
  runner->fallthrough();
  std::string exp_name;
  runner->add_option("name", exp_name, "experiment name (e.g. acceptance-suite)")->required();
  runner->callback([&cfg, &exp_name]() { cfg.experiment = exp_name; });

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) {
      std::string exp = cfg.experiment;
      std::string keep_out = cfg.output_dir;
      auto base = parse_config(read_text_file(config_path));
      cfg = base;
      if (!exp.empty()) cfg.experiment = exp;
      if (keep_out != "out") cfg.output_dir = keep_out;
    }
    for (const auto& item : kv) {
      auto eq = item.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("--param expects key=value, got " + item);
      cfg.params[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return execute(cfg);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
