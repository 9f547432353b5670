// geo-schwarz: run endpoint-geodesic benchmarks and the acceptance suite.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "geoschwarz/bench.hpp"
#include "geoschwarz/verify.hpp"

namespace gs = geoschwarz;

namespace {

struct Overrides {
  std::optional<double> tol;
  std::optional<int> max_iters;
  std::vector<std::string> methods;
  bool no_timing = false;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
};

void apply(const Overrides& o, gs::ExperimentConfig& cfg) {
  if (o.tol) cfg.tol = *o.tol;
  if (o.max_iters) {
    cfg.max_iters = *o.max_iters;
    cfg.newton_max_iters = *o.max_iters;
    cfg.shooting_max_iters = *o.max_iters;
  }
  if (!o.methods.empty()) {
    cfg.methods.clear();
    for (const auto& m : o.methods) cfg.methods.push_back(gs::parse_method(m));
  }
  if (o.no_timing) cfg.record_timing = false;
  if (o.out) cfg.output_dir = *o.out;
  if (o.seed) {
    // Keep the init perturbation tied to the endpoint seed.
    if (cfg.init.kind == gs::InitMode::Kind::perturbed)
      cfg.init.seed = *o.seed + (cfg.init.seed - cfg.seed);
    cfg.seed = *o.seed;
  }
}

int run_all(std::vector<gs::ExperimentConfig> configs, const Overrides& o) {
  bool all_ok = true;
  for (auto& cfg : configs) {
    apply(o, cfg);
    std::printf("%s  %s %s  m=%d  distance=%.6g  tol=%.1e\n",
                cfg.experiment_id.c_str(), cfg.manifold.name().c_str(),
                cfg.manifold.dims().c_str(), cfg.m, cfg.distance,
                cfg.resolved_tol());
    for (const auto& run : gs::run_experiment(cfg)) {
      const auto& rows = run.record.rows;
      const double res = rows.empty() ? 0.0 : rows.back().residual_inf;
      const double ms = rows.empty() ? 0.0 : rows.back().wall_time_ms;
      std::printf("  %-16s iters=%-6d residual_inf=%-10.3e time=%.1f ms  %s\n",
                  gs::to_string(run.method).c_str(), run.record.iterations(), res,
                  ms, run.record.status.c_str());
      std::printf("  %-16s -> %s\n", "", run.csv_path.string().c_str());
      std::fflush(stdout);
      all_ok = all_ok && run.record.converged;
    }
  }
  return all_ok ? 0 : 2;
}

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--tol", o.tol, "Residual tolerance (on ||F||_inf)");
  cmd->add_option("--max-iters", o.max_iters, "Iteration cap for every method");
  cmd->add_option("--methods", o.methods,
                  "Subset of leapfrog_gs, leapfrog_jacobi, newton_schwarz, "
                  "global_shooting");
  cmd->add_flag("--no-timing", o.no_timing,
                "Leave wall_time_ms empty so reruns are byte-identical");
  cmd->add_option("--out", o.out, "Output directory for CSVs");
  cmd->add_option("--seed", o.seed, "Endpoint seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Endpoint geodesics by leapfrog and Newton-Schwarz"};
  app.require_subcommand(1);

  Overrides overrides;
  std::string config_path;
  auto* run = app.add_subcommand("run", "Run experiments from a YAML config");
  run->add_option("--config,-c", config_path, "Config file")->required()->check(
      CLI::ExistingFile);
  add_overrides(run, overrides);

  std::string preset_name;
  auto* preset = app.add_subcommand("preset", "Run a built-in experiment set");
  preset->add_option("name", preset_name, "fig2 | fig3 | fig4 | fig4-desk")
      ->required()
      ->check(CLI::IsMember({"fig2", "fig3", "fig4", "fig4-desk"}));
  add_overrides(preset, overrides);

  std::vector<std::string> ids;
  std::string workdir;
  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  verify->add_option("--only", ids, "Criterion ids (default: all)");
  verify->add_option("--workdir", workdir, "Scratch directory for CSVs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return run_all(gs::load_config_file(config_path), overrides);
    if (*preset) return run_all(gs::preset(preset_name), overrides);
    if (*verify) {
      const auto results =
          workdir.empty() ? gs::run_acceptance(ids) : gs::run_acceptance(ids, workdir);
      bool ok = true;
      for (const auto& r : results) {
        std::printf("%s %s: %s (%.1f s) %s\n", r.passed ? "PASS" : "FAIL",
                    r.id.c_str(), r.title.c_str(), r.seconds, r.detail.c_str());
        ok = ok && r.passed;
      }
      return ok ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
