#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ferrysim/config.hpp"
#include "ferrysim/experiment.hpp"
#include "ferrysim/preload.hpp"
#include "ferrysim/sim.hpp"

using namespace ferrysim;

int main(int argc, char** argv) {
  CLI::App app{
      "ferrysim - discrete-event simulator for UAV content ferrying with "
      "top-k bandit caching"};

  std::string config_path;
  std::string recipe_name = "custom";
  int seeds = 10;
  int workers = 0;
  std::string out_dir = "out";
  std::string strategy_name = "hybrid";
  double tad = 0.0;
  std::string freeze_benchmark;
  int horizon = 400;
  double lambda = -1.0;
  std::string event_log, trace, dump_plan;

  app.add_option("--config", config_path, "key=value config file");
  app.add_option("--recipe", recipe_name, "fig3|fig4|fig5|custom")
      ->check(CLI::IsMember({"fig3", "fig4", "fig5", "custom"}));
  app.add_option("--seeds", seeds, "number of replication seeds (1..N)")
      ->check(CLI::PositiveNumber);
  app.add_option("--workers", workers, "parallel workers (0 = hardware)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--strategy", strategy_name,
                 "exploration strategy: eps-greedy|ucb|hybrid");
  app.add_option("--tad", tad, "override: single TAD value in seconds");
  app.add_option("--freeze-benchmark", freeze_benchmark,
                 "run with caches frozen to a pre-loading plan: fd|sec|pbc|vbc")
      ->check(CLI::IsMember({"fd", "sec", "pbc", "vbc"}));
  app.add_option("--horizon", horizon, "horizon in epochs")
      ->check(CLI::PositiveNumber);
  app.add_option("--lambda", lambda,
                 "storage segmentation factor for the benchmark plan");
  app.add_option("--event-log", event_log,
                 "write an event log CSV (custom recipe, first seed)");
  app.add_option("--trace", trace,
                 "write a request trace CSV (custom recipe, first seed)");
  app.add_option("--dump-plan", dump_plan,
                 "write the benchmark pre-load plan CSV and exit");
  std::string snapshot_dir;
  int snapshot_every = 0;
  app.add_option("--agent-snapshots", snapshot_dir,
                 "directory for per-epoch agent Q snapshots (custom recipe)");
  app.add_option("--snapshot-every", snapshot_every,
                 "epochs between agent snapshots (with --agent-snapshots)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    ExperimentSpec spec;
    spec.base = config_path.empty() ? SystemConfig{}
                                    : load_config_file(config_path);
    spec.recipe = recipe_from_string(recipe_name);
    spec.strategies = {strategy_from_string(strategy_name)};
    spec.seeds.clear();
    for (int s = 1; s <= seeds; ++s) spec.seeds.push_back(s);
    spec.out_dir = out_dir;
    spec.horizon_epochs = horizon;
    spec.workers = workers;
    if (tad > 0.0) spec.base.tad_values = {tad};
    if (lambda >= 0.0) spec.base.benchmark_lambda = lambda;
    if (!freeze_benchmark.empty()) {
      spec.base.benchmark_policy = preload_policy_from_string(freeze_benchmark);
      spec.frozen = true;
    }
    spec.event_log_path = event_log;
    spec.trace_path = trace;
    spec.snapshot_dir = snapshot_dir;
    spec.snapshot_every =
        snapshot_every > 0 ? snapshot_every : (snapshot_dir.empty() ? 0 : 50);
    spec.base.validate();

    if (!dump_plan.empty()) {
      const auto profiles = build_profiles(spec.base);
      const auto catalog = build_catalog(spec.base);
      const auto plan = build_plan(
          spec.base.benchmark_policy, profiles, catalog,
          spec.base.benchmark_lambda, spec.base.anchor_cache_capacity,
          spec.base.value_kappa);
      char header[128];
      std::snprintf(header, sizeof(header),
                    "config_hash=%016llx policy=%s lambda=%g C_sys=%llu",
                    static_cast<unsigned long long>(spec.base.hash()),
                    to_string(spec.base.benchmark_policy),
                    spec.base.benchmark_lambda,
                    static_cast<unsigned long long>(plan.system_content_count));
      write_plan_csv(plan, dump_plan, header);
      std::printf("plan written to %s (C_sys=%llu)\n", dump_plan.c_str(),
                  static_cast<unsigned long long>(plan.system_content_count));
      return 0;
    }

    run_experiment(spec);
    std::printf("experiment complete, outputs in %s\n", out_dir.c_str());
    return 0;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "runtime failure: %s\n", e.what());
    return 3;
  }
}
