#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ferrysim/config.hpp"
#include "ferrysim/metrics.hpp"
#include "ferrysim/sim.hpp"

namespace ferrysim {

enum class Recipe { Fig3, Fig4, Fig5, Custom };

Recipe recipe_from_string(const std::string& name);

struct ExperimentSpec {
  SystemConfig base;
  Recipe recipe = Recipe::Custom;
  std::vector<Strategy> strategies = {Strategy::HybridEpsilonOnUcb};
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<double> tad_sweep;  // empty = keep config tad_values
  std::string out_dir = "out";
  int horizon_epochs = 400;
  int workers = 0;      // 0 = hardware concurrency
  bool frozen = false;  // custom recipe: run the frozen benchmark instead
  std::string event_log_path;  // custom, single run only
  std::string trace_path;      // custom, single run only
  std::string snapshot_dir;    // custom, single run only
  int snapshot_every = 0;
};

// One simulation under a fully resolved config. Builds profiles, catalog and
// the benchmark plan from the config; frozen runs pin caches to that plan.
RunResult simulate(const SystemConfig& config, Strategy strategy, bool frozen,
                   int horizon_epochs, const std::string& event_log_path = "",
                   const std::string& trace_path = "",
                   const std::string& snapshot_dir = "",
                   int snapshot_every = 0);

// Convenience for trend checks: mean epoch availability over the last
// `window` epochs.
double tail_availability(const std::vector<EpochMetrics>& epochs, int window);
double tail_jws_anchor(const std::vector<EpochMetrics>& epochs, int window);
// Trailing moving average of mean access delay at a 1-based epoch position.
double delay_moving_average(const std::vector<EpochMetrics>& epochs,
                            int at_epoch, int window);

// Runs the recipe, writes per-run and aggregate CSVs plus the resolved
// config echo under spec.out_dir. Throws on failure.
void run_experiment(const ExperimentSpec& spec);

// Map-style parallel driver used by the runner and the acceptance suite.
void parallel_runs(std::size_t count, int workers,
                   const std::function<void(std::size_t)>& body);

}  // namespace ferrysim
