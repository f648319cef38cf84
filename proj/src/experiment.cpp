#include "ferrysim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ferrysim/preload.hpp"

namespace ferrysim {

Recipe recipe_from_string(const std::string& name) {
  if (name == "fig3") return Recipe::Fig3;
  if (name == "fig4") return Recipe::Fig4;
  if (name == "fig5") return Recipe::Fig5;
  if (name == "custom") return Recipe::Custom;
  throw ConfigError("unknown recipe '" + name +
                    "' (expected fig3|fig4|fig5|custom)");
}

RunResult simulate(const SystemConfig& config, Strategy strategy, bool frozen,
                   int horizon_epochs, const std::string& event_log_path,
                   const std::string& trace_path,
                   const std::string& snapshot_dir, int snapshot_every) {
  config.validate();
  const auto profiles = build_profiles(config);
  const auto catalog = build_catalog(config);
  const PreloadPlan plan =
      build_plan(config.benchmark_policy, profiles, catalog,
                 config.benchmark_lambda, config.anchor_cache_capacity,
                 config.value_kappa);
  SimOptions options;
  options.frozen = frozen;
  options.frozen_plan = frozen ? &plan : nullptr;
  options.reference_plan = &plan;
  options.strategy = strategy;
  options.horizon_epochs = horizon_epochs;
  options.event_log_path = event_log_path;
  options.trace_path = trace_path;
  options.snapshot_dir = snapshot_dir;
  options.snapshot_every = snapshot_every;
  return run_simulation(config, catalog, profiles, options);
}

double tail_availability(const std::vector<EpochMetrics>& epochs, int window) {
  if (epochs.empty()) return 0.0;
  const std::size_t n = std::min<std::size_t>(window, epochs.size());
  double sum = 0.0;
  for (std::size_t i = epochs.size() - n; i < epochs.size(); ++i) {
    sum += epochs[i].availability();
  }
  return sum / static_cast<double>(n);
}

double tail_jws_anchor(const std::vector<EpochMetrics>& epochs, int window) {
  if (epochs.empty()) return 0.0;
  const std::size_t n = std::min<std::size_t>(window, epochs.size());
  double sum = 0.0;
  for (std::size_t i = epochs.size() - n; i < epochs.size(); ++i) {
    sum += epochs[i].jws_anchor_mean();
  }
  return sum / static_cast<double>(n);
}

double delay_moving_average(const std::vector<EpochMetrics>& epochs,
                            int at_epoch, int window) {
  // Trailing window over the `window` epochs ending at 1-based position
  // at_epoch.
  const int hi = std::min<int>(at_epoch, static_cast<int>(epochs.size()));
  const int lo = std::max(0, hi - window);
  double sum = 0.0;
  int count = 0;
  for (int i = lo; i < hi; ++i) {
    sum += epochs[i].mean_access_delay();
    ++count;
  }
  return count ? sum / count : 0.0;
}

void parallel_runs(std::size_t count, int workers,
                   const std::function<void(std::size_t)>& body) {
  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers <= 0) workers = 1;
  }
  workers = std::min<int>(workers, static_cast<int>(count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::atomic<bool> failed{false};
  std::string first_error;
  std::mutex error_mutex;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (const std::exception& e) {
          std::scoped_lock lock(error_mutex);
          if (!failed.exchange(true)) first_error = e.what();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failed) throw std::runtime_error("worker failed: " + first_error);
}

namespace {

namespace fs = std::filesystem;

// Outputs appear under their final name only when complete; an interrupted
// run leaves .partial files behind instead of truncated CSVs.
template <typename WriteFn>
void write_atomic(const std::string& path, WriteFn&& write) {
  const std::string partial = path + ".partial";
  write(partial);
  fs::rename(partial, path);
}

std::string run_header(const SystemConfig& cfg, const char* mode,
                       Strategy strategy, bool frozen) {
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "config_hash=%016llx seed=%llu strategy=%s mode=%s",
                static_cast<unsigned long long>(cfg.hash()),
                static_cast<unsigned long long>(cfg.rng_seed),
                frozen ? "frozen" : to_string(strategy), mode);
  return buf;
}

std::string agg_header(const SystemConfig& cfg, const char* mode,
                       Strategy strategy, bool frozen,
                       const std::vector<std::uint64_t>& seeds) {
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "config_hash=%016llx seeds=%llu..%llu strategy=%s mode=%s",
                static_cast<unsigned long long>(cfg.hash()),
                static_cast<unsigned long long>(seeds.front()),
                static_cast<unsigned long long>(seeds.back()),
                frozen ? "frozen" : to_string(strategy), mode);
  return buf;
}

// One (strategy|frozen) x seeds batch: per-seed CSVs plus an aggregate.
std::vector<std::vector<EpochMetrics>> run_batch(
    const ExperimentSpec& spec, const SystemConfig& base, Strategy strategy,
    bool frozen, const std::string& stem, const char* mode) {
  std::vector<std::vector<EpochMetrics>> all(spec.seeds.size());
  parallel_runs(spec.seeds.size(), spec.workers, [&](std::size_t i) {
    SystemConfig cfg = base;
    cfg.rng_seed = spec.seeds[i];
    RunResult r = simulate(cfg, strategy, frozen, spec.horizon_epochs);
    std::ostringstream path;
    path << spec.out_dir << '/' << stem << "_seed" << spec.seeds[i] << ".csv";
    write_atomic(path.str(), [&](const std::string& out) {
      write_epoch_csv(r.epochs, out, run_header(cfg, mode, strategy, frozen));
    });
    all[i] = std::move(r.epochs);
  });
  const auto agg = aggregate_epochs(all);
  write_atomic(spec.out_dir + "/" + stem + "_agg.csv",
               [&](const std::string& out) {
                 write_aggregate_csv(
                     agg, out,
                     agg_header(base, mode, strategy, frozen, spec.seeds));
               });
  return all;
}

void write_column_rows(const std::string& path, const std::string& header,
                       const std::vector<std::string>& columns,
                       const std::vector<std::vector<double>>& rows) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open '" + path + "'");
  std::fprintf(f, "# %s\n", header.c_str());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    std::fprintf(f, "%s%s", c ? "," : "", columns[c].c_str());
  }
  std::fprintf(f, "\n");
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c == 0) std::fprintf(f, "%.0f", row[c]);
      else std::fprintf(f, ",%.6f", row[c]);
    }
    std::fprintf(f, "\n");
  }
  std::fclose(f);
}

void write_column_file(const std::string& path, const std::string& header,
                       const std::vector<std::string>& columns,
                       const std::vector<std::vector<double>>& rows) {
  write_atomic(path, [&](const std::string& out) {
    write_column_rows(out, header, columns, rows);
  });
}

void run_fig3(const ExperimentSpec& spec) {
  const std::vector<Strategy> strategies = {
      Strategy::EpsilonGreedy, Strategy::Ucb, Strategy::HybridEpsilonOnUcb};
  std::vector<std::vector<std::vector<EpochMetrics>>> learned;
  for (Strategy s : strategies) {
    learned.push_back(run_batch(spec, spec.base, s, false,
                                std::string("fig3_") + to_string(s), "fig3"));
  }
  auto benchmark =
      run_batch(spec, spec.base, strategies.front(), true, "fig3_benchmark",
                "fig3");

  auto per_epoch_mean = [&](const std::vector<std::vector<EpochMetrics>>& runs,
                            auto getter) {
    std::vector<double> mean(spec.horizon_epochs, 0.0);
    for (const auto& run : runs) {
      for (std::size_t e = 0; e < run.size(); ++e) mean[e] += getter(run[e]);
    }
    for (double& v : mean) v /= static_cast<double>(runs.size());
    return mean;
  };

  auto avail = [](const EpochMetrics& m) { return m.availability(); };
  auto delay = [](const EpochMetrics& m) { return m.mean_access_delay(); };
  for (const char* which : {"availability", "delay"}) {
    const bool is_avail = std::string(which) == "availability";
    std::vector<std::vector<double>> rows(spec.horizon_epochs);
    std::vector<std::vector<double>> cols;
    for (const auto& runs : learned) {
      cols.push_back(is_avail ? per_epoch_mean(runs, avail)
                              : per_epoch_mean(runs, delay));
    }
    cols.push_back(is_avail ? per_epoch_mean(benchmark, avail)
                            : per_epoch_mean(benchmark, delay));
    for (int e = 0; e < spec.horizon_epochs; ++e) {
      rows[e] = {static_cast<double>(e), cols[0][e], cols[1][e], cols[2][e],
                 cols[3][e]};
    }
    write_column_file(
        spec.out_dir + (is_avail ? "/fig3a_availability.csv" : "/fig3b_delay.csv"),
        agg_header(spec.base, "fig3", strategies.front(), false, spec.seeds),
        {"epoch", "eps_greedy", "ucb", "hybrid", "benchmark"}, rows);
  }
}

void run_fig4(const ExperimentSpec& spec) {
  std::vector<double> tads = spec.tad_sweep;
  if (tads.empty()) tads = {300.0, 600.0, 900.0, 1200.0};
  std::vector<std::vector<double>> rows;
  for (double tad : tads) {
    SystemConfig cfg = spec.base;
    cfg.tad_values = {tad};
    std::ostringstream stem;
    stem << "fig4_tad" << static_cast<long long>(tad);
    auto learned = run_batch(spec, cfg, Strategy::HybridEpsilonOnUcb, false,
                             stem.str() + "_hybrid", "fig4");
    auto frozen = run_batch(spec, cfg, Strategy::HybridEpsilonOnUcb, true,
                            stem.str() + "_benchmark", "fig4");
    double lm = 0.0, bm = 0.0;
    for (const auto& run : learned) lm += tail_availability(run, 50);
    for (const auto& run : frozen) bm += tail_availability(run, 50);
    lm /= static_cast<double>(learned.size());
    bm /= static_cast<double>(frozen.size());
    rows.push_back({tad, lm, bm, bm > 0.0 ? lm / bm : 0.0});
  }
  write_column_file(spec.out_dir + "/fig4_availability_vs_tad.csv",
                    agg_header(spec.base, "fig4",
                               Strategy::HybridEpsilonOnUcb, false,
                               spec.seeds),
                    {"tad", "learned_final50", "benchmark_final50", "ratio"},
                    rows);
}

void run_fig5(const ExperimentSpec& spec) {
  std::vector<std::vector<EpochMetrics>> all(spec.seeds.size());
  parallel_runs(spec.seeds.size(), spec.workers, [&](std::size_t i) {
    SystemConfig cfg = spec.base;
    cfg.rng_seed = spec.seeds[i];
    RunResult r = simulate(cfg, Strategy::HybridEpsilonOnUcb, false,
                           spec.horizon_epochs);
    // Per-anchor and per-ferry JWS curves for this seed.
    std::ostringstream pa, pf;
    pa << spec.out_dir << "/fig5_jws_anchor_seed" << spec.seeds[i] << ".csv";
    pf << spec.out_dir << "/fig5_jws_ferry_seed" << spec.seeds[i] << ".csv";
    const std::string header =
        run_header(cfg, "fig5", Strategy::HybridEpsilonOnUcb, false);
    write_atomic(pa.str(), [&](const std::string& out) {
      std::FILE* f = std::fopen(out.c_str(), "w");
      if (!f) throw std::runtime_error("cannot open " + out);
      std::fprintf(f, "# %s\nepoch", header.c_str());
      for (std::size_t a = 0; a < cfg.num_anchor_uavs; ++a) {
        std::fprintf(f, ",anchor_%zu", a);
      }
      std::fprintf(f, "\n");
      for (const auto& m : r.epochs) {
        std::fprintf(f, "%d", m.epoch_index);
        for (double v : m.jws_per_anchor) std::fprintf(f, ",%.6f", v);
        std::fprintf(f, "\n");
      }
      std::fclose(f);
    });
    write_atomic(pf.str(), [&](const std::string& out) {
      std::FILE* f = std::fopen(out.c_str(), "w");
      if (!f) throw std::runtime_error("cannot open " + out);
      std::fprintf(f, "# %s\nepoch", header.c_str());
      for (std::size_t fe = 0; fe < cfg.num_ferry_uavs; ++fe) {
        std::fprintf(f, ",ferry_%zu", fe);
      }
      std::fprintf(f, "\n");
      for (const auto& m : r.epochs) {
        std::fprintf(f, "%d", m.epoch_index);
        for (double v : m.jws_per_ferry) std::fprintf(f, ",%.6f", v);
        std::fprintf(f, "\n");
      }
      std::fclose(f);
    });
    all[i] = std::move(r.epochs);
  });
  const auto agg = aggregate_epochs(all);
  write_atomic(spec.out_dir + "/fig5_agg.csv", [&](const std::string& out) {
    write_aggregate_csv(agg, out,
                        agg_header(spec.base, "fig5",
                                   Strategy::HybridEpsilonOnUcb, false,
                                   spec.seeds));
  });
}

void run_custom(const ExperimentSpec& spec) {
  for (Strategy s : spec.strategies) {
    std::string stem = std::string("custom_") +
                       (spec.frozen ? "benchmark" : to_string(s));
    run_batch(spec, spec.base, s, spec.frozen, stem, "custom");
    if (spec.frozen) break;  // frozen batch does not depend on the strategy
  }
  if (!spec.event_log_path.empty() || !spec.trace_path.empty() ||
      (!spec.snapshot_dir.empty() && spec.snapshot_every > 0)) {
    SystemConfig cfg = spec.base;
    cfg.rng_seed = spec.seeds.front();
    if (!spec.snapshot_dir.empty()) {
      fs::create_directories(spec.snapshot_dir);
    }
    simulate(cfg, spec.strategies.front(), spec.frozen, spec.horizon_epochs,
             spec.event_log_path, spec.trace_path, spec.snapshot_dir,
             spec.snapshot_every);
  }
}

}  // namespace

void run_experiment(const ExperimentSpec& spec) {
  if (spec.seeds.empty()) throw ConfigError("experiment: need >= 1 seed");
  if (spec.strategies.empty()) {
    throw ConfigError("experiment: need >= 1 strategy");
  }
  if (spec.horizon_epochs < 1) {
    throw ConfigError("experiment: horizon must be >= 1 epoch");
  }
  spec.base.validate();
  fs::create_directories(spec.out_dir);
  {
    std::ofstream echo(spec.out_dir + "/resolved_config.txt");
    if (!echo) {
      throw std::runtime_error("output directory not writable: " +
                               spec.out_dir);
    }
    echo << spec.base.canonical_text();
  }
  switch (spec.recipe) {
    case Recipe::Fig3: run_fig3(spec); break;
    case Recipe::Fig4: run_fig4(spec); break;
    case Recipe::Fig5: run_fig5(spec); break;
    case Recipe::Custom: run_custom(spec); break;
  }
}

}  // namespace ferrysim
