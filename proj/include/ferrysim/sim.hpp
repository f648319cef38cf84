#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ferrysim/bandit.hpp"
#include "ferrysim/config.hpp"
#include "ferrysim/metrics.hpp"
#include "ferrysim/model.hpp"
#include "ferrysim/preload.hpp"

namespace ferrysim {

enum class EventKind : int {
  // Tie priority at equal timestamps, low first; a ferry arriving exactly at
  // a request's TAD expiry serves it, and anything landing exactly on an
  // epoch boundary still belongs to the closing epoch.
  FerryArrival = 0,
  RequestArrival = 1,
  TadExpiry = 2,
  FerryDeparture = 3,
  EpochBoundary = 4,
};

struct SimOptions {
  bool frozen = false;  // caches pinned to frozen_plan, no learning
  const PreloadPlan* frozen_plan = nullptr;
  const PreloadPlan* reference_plan = nullptr;  // JWS reference, required
  Strategy strategy = Strategy::HybridEpsilonOnUcb;
  int horizon_epochs = 400;
  std::string event_log_path;  // empty = no event log
  std::string trace_path;      // empty = no request trace
  // Agent snapshot export: every N epoch boundaries, one CSV per anchor
  // (content_id, q, pull_count) under snapshot_dir. 0 disables.
  std::string snapshot_dir;
  int snapshot_every = 0;
};

struct AnchorTotals {
  std::uint64_t requests = 0;
  std::uint64_t resolved = 0;
  std::uint64_t local_hits = 0;
  std::uint64_t ferry_serves = 0;
  std::uint64_t downloads = 0;
  std::uint64_t refill_downloads = 0;
};

struct RunResult {
  std::vector<EpochMetrics> epochs;
  std::vector<AnchorTotals> per_anchor;  // cumulative over the run
  std::uint64_t total_requests = 0;
  std::uint64_t total_resolved = 0;
  std::uint64_t total_local_hits = 0;
  std::uint64_t total_ferry_serves = 0;
  std::uint64_t total_downloads = 0;
  std::uint64_t total_refill_downloads = 0;
  // Final learnt sequences per anchor (plan order when frozen).
  std::vector<std::vector<ContentId>> final_sequences;

  double availability() const {
    return total_resolved ? static_cast<double>(total_local_hits +
                                                total_ferry_serves) /
                                static_cast<double>(total_resolved)
                          : 0.0;
  }
};

RunResult run_simulation(const SystemConfig& config,
                         const ContentCatalog& catalog,
                         const std::vector<CommunityProfile>& profiles,
                         const SimOptions& options);

// Profiles for the configured heterogeneity mode under the config seed.
std::vector<CommunityProfile> build_profiles(const SystemConfig& config);
ContentCatalog build_catalog(const SystemConfig& config);

}  // namespace ferrysim
