#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "ferrysim/config.hpp"
#include "ferrysim/model.hpp"
#include "ferrysim/rng.hpp"

namespace ferrysim {

struct RewardWeights {
  double local = 1.0;
  double ferry = 1.0;
  double global = 0.5;
  double penalty = 0.5;
};

// Per-content, per-epoch feedback counters.
struct RewardRecord {
  std::uint32_t local_hits = 0;      // served from this anchor's cache
  std::uint32_t ferry_credit = 0;    // delta_f: served elsewhere after ferrying
  std::uint32_t global_demand = 0;   // delta_g: foreign requests, ferry-relayed
  std::uint32_t miss_penalties = 0;  // local requests expired to download
};

// Normalized multi-component reward:
// (w_local*hits + w_ferry*delta_f + w_global*delta_g - w_penalty*misses) / total.
double composite_reward(const RewardRecord& record, const RewardWeights& w,
                        std::uint64_t epoch_request_total);

// Demand summary drained from one anchor's outbox by one ferry visit.
struct FerrySummary {
  int ferry_id = 0;
  int source_anchor = 0;
  std::uint64_t pickup_seq = 0;  // per-source drain counter; identifies the visit span
  std::vector<std::pair<ContentId, std::uint32_t>> request_counts;
};

// Credits for contents this anchor contributed that a ferry served elsewhere.
struct FerryCredits {
  std::vector<std::pair<ContentId, std::uint32_t>> served_counts;
};

// Top-k MAB caching agent of one anchor UAV. Arms are contents, k is the
// cache capacity; one pull = holding a content in cache for one epoch.
class TopKAgent {
 public:
  TopKAgent(std::uint32_t total_contents, std::uint32_t k, Strategy strategy,
            double epsilon_initial, double epsilon_decay, double ucb_degree,
            double hybrid_anneal_power, std::uint64_t seed);

  // Select exactly k distinct contents for the coming epoch and make them the
  // current cache. Ties break toward the lower content id.
  const std::vector<ContentId>& select_top_k();

  // Sample-average Q update for a content cached this epoch; rejects others.
  void update_q(ContentId content, double reward);

  // Linear schedule: epsilon <- max(0, epsilon - decay).
  void decay_epsilon();

  // Close the epoch after updates: clears reward records, advances t.
  void end_epoch();

  // Accumulate ferry-relayed feedback; a summary replay for the same
  // (ferry, source, pickup) visit is rejected.
  void merge_global_feedback(const std::vector<FerrySummary>& summaries,
                             const FerryCredits& credits);

  void record_local_hit(ContentId content) { ++records_[content].local_hits; }
  void record_miss_penalty(ContentId content) {
    ++records_[content].miss_penalties;
  }

  // Cached contents ordered by Q descending (id tie-break); the JWS comparand.
  std::vector<ContentId> learnt_sequence() const;

  bool is_cached(ContentId content) const { return cached_[content] != 0; }
  const std::vector<ContentId>& cache() const { return cache_; }
  const RewardRecord& record(ContentId content) const {
    return records_[content];
  }
  double q_value(ContentId content) const { return q_[content]; }
  std::uint64_t pull_count(ContentId content) const { return pulls_[content]; }
  double epsilon() const { return epsilon_; }
  int epoch_index() const { return epoch_; }
  Strategy strategy() const { return strategy_; }

  void write_snapshot_csv(const std::string& path,
                          const std::string& header) const;

 private:
  void select_greedy_slots(const std::vector<double>& score);

  std::uint32_t total_contents_;
  std::uint32_t k_;
  Strategy strategy_;
  double epsilon_;
  double epsilon_decay_;
  double ucb_degree_;
  double hybrid_anneal_power_;
  Rng rng_;

  int epoch_ = 0;  // completed epochs
  std::vector<double> q_;             // by content id
  std::vector<std::uint64_t> pulls_;  // by content id
  std::vector<RewardRecord> records_;
  std::vector<ContentId> cache_;
  std::vector<std::uint8_t> cached_;
  std::set<std::tuple<int, int, std::uint64_t>> seen_summaries_;
};

}  // namespace ferrysim
