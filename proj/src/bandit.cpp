#include "ferrysim/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace ferrysim {

double composite_reward(const RewardRecord& record, const RewardWeights& w,
                        std::uint64_t epoch_request_total) {
  if (epoch_request_total == 0) {
    throw std::invalid_argument("composite_reward: epoch_request_total == 0");
  }
  const double raw = w.local * record.local_hits +
                     w.ferry * record.ferry_credit +
                     w.global * record.global_demand -
                     w.penalty * record.miss_penalties;
  return raw / static_cast<double>(epoch_request_total);
}

TopKAgent::TopKAgent(std::uint32_t total_contents, std::uint32_t k,
                     Strategy strategy, double epsilon_initial,
                     double epsilon_decay, double ucb_degree,
                     double hybrid_anneal_power, std::uint64_t seed)
    : total_contents_(total_contents),
      k_(k),
      strategy_(strategy),
      epsilon_(epsilon_initial),
      epsilon_decay_(epsilon_decay),
      ucb_degree_(ucb_degree),
      hybrid_anneal_power_(hybrid_anneal_power),
      rng_(seed),
      q_(total_contents + 1, 0.0),
      pulls_(total_contents + 1, 0),
      records_(total_contents + 1),
      cached_(total_contents + 1, 0) {
  if (k == 0 || k > total_contents) {
    throw std::invalid_argument("TopKAgent: k must be in [1, total_contents]");
  }
}

void TopKAgent::select_greedy_slots(const std::vector<double>& score) {
  // Epsilon-greedy slot rule over an arbitrary score vector: each of the k
  // slots independently explores with probability epsilon.
  std::vector<ContentId> by_score(total_contents_);
  for (std::uint32_t i = 0; i < total_contents_; ++i) by_score[i] = i + 1;
  std::stable_sort(by_score.begin(), by_score.end(),
                   [&](ContentId a, ContentId b) {
                     if (score[a] != score[b]) return score[a] > score[b];
                     return a < b;
                   });

  std::vector<ContentId> pool(by_score);  // unchosen contents, any order
  std::vector<std::uint32_t> pool_pos(total_contents_ + 1);
  for (std::uint32_t i = 0; i < pool.size(); ++i) pool_pos[pool[i]] = i;
  auto pool_remove = [&](ContentId id) {
    const std::uint32_t pos = pool_pos[id];
    pool[pos] = pool.back();
    pool_pos[pool[pos]] = pos;
    pool.pop_back();
  };

  std::size_t cursor = 0;
  for (std::uint32_t slot = 0; slot < k_; ++slot) {
    ContentId pick;
    if (rng_.bernoulli(epsilon_)) {
      pick = pool[rng_.below(pool.size())];
    } else {
      while (cached_[by_score[cursor]]) ++cursor;
      pick = by_score[cursor];
    }
    cached_[pick] = 1;
    pool_remove(pick);
    cache_.push_back(pick);
  }
}

const std::vector<ContentId>& TopKAgent::select_top_k() {
  std::fill(cached_.begin(), cached_.end(), std::uint8_t{0});
  cache_.clear();
  cache_.reserve(k_);

  const double t = static_cast<double>(epoch_ + 1);
  const double log_t = std::log(t);

  switch (strategy_) {
    case Strategy::EpsilonGreedy: {
      select_greedy_slots(q_);
      break;
    }
    case Strategy::Ucb:
    case Strategy::HybridEpsilonOnUcb: {
      // Hybrid anneals the confidence bonus with the epsilon schedule so the
      // UCB-driven exploration of early epochs fades into pure exploitation.
      const double bonus_scale =
          strategy_ == Strategy::Ucb
              ? ucb_degree_
              : ucb_degree_ * std::pow(epsilon_, hybrid_anneal_power_);
      // Never-cached contents carry an unbounded bonus: selected first,
      // lowest id first.
      for (ContentId id = 1; id <= total_contents_ && cache_.size() < k_;
           ++id) {
        if (pulls_[id] == 0) {
          cached_[id] = 1;
          cache_.push_back(id);
        }
      }
      if (cache_.size() < k_) {
        std::vector<ContentId> rest;
        rest.reserve(total_contents_);
        std::vector<double> score(total_contents_ + 1, 0.0);
        for (ContentId id = 1; id <= total_contents_; ++id) {
          if (cached_[id]) continue;
          score[id] = q_[id] + bonus_scale *
                                   std::sqrt(log_t /
                                             static_cast<double>(pulls_[id]));
          rest.push_back(id);
        }
        const std::size_t need = k_ - cache_.size();
        auto better = [&](ContentId a, ContentId b) {
          if (score[a] != score[b]) return score[a] > score[b];
          return a < b;
        };
        std::partial_sort(rest.begin(), rest.begin() + need, rest.end(),
                          better);
        for (std::size_t i = 0; i < need; ++i) {
          cached_[rest[i]] = 1;
          cache_.push_back(rest[i]);
        }
      }
      break;
    }
  }
  return cache_;
}

void TopKAgent::update_q(ContentId content, double reward) {
  if (!cached_[content]) {
    throw std::invalid_argument(
        "update_q: content was not cached this epoch");
  }
  const std::uint64_t n = ++pulls_[content];
  q_[content] += (reward - q_[content]) / static_cast<double>(n);
}

void TopKAgent::decay_epsilon() {
  epsilon_ = std::max(0.0, epsilon_ - epsilon_decay_);
}

void TopKAgent::end_epoch() {
  ++epoch_;
  std::fill(records_.begin(), records_.end(), RewardRecord{});
}

void TopKAgent::merge_global_feedback(
    const std::vector<FerrySummary>& summaries, const FerryCredits& credits) {
  for (const auto& s : summaries) {
    if (!seen_summaries_.emplace(s.ferry_id, s.source_anchor, s.pickup_seq)
             .second) {
      throw std::invalid_argument(
          "merge_global_feedback: duplicate summary for the same visit");
    }
    for (const auto& [content, count] : s.request_counts) {
      records_[content].global_demand += count;
    }
  }
  for (const auto& [content, count] : credits.served_counts) {
    records_[content].ferry_credit += count;
  }
}

std::vector<ContentId> TopKAgent::learnt_sequence() const {
  std::vector<ContentId> seq = cache_;
  std::stable_sort(seq.begin(), seq.end(), [&](ContentId a, ContentId b) {
    if (q_[a] != q_[b]) return q_[a] > q_[b];
    return a < b;
  });
  return seq;
}

void TopKAgent::write_snapshot_csv(const std::string& path,
                                   const std::string& header) const {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open snapshot file '" + path + "'");
  if (!header.empty()) std::fprintf(f, "# %s\n", header.c_str());
  std::fprintf(f, "content_id,q,pull_count\n");
  for (ContentId id = 1; id <= total_contents_; ++id) {
    std::fprintf(f, "%u,%.9g,%llu\n", id, q_[id],
                 static_cast<unsigned long long>(pulls_[id]));
  }
  std::fclose(f);
}

}  // namespace ferrysim
