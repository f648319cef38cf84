#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "ferrysim/bandit.hpp"
#include "ferrysim/rng.hpp"

namespace ferrysim {

// Stationary Bernoulli arm bank for exercising the agent outside the
// simulator: arm i pays 1 with probability means[i].
struct SyntheticArmEnvironment {
  std::vector<double> means;

  double sample(std::size_t arm, Rng& rng) const {
    return rng.bernoulli(means[arm]) ? 1.0 : 0.0;
  }

  // True top-k arm set (0-based ids, ascending), the enumeration oracle.
  std::vector<std::size_t> true_top_k(std::size_t k) const {
    std::vector<std::size_t> order(means.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       if (means[a] != means[b]) return means[a] > means[b];
                       return a < b;
                     });
    order.resize(k);
    std::sort(order.begin(), order.end());
    return order;
  }
};

struct SyntheticRunResult {
  std::vector<ContentId> final_selection;  // 1-based arm ids, last epoch
  std::vector<ContentId> belief_top_k;     // top-k by final Q estimate
  double cumulative_regret = 0.0;
  std::vector<double> regret_at;  // one entry per requested checkpoint
};

// Drives one agent against the environment for `horizon` epochs. Regret per
// epoch is the expected gap between the best selectable set mean and the
// chosen set mean, so it is independent of reward noise.
inline SyntheticRunResult run_synthetic(
    const SyntheticArmEnvironment& env, TopKAgent& agent, int horizon,
    std::uint64_t reward_seed, const std::vector<int>& checkpoints = {}) {
  Rng reward_rng(reward_seed);
  SyntheticRunResult out;
  std::vector<double> sorted = env.means;
  std::sort(sorted.rbegin(), sorted.rend());
  double best_set_mean = 0.0;
  std::size_t cp = 0;
  std::vector<ContentId> last;
  for (int t = 0; t < horizon; ++t) {
    const auto& chosen = agent.select_top_k();
    if (t == 0) {
      best_set_mean = std::accumulate(
          sorted.begin(), sorted.begin() + chosen.size(), 0.0);
    }
    double chosen_mean = 0.0;
    for (ContentId id : chosen) chosen_mean += env.means[id - 1];
    out.cumulative_regret += best_set_mean - chosen_mean;
    for (ContentId id : chosen) {
      agent.update_q(id, env.sample(id - 1, reward_rng));
    }
    last = chosen;
    agent.end_epoch();
    agent.decay_epsilon();
    while (cp < checkpoints.size() && t + 1 == checkpoints[cp]) {
      out.regret_at.push_back(out.cumulative_regret);
      ++cp;
    }
  }
  out.final_selection = last;
  std::sort(out.final_selection.begin(), out.final_selection.end());
  // The exploitation set implied by the final estimates, regardless of what
  // exploration chose on the last epoch.
  std::vector<ContentId> by_q(env.means.size());
  std::iota(by_q.begin(), by_q.end(), ContentId{1});
  std::stable_sort(by_q.begin(), by_q.end(), [&](ContentId a, ContentId b) {
    if (agent.q_value(a) != agent.q_value(b)) {
      return agent.q_value(a) > agent.q_value(b);
    }
    return a < b;
  });
  by_q.resize(last.size());
  std::sort(by_q.begin(), by_q.end());
  out.belief_top_k = by_q;
  return out;
}

}  // namespace ferrysim
