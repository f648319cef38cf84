#include "ferrysim/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ferrysim {

std::vector<double> zipf_pmf(double alpha, std::size_t total_contents) {
  if (total_contents == 0) {
    throw std::invalid_argument("zipf_pmf: total_contents must be >= 1");
  }
  if (alpha < 0.0) {
    throw std::invalid_argument("zipf_pmf: alpha must be >= 0");
  }
  std::vector<double> pmf(total_contents);
  for (std::size_t i = 0; i < total_contents; ++i) {
    pmf[i] = std::pow(1.0 / static_cast<double>(i + 1), alpha);
  }
  // Neumaier summation keeps the normalization error well under 1e-12 even
  // for large catalogs.
  double sum = 0.0, comp = 0.0;
  for (double w : pmf) {
    double t = sum + w;
    comp += (std::abs(sum) >= std::abs(w)) ? (sum - t) + w : (w - t) + sum;
    sum = t;
  }
  sum += comp;
  for (double& w : pmf) w /= sum;
  return pmf;
}

ContentCatalog assign_tads(std::size_t total_contents,
                           const std::vector<double>& tad_values, Rng& rng) {
  if (tad_values.empty()) {
    throw std::invalid_argument("assign_tads: tad_values must be non-empty");
  }
  for (double v : tad_values) {
    if (v <= 0.0) {
      throw std::invalid_argument("assign_tads: TAD values must be positive");
    }
  }
  ContentCatalog catalog;
  catalog.total_contents = total_contents;
  catalog.tad_of.assign(total_contents + 1, 0.0);
  catalog.tad_min = *std::min_element(tad_values.begin(), tad_values.end());
  for (std::size_t id = 1; id <= total_contents; ++id) {
    catalog.tad_of[id] = tad_values.size() == 1
                             ? tad_values[0]
                             : tad_values[rng.below(tad_values.size())];
  }
  return catalog;
}

CommunityProfile make_profile(int community_id,
                              const std::vector<double>& base_pmf,
                              std::vector<ContentId> rank_order) {
  CommunityProfile p;
  p.community_id = community_id;
  p.pmf_by_rank = base_pmf;
  p.rank_order = std::move(rank_order);
  p.cdf.resize(p.pmf_by_rank.size());
  std::partial_sum(p.pmf_by_rank.begin(), p.pmf_by_rank.end(), p.cdf.begin());
  p.cdf.back() = 1.0;  // guard against accumulated rounding in sampling
  p.rank_of.assign(p.rank_order.size() + 1, 0);
  for (std::uint32_t r = 0; r < p.rank_order.size(); ++r) {
    p.rank_of[p.rank_order[r]] = r;
  }
  return p;
}

std::vector<ContentId> swap_pass(const std::vector<ContentId>& order,
                                 double swap_probability, Rng& rng) {
  std::vector<ContentId> out = order;
  for (std::size_t r = 0; r + 1 < out.size(); ++r) {
    if (rng.bernoulli(swap_probability)) std::swap(out[r], out[r + 1]);
  }
  return out;
}

static std::vector<ContentId> identity_order(std::size_t n) {
  std::vector<ContentId> order(n);
  std::iota(order.begin(), order.end(), ContentId{1});
  return order;
}

std::vector<CommunityProfile> generate_profiles(
    const std::vector<double>& base_pmf, int num_communities,
    double swap_probability, Rng& rng) {
  if (swap_probability < 0.0 || swap_probability > 1.0) {
    throw std::invalid_argument("generate_profiles: swap_probability in [0,1]");
  }
  std::vector<CommunityProfile> profiles;
  profiles.reserve(num_communities);
  std::vector<ContentId> order = identity_order(base_pmf.size());
  for (int c = 0; c < num_communities; ++c) {
    if (c > 0) order = swap_pass(order, swap_probability, rng);
    profiles.push_back(make_profile(c, base_pmf, order));
  }
  return profiles;
}

std::vector<CommunityProfile> alternating_profiles(
    const std::vector<double>& base_pmf, int num_communities,
    double swap_probability, Rng& rng) {
  if (swap_probability < 0.0 || swap_probability > 1.0) {
    throw std::invalid_argument(
        "alternating_profiles: swap_probability in [0,1]");
  }
  const std::vector<ContentId> order_a = identity_order(base_pmf.size());
  const std::vector<ContentId> order_b =
      swap_pass(order_a, swap_probability, rng);
  std::vector<CommunityProfile> profiles;
  profiles.reserve(num_communities);
  for (int c = 0; c < num_communities; ++c) {
    profiles.push_back(make_profile(c, base_pmf, c % 2 ? order_b : order_a));
  }
  return profiles;
}

double smith_waterman_score(std::span<const ContentId> seq_a,
                            std::span<const ContentId> seq_b, double match,
                            double mismatch, double gap) {
  if (seq_a.empty() || seq_b.empty()) {
    throw std::invalid_argument("smith_waterman_score: sequences non-empty");
  }
  const std::size_t n = seq_a.size(), m = seq_b.size();
  std::vector<double> prev(m + 1, 0.0), cur(m + 1, 0.0);
  double best = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = 0.0;
    for (std::size_t j = 1; j <= m; ++j) {
      const double diag =
          prev[j - 1] + (seq_a[i - 1] == seq_b[j - 1] ? match : mismatch);
      const double up = prev[j] + gap;
      const double left = cur[j - 1] + gap;
      cur[j] = std::max({0.0, diag, up, left});
      best = std::max(best, cur[j]);
    }
    std::swap(prev, cur);
  }
  return best;
}

double smith_waterman_distance(std::span<const ContentId> seq_a,
                               std::span<const ContentId> seq_b, double match,
                               double mismatch, double gap) {
  const double score = smith_waterman_score(seq_a, seq_b, match, mismatch, gap);
  const double denom =
      match * static_cast<double>(std::min(seq_a.size(), seq_b.size()));
  return 1.0 - score / denom;
}

}  // namespace ferrysim
