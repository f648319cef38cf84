#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ferrysim/rng.hpp"

namespace ferrysim {

// Contents are dense 1-based ids. Id order doubles as the base (global)
// popularity rank order: content 1 is the globally most popular.
using ContentId = std::uint32_t;

// Zipf popularity law: entry i (0-based rank i+1) is
// (1/(i+1))^alpha / sum_k (1/k)^alpha. Sums to 1 within 1e-12.
std::vector<double> zipf_pmf(double alpha, std::size_t total_contents);

struct ContentCatalog {
  std::size_t total_contents = 0;
  std::vector<double> tad_of;  // seconds, indexed by content id; slot 0 unused
  double tad_min = 0.0;

  double tad(ContentId id) const { return tad_of[id]; }
};

// Draws each content's tolerable access delay uniformly from tad_values.
ContentCatalog assign_tads(std::size_t total_contents,
                           const std::vector<double>& tad_values, Rng& rng);

struct CommunityProfile {
  int community_id = 0;
  // rank_order[r] = content holding popularity rank r+1 in this community.
  std::vector<ContentId> rank_order;
  // Shared zipf pmf by rank; ranks keep their mass, contents move.
  std::vector<double> pmf_by_rank;
  // Prefix sums of pmf_by_rank for inverse-CDF sampling.
  std::vector<double> cdf;
  // rank_of[id] = 0-based rank of a content in this community.
  std::vector<std::uint32_t> rank_of;

  double probability_of(ContentId id) const { return pmf_by_rank[rank_of[id]]; }
};

CommunityProfile make_profile(int community_id,
                              const std::vector<double>& base_pmf,
                              std::vector<ContentId> rank_order);

// One left-to-right pass swapping each adjacent rank pair with the given
// probability; swapped elements may cascade forward.
std::vector<ContentId> swap_pass(const std::vector<ContentId>& order,
                                 double swap_probability, Rng& rng);

// Chained heterogeneity: profile 0 is the identity order, each subsequent
// profile applies one swap pass to its predecessor.
std::vector<CommunityProfile> generate_profiles(
    const std::vector<double>& base_pmf, int num_communities,
    double swap_probability, Rng& rng);

// Two fixed orders A (identity) and B (one swap pass over A) assigned to
// communities alternately, so every consecutive community differs.
std::vector<CommunityProfile> alternating_profiles(
    const std::vector<double>& base_pmf, int num_communities,
    double swap_probability, Rng& rng);

// Maximum local-alignment score (zero floor) of two content sequences.
double smith_waterman_score(std::span<const ContentId> seq_a,
                            std::span<const ContentId> seq_b, double match,
                            double mismatch, double gap);

// Heterogeneity distance: 1 - score / (match * min(|a|, |b|)).
double smith_waterman_distance(std::span<const ContentId> seq_a,
                               std::span<const ContentId> seq_b,
                               double match = 1.0, double mismatch = -1.0,
                               double gap = -1.0);

}  // namespace ferrysim
