#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ferrysim/config.hpp"
#include "ferrysim/model.hpp"

namespace ferrysim {

struct PreloadPlan {
  PreloadPolicy policy = PreloadPolicy::FD;
  double lambda = 0.0;
  std::uint32_t segment1_size = 0;  // round(lambda * C_A)
  // Ordered cache list per anchor; first segment1_size entries are Segment-1.
  std::vector<std::vector<ContentId>> per_anchor_cache;
  std::uint64_t system_content_count = 0;  // C_sys, distinct contents
  // PBC/VBC bookkeeping: Segment-1 contents shared by >= 2 anchors vs
  // exclusive to one, counted from the built plan.
  std::uint64_t non_exclusive_count = 0;  // C_NE
  std::uint64_t exclusive_total = 0;      // C_E_total

  const std::vector<ContentId>& anchor_cache(int community_id) const {
    return per_anchor_cache[community_id];
  }
};

// Every anchor caches its own community's top-C_A contents.
PreloadPlan plan_fd(const std::vector<CommunityProfile>& profiles,
                    std::uint32_t cache_capacity);

// Smart Exclusive Caching over the global (base) rank order: Segment-1 is the
// global top round(lambda*C_A) replicated everywhere, Segment-2 partitions the
// next contents disjointly across anchors in rank order.
PreloadPlan plan_sec(const CommunityProfile& base_profile, double lambda,
                     std::uint32_t cache_capacity, std::uint32_t num_anchors);

// Popularity-Based Caching: Segment-1 is each community's own top contents,
// Segment-2 as in SEC skipping anything already in some Segment-1.
PreloadPlan plan_pbc(const std::vector<CommunityProfile>& profiles,
                     double lambda, std::uint32_t cache_capacity);

// Content value: kappa * (tad_min / p_top) * (p_i / tad_i), in [0,1] for
// kappa = 1.
double content_value(double p_i, double tad_i, double kappa, double tad_min,
                     double p_top);

// Value-Based Caching: PBC structure ranked by content value (popularity over
// TAD) instead of popularity alone.
PreloadPlan plan_vbc(const std::vector<CommunityProfile>& profiles,
                     const ContentCatalog& catalog, double lambda,
                     std::uint32_t cache_capacity, double kappa = 1.0);

PreloadPlan build_plan(PreloadPolicy policy,
                       const std::vector<CommunityProfile>& profiles,
                       const ContentCatalog& catalog, double lambda,
                       std::uint32_t cache_capacity, double kappa = 1.0);

// The ordered cache list of one anchor under the plan (the JWS reference).
const std::vector<ContentId>& benchmark_sequence(const PreloadPlan& plan,
                                                 int community_id);

void write_plan_csv(const PreloadPlan& plan, const std::string& path,
                    const std::string& header);

}  // namespace ferrysim
