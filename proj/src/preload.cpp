#include "ferrysim/preload.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace ferrysim {

namespace {

std::uint32_t segment1_size(double lambda, std::uint32_t cache_capacity) {
  if (lambda < 0.0 || lambda > 1.0) {
    throw std::invalid_argument("preload: lambda must be in [0, 1]");
  }
  return static_cast<std::uint32_t>(
      std::lround(lambda * static_cast<double>(cache_capacity)));
}

std::uint64_t distinct_count(const PreloadPlan& plan,
                             std::size_t total_contents) {
  std::vector<char> seen(total_contents + 1, 0);
  std::uint64_t distinct = 0;
  for (const auto& cache : plan.per_anchor_cache) {
    for (ContentId id : cache) {
      if (!seen[id]) {
        seen[id] = 1;
        ++distinct;
      }
    }
  }
  return distinct;
}

// Counts Segment-1 contents cached at >= 2 anchors (non-exclusive) vs
// exactly one (exclusive), measured from the built plan.
void count_segment1_split(PreloadPlan& plan, std::size_t total_contents) {
  std::vector<std::uint32_t> uses(total_contents + 1, 0);
  for (const auto& cache : plan.per_anchor_cache) {
    for (std::uint32_t s = 0; s < plan.segment1_size; ++s) ++uses[cache[s]];
  }
  plan.non_exclusive_count = 0;
  plan.exclusive_total = 0;
  for (std::size_t id = 1; id <= total_contents; ++id) {
    if (uses[id] >= 2) ++plan.non_exclusive_count;
    else if (uses[id] == 1) ++plan.exclusive_total;
  }
}

}  // namespace

PreloadPlan plan_fd(const std::vector<CommunityProfile>& profiles,
                    std::uint32_t cache_capacity) {
  if (profiles.empty()) throw std::invalid_argument("plan_fd: no profiles");
  const std::size_t total = profiles.front().rank_order.size();
  if (cache_capacity > total) {
    throw std::invalid_argument("plan_fd: cache capacity exceeds catalog");
  }
  PreloadPlan plan;
  plan.policy = PreloadPolicy::FD;
  for (const auto& p : profiles) {
    plan.per_anchor_cache.emplace_back(p.rank_order.begin(),
                                       p.rank_order.begin() + cache_capacity);
  }
  plan.system_content_count = distinct_count(plan, total);
  return plan;
}

PreloadPlan plan_sec(const CommunityProfile& base_profile, double lambda,
                     std::uint32_t cache_capacity, std::uint32_t num_anchors) {
  const std::size_t total = base_profile.rank_order.size();
  const std::uint32_t seg1 = segment1_size(lambda, cache_capacity);
  const std::uint32_t seg2 = cache_capacity - seg1;
  const std::uint64_t needed =
      seg1 + static_cast<std::uint64_t>(num_anchors) * seg2;
  if (needed > total) {
    throw std::invalid_argument(
        "plan_sec: required unique contents exceed catalog size");
  }
  PreloadPlan plan;
  plan.policy = PreloadPolicy::SEC;
  plan.lambda = lambda;
  plan.segment1_size = seg1;
  for (std::uint32_t j = 0; j < num_anchors; ++j) {
    std::vector<ContentId> cache(base_profile.rank_order.begin(),
                                 base_profile.rank_order.begin() + seg1);
    const auto start = base_profile.rank_order.begin() + seg1 +
                       static_cast<std::ptrdiff_t>(j) * seg2;
    cache.insert(cache.end(), start, start + seg2);
    plan.per_anchor_cache.push_back(std::move(cache));
  }
  plan.system_content_count =
      seg1 + static_cast<std::uint64_t>(num_anchors) * seg2;
  return plan;
}

namespace {

// Shared PBC/VBC construction: per-anchor Segment-1 from a local ordering,
// Segment-2 partitioned from a global ordering, skipping Segment-1 members.
PreloadPlan plan_local_segment1(
    PreloadPolicy policy, double lambda, std::uint32_t cache_capacity,
    std::size_t total, std::size_t num_anchors,
    const std::vector<std::vector<ContentId>>& local_orders,
    const std::vector<ContentId>& global_order) {
  const std::uint32_t seg1 = segment1_size(lambda, cache_capacity);
  const std::uint32_t seg2 = cache_capacity - seg1;

  PreloadPlan plan;
  plan.policy = policy;
  plan.lambda = lambda;
  plan.segment1_size = seg1;

  std::vector<char> in_segment1(total + 1, 0);
  for (std::size_t j = 0; j < num_anchors; ++j) {
    std::vector<ContentId> cache(local_orders[j].begin(),
                                 local_orders[j].begin() + seg1);
    for (ContentId id : cache) in_segment1[id] = 1;
    plan.per_anchor_cache.push_back(std::move(cache));
  }

  std::uint64_t segment1_union = 0;
  for (std::size_t id = 1; id <= total; ++id) segment1_union += in_segment1[id];
  if (segment1_union + num_anchors * static_cast<std::uint64_t>(seg2) > total) {
    throw std::invalid_argument(
        "preload: required unique contents exceed catalog size");
  }

  auto next_exclusive = global_order.begin();
  auto take_exclusive = [&]() {
    while (in_segment1[*next_exclusive]) ++next_exclusive;
    return *next_exclusive++;
  };
  // Anchors claim exclusive contents in community-id order.
  for (std::size_t j = 0; j < num_anchors; ++j) {
    for (std::uint32_t s = 0; s < seg2; ++s) {
      plan.per_anchor_cache[j].push_back(take_exclusive());
    }
  }

  count_segment1_split(plan, total);
  plan.system_content_count = distinct_count(plan, total);
  return plan;
}

}  // namespace

PreloadPlan plan_pbc(const std::vector<CommunityProfile>& profiles,
                     double lambda, std::uint32_t cache_capacity) {
  if (profiles.empty()) throw std::invalid_argument("plan_pbc: no profiles");
  const std::size_t total = profiles.front().rank_order.size();
  std::vector<std::vector<ContentId>> local_orders;
  for (const auto& p : profiles) local_orders.push_back(p.rank_order);
  std::vector<ContentId> global_order(total);
  std::iota(global_order.begin(), global_order.end(), ContentId{1});
  return plan_local_segment1(PreloadPolicy::PBC, lambda, cache_capacity, total,
                             profiles.size(), local_orders, global_order);
}

double content_value(double p_i, double tad_i, double kappa, double tad_min,
                     double p_top) {
  if (tad_i <= 0.0 || tad_min <= 0.0) {
    throw std::invalid_argument("content_value: TAD must be positive");
  }
  if (p_i <= 0.0 || p_top <= 0.0) {
    throw std::invalid_argument("content_value: probabilities must be > 0");
  }
  return kappa * (tad_min / p_top) * (p_i / tad_i);
}

PreloadPlan plan_vbc(const std::vector<CommunityProfile>& profiles,
                     const ContentCatalog& catalog, double lambda,
                     std::uint32_t cache_capacity, double kappa) {
  if (profiles.empty()) throw std::invalid_argument("plan_vbc: no profiles");
  const std::size_t total = profiles.front().rank_order.size();
  const double p_top = profiles.front().pmf_by_rank.front();

  auto value_order = [&](const CommunityProfile& p) {
    std::vector<ContentId> order(total);
    std::iota(order.begin(), order.end(), ContentId{1});
    std::vector<double> value(total + 1, 0.0);
    for (ContentId id = 1; id <= total; ++id) {
      value[id] = content_value(p.probability_of(id), catalog.tad(id), kappa,
                                catalog.tad_min, p_top);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](ContentId a, ContentId b) {
                       if (value[a] != value[b]) return value[a] > value[b];
                       return a < b;
                     });
    return order;
  };

  std::vector<std::vector<ContentId>> local_orders;
  for (const auto& p : profiles) local_orders.push_back(value_order(p));

  // Global value order: base popularity (rank = id) over per-content TAD.
  const std::vector<double>& base_pmf = profiles.front().pmf_by_rank;
  std::vector<ContentId> global_order(total);
  std::iota(global_order.begin(), global_order.end(), ContentId{1});
  std::vector<double> gvalue(total + 1, 0.0);
  for (ContentId id = 1; id <= total; ++id) {
    gvalue[id] = content_value(base_pmf[id - 1], catalog.tad(id), kappa,
                               catalog.tad_min, p_top);
  }
  std::stable_sort(global_order.begin(), global_order.end(),
                   [&](ContentId a, ContentId b) {
                     if (gvalue[a] != gvalue[b]) return gvalue[a] > gvalue[b];
                     return a < b;
                   });

  return plan_local_segment1(PreloadPolicy::VBC, lambda, cache_capacity, total,
                             profiles.size(), local_orders, global_order);
}

PreloadPlan build_plan(PreloadPolicy policy,
                       const std::vector<CommunityProfile>& profiles,
                       const ContentCatalog& catalog, double lambda,
                       std::uint32_t cache_capacity, double kappa) {
  switch (policy) {
    case PreloadPolicy::FD:
      return plan_fd(profiles, cache_capacity);
    case PreloadPolicy::SEC:
      return plan_sec(profiles.front(), lambda, cache_capacity,
                      static_cast<std::uint32_t>(profiles.size()));
    case PreloadPolicy::PBC:
      return plan_pbc(profiles, lambda, cache_capacity);
    case PreloadPolicy::VBC:
      return plan_vbc(profiles, catalog, lambda, cache_capacity, kappa);
  }
  throw std::logic_error("build_plan: unreachable");
}

const std::vector<ContentId>& benchmark_sequence(const PreloadPlan& plan,
                                                 int community_id) {
  return plan.per_anchor_cache.at(community_id);
}

void write_plan_csv(const PreloadPlan& plan, const std::string& path,
                    const std::string& header) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open plan file '" + path + "'");
  if (!header.empty()) std::fprintf(f, "# %s\n", header.c_str());
  std::fprintf(f, "anchor_id,slot_index,content_id\n");
  for (std::size_t a = 0; a < plan.per_anchor_cache.size(); ++a) {
    const auto& cache = plan.per_anchor_cache[a];
    for (std::size_t s = 0; s < cache.size(); ++s) {
      std::fprintf(f, "%zu,%zu,%u\n", a, s, cache[s]);
    }
  }
  std::fclose(f);
}

}  // namespace ferrysim
