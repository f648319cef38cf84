#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "ferrysim/model.hpp"
#include "ferrysim/preload.hpp"

using namespace ferrysim;

namespace {

std::vector<CommunityProfile> identical_profiles(std::size_t contents,
                                                 int count) {
  Rng rng(1);
  return generate_profiles(zipf_pmf(0.7, contents), count, 0.0, rng);
}

ContentCatalog homogeneous_catalog(std::size_t contents, double tad) {
  Rng rng(1);
  return assign_tads(contents, {tad}, rng);
}

std::uint64_t union_size(const PreloadPlan& plan) {
  std::set<ContentId> pool;
  for (const auto& cache : plan.per_anchor_cache) {
    pool.insert(cache.begin(), cache.end());
  }
  return pool.size();
}

}  // namespace

TEST_CASE("plan_fd") {
  SUBCASE("identical profiles fully duplicate") {
    const auto profiles = identical_profiles(200, 4);
    const auto plan = plan_fd(profiles, 50);
    for (const auto& cache : plan.per_anchor_cache) {
      CHECK(cache == plan.per_anchor_cache.front());
    }
    CHECK(plan.system_content_count == 50);
  }
  SUBCASE("disjoint top sets do not overlap") {
    // Hand-built profiles whose top-2 sets are disjoint.
    const auto pmf = zipf_pmf(1.0, 6);
    std::vector<CommunityProfile> profiles{
        make_profile(0, pmf, {1, 2, 3, 4, 5, 6}),
        make_profile(1, pmf, {3, 4, 5, 6, 1, 2}),
        make_profile(2, pmf, {5, 6, 1, 2, 3, 4})};
    const auto plan = plan_fd(profiles, 2);
    CHECK(plan.system_content_count == 6);
  }
  SUBCASE("heterogeneous profiles land between the bounds") {
    Rng rng(8);
    const auto profiles = generate_profiles(zipf_pmf(0.7, 1000), 12, 0.3, rng);
    const auto plan = plan_fd(profiles, 100);
    CHECK(plan.system_content_count >= 100);
    CHECK(plan.system_content_count <= 1200);
    CHECK(plan.system_content_count == union_size(plan));
  }
}

TEST_CASE("plan_sec implements the storage segmentation arithmetic") {
  SUBCASE("table defaults with lambda=0.2 give 980 system contents") {
    const auto profiles = identical_profiles(1000, 12);
    const auto plan = plan_sec(profiles.front(), 0.2, 100, 12);
    CHECK(plan.system_content_count == 980);  // 20 + 12 * 80
    CHECK(plan.segment1_size == 20);
  }
  SUBCASE("lambda=1 replicates the global top everywhere") {
    const auto profiles = identical_profiles(300, 5);
    const auto plan = plan_sec(profiles.front(), 1.0, 40, 5);
    CHECK(plan.system_content_count == 40);
    for (const auto& cache : plan.per_anchor_cache) {
      CHECK(cache == plan.per_anchor_cache.front());
    }
  }
  SUBCASE("lambda=0 partitions disjointly") {
    const auto profiles = identical_profiles(300, 5);
    const auto plan = plan_sec(profiles.front(), 0.0, 40, 5);
    CHECK(plan.system_content_count == 200);
    CHECK(union_size(plan) == 200);
  }
  SUBCASE("the count equation holds across a lambda sweep") {
    const auto profiles = identical_profiles(1400, 12);
    for (double lambda : {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9,
                          1.0}) {
      const auto plan = plan_sec(profiles.front(), lambda, 100, 12);
      const auto seg1 = static_cast<std::uint64_t>(std::lround(lambda * 100));
      CHECK(plan.system_content_count == seg1 + 12 * (100 - seg1));
      CHECK(plan.system_content_count == union_size(plan));
      // Segment-1 replicated, Segment-2 globally unique.
      for (const auto& cache : plan.per_anchor_cache) {
        for (std::uint32_t s = 0; s < plan.segment1_size; ++s) {
          CHECK(cache[s] == plan.per_anchor_cache.front()[s]);
        }
      }
    }
  }
  SUBCASE("rejects configurations that need more contents than exist") {
    const auto profiles = identical_profiles(1000, 12);
    CHECK_THROWS_AS(plan_sec(profiles.front(), 0.0, 100, 12),
                    std::invalid_argument);
  }
}

TEST_CASE("plan_pbc accounts for demand heterogeneity") {
  SUBCASE("identical profiles degenerate to SEC") {
    const auto profiles = identical_profiles(1000, 12);
    const auto pbc = plan_pbc(profiles, 0.2, 100);
    const auto sec = plan_sec(profiles.front(), 0.2, 100, 12);
    CHECK(pbc.system_content_count == sec.system_content_count);
    CHECK(pbc.non_exclusive_count == pbc.segment1_size);
    CHECK(pbc.exclusive_total == 0);
  }
  SUBCASE("heterogeneous top ranks cache strictly more distinct contents") {
    const auto pmf = zipf_pmf(0.7, 1000);
    Rng rng(4);
    const auto profiles = alternating_profiles(pmf, 12, 0.9, rng);
    const auto pbc = plan_pbc(profiles, 0.2, 100);
    const auto sec = plan_sec(profiles.front(), 0.2, 100, 12);
    bool any_differs = false;
    for (const auto& p : profiles) {
      for (std::uint32_t r = 0; r < 20; ++r) {
        if (p.rank_order[r] != profiles.front().rank_order[r]) {
          any_differs = true;
        }
      }
    }
    // The alternating order B must shuffle some of the top-20 at 0.9.
    REQUIRE(any_differs);
    CHECK(pbc.system_content_count > sec.system_content_count);
    CHECK(pbc.system_content_count ==
          pbc.non_exclusive_count + pbc.exclusive_total +
              12ull * (100 - pbc.segment1_size));
  }
  SUBCASE("lambda=0 coincides with SEC") {
    const auto profiles = identical_profiles(1400, 12);
    const auto pbc = plan_pbc(profiles, 0.0, 100);
    const auto sec = plan_sec(profiles.front(), 0.0, 100, 12);
    CHECK(pbc.system_content_count == sec.system_content_count);
    CHECK(pbc.per_anchor_cache == sec.per_anchor_cache);
  }
}

TEST_CASE("content_value normalization and monotonicity") {
  SUBCASE("top content at minimum TAD anchors the scale at 1") {
    CHECK(content_value(0.05, 300.0, 1.0, 300.0, 0.05) ==
          doctest::Approx(1.0));
  }
  SUBCASE("doubling the TAD halves the value") {
    const double v1 = content_value(0.01, 300.0, 1.0, 300.0, 0.05);
    const double v2 = content_value(0.01, 600.0, 1.0, 300.0, 0.05);
    CHECK(v1 == doctest::Approx(2.0 * v2));
  }
  SUBCASE("rank-10 content value against independent arithmetic") {
    const auto pmf = zipf_pmf(0.7, 1000);
    const double v =
        content_value(pmf[9], 600.0, 1.0, 300.0, pmf[0]);
    // (300/p1)*(p10/600) = 0.5 * (p10/p1) = 0.5 * 10^-0.7.
    CHECK(v == doctest::Approx(0.5 * std::pow(10.0, -0.7)).epsilon(1e-12));
  }
  SUBCASE("bounded in [0,1] over a full catalog with kappa=1") {
    const auto pmf = zipf_pmf(0.7, 1000);
    Rng rng(3);
    const auto catalog = assign_tads(1000, {300, 600, 900, 1200}, rng);
    for (ContentId id = 1; id <= 1000; ++id) {
      const double v = content_value(pmf[id - 1], catalog.tad(id), 1.0,
                                     catalog.tad_min, pmf[0]);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
  SUBCASE("rejects non-positive TADs") {
    CHECK_THROWS_AS(content_value(0.1, 0.0, 1.0, 300.0, 0.2),
                    std::invalid_argument);
  }
}

TEST_CASE("plan_vbc ranks by value") {
  SUBCASE("equal TADs reduce to PBC") {
    const auto pmf = zipf_pmf(0.7, 500);
    Rng rng(6);
    const auto profiles = generate_profiles(pmf, 4, 0.3, rng);
    const auto catalog = homogeneous_catalog(500, 300.0);
    const auto vbc = plan_vbc(profiles, catalog, 0.2, 50);
    const auto pbc = plan_pbc(profiles, 0.2, 50);
    CHECK(vbc.per_anchor_cache == pbc.per_anchor_cache);
  }
  SUBCASE("a lower-TAD content can outrank a more popular one") {
    const auto pmf = zipf_pmf(0.7, 10);
    std::vector<CommunityProfile> profiles{make_profile(
        0, pmf, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10})};
    ContentCatalog catalog;
    catalog.total_contents = 10;
    catalog.tad_of.assign(11, 600.0);
    catalog.tad_of[1] = 1200.0;  // popular but slow
    catalog.tad_of[2] = 300.0;   // second-ranked but urgent
    catalog.tad_min = 300.0;
    // p2/300 > p1/1200 iff 4*p2 > p1; zipf 0.7 gives p2 = p1 * 2^-0.7.
    REQUIRE(4.0 * pmf[1] > pmf[0]);
    const auto plan = plan_vbc(profiles, catalog, 1.0, 2);
    CHECK(plan.per_anchor_cache[0][0] == 2);
    CHECK(plan.per_anchor_cache[0][1] == 1);
  }
  SUBCASE("kappa scaling never changes the selected sets") {
    const auto pmf = zipf_pmf(0.7, 200);
    Rng rng(9);
    const auto profiles = generate_profiles(pmf, 3, 0.3, rng);
    Rng tad_rng(2);
    const auto catalog = assign_tads(200, {300, 600, 900, 1200}, tad_rng);
    const auto a = plan_vbc(profiles, catalog, 0.5, 30, 1.0);
    const auto b = plan_vbc(profiles, catalog, 0.5, 30, 0.25);
    CHECK(a.per_anchor_cache == b.per_anchor_cache);
  }
}

TEST_CASE("benchmark_sequence and structural plan invariants") {
  const auto pmf = zipf_pmf(0.7, 1000);
  Rng rng(12);
  const auto profiles = generate_profiles(pmf, 12, 0.3, rng);
  Rng tad_rng(12);
  const auto catalog = assign_tads(1000, {300, 600}, tad_rng);

  for (PreloadPolicy policy : {PreloadPolicy::FD, PreloadPolicy::SEC,
                               PreloadPolicy::PBC, PreloadPolicy::VBC}) {
    const auto plan = build_plan(policy, profiles, catalog, 0.2, 100);
    std::vector<std::set<ContentId>> segment2;
    for (std::size_t a = 0; a < plan.per_anchor_cache.size(); ++a) {
      const auto& seq = benchmark_sequence(plan, static_cast<int>(a));
      CHECK(seq.size() == 100);
      CHECK(std::set<ContentId>(seq.begin(), seq.end()).size() == 100);
      segment2.emplace_back(seq.begin() + plan.segment1_size, seq.end());
    }
    // Segment-2 sets are pairwise disjoint for the segmented policies.
    if (policy != PreloadPolicy::FD) {
      for (std::size_t i = 0; i < segment2.size(); ++i) {
        for (std::size_t j = i + 1; j < segment2.size(); ++j) {
          std::vector<ContentId> overlap;
          std::set_intersection(segment2[i].begin(), segment2[i].end(),
                                segment2[j].begin(), segment2[j].end(),
                                std::back_inserter(overlap));
          CHECK(overlap.empty());
        }
      }
    }
  }

  SUBCASE("PBC prefix holds the local top ranks") {
    const auto plan = plan_pbc(profiles, 0.2, 100);
    for (std::size_t a = 0; a < profiles.size(); ++a) {
      const auto& seq = benchmark_sequence(plan, static_cast<int>(a));
      for (std::uint32_t r = 0; r < plan.segment1_size; ++r) {
        CHECK(seq[r] == profiles[a].rank_order[r]);
      }
    }
  }
  SUBCASE("SEC lambda=1 serves the global top list everywhere") {
    const auto plan = plan_sec(profiles.front(), 1.0, 100, 12);
    for (int a = 0; a < 12; ++a) {
      const auto& seq = benchmark_sequence(plan, a);
      for (std::uint32_t r = 0; r < 100; ++r) {
        CHECK(seq[r] == profiles.front().rank_order[r]);
      }
    }
  }
}
