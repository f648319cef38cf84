#include "ferrysim/workload.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace ferrysim {

RequestGenerator::RequestGenerator(const CommunityProfile& profile,
                                   const ContentCatalog& catalog, double mu,
                                   std::uint64_t seed)
    : profile_(&profile), catalog_(&catalog), mu_(mu), rng_(seed) {
  if (mu <= 0.0) {
    throw std::invalid_argument("RequestGenerator: mu must be > 0");
  }
}

ContentId sample_content(const CommunityProfile& profile, Rng& rng) {
  const double u = rng.uniform01();
  auto it = std::upper_bound(profile.cdf.begin(), profile.cdf.end(), u);
  std::size_t rank = static_cast<std::size_t>(it - profile.cdf.begin());
  if (rank >= profile.rank_order.size()) rank = profile.rank_order.size() - 1;
  return profile.rank_order[rank];
}

RequestEvent RequestGenerator::next(double now) {
  RequestEvent ev;
  ev.request_id = next_id_++;
  ev.community_id = profile_->community_id;
  ev.issue_time = now + rng_.exponential(mu_);
  ev.content_id = sample_content(*profile_, rng_);
  ev.tad = catalog_->tad(ev.content_id);
  return ev;
}

std::map<std::pair<int, ContentId>, std::uint64_t> empirical_request_counts(
    std::span<const RequestEvent> stream, double window) {
  if (window <= 0.0) {
    throw std::invalid_argument("empirical_request_counts: window must be > 0");
  }
  std::map<std::pair<int, ContentId>, std::uint64_t> counts;
  for (const auto& ev : stream) {
    if (ev.issue_time < window) {
      ++counts[{ev.community_id, ev.content_id}];
    }
  }
  return counts;
}

void write_trace_csv(std::span<const RequestEvent> stream,
                     const std::string& path, const std::string& header) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open trace file '" + path + "'");
  if (!header.empty()) std::fprintf(f, "# %s\n", header.c_str());
  std::fprintf(f, "request_id,community_id,content_id,issue_time,tad\n");
  for (const auto& ev : stream) {
    std::fprintf(f, "%llu,%d,%u,%.6f,%.3f\n",
                 static_cast<unsigned long long>(ev.request_id),
                 ev.community_id, ev.content_id, ev.issue_time, ev.tad);
  }
  std::fclose(f);
}

}  // namespace ferrysim
