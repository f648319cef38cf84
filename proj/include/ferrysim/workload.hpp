#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ferrysim/model.hpp"
#include "ferrysim/rng.hpp"

namespace ferrysim {

struct RequestEvent {
  std::uint64_t request_id = 0;
  int community_id = 0;
  ContentId content_id = 0;
  double issue_time = 0.0;
  double tad = 0.0;
};

// Per-community request stream: exponential inter-request gaps at rate mu,
// content drawn from the community pmf by inverse CDF over rank order.
class RequestGenerator {
 public:
  RequestGenerator(const CommunityProfile& profile,
                   const ContentCatalog& catalog, double mu,
                   std::uint64_t seed);

  RequestEvent next(double now);

 private:
  const CommunityProfile* profile_;
  const ContentCatalog* catalog_;
  double mu_;
  Rng rng_;
  std::uint64_t next_id_ = 0;
};

// Sample one content id from the profile (shared by generator and tests).
ContentId sample_content(const CommunityProfile& profile, Rng& rng);

// Requests per (community, content) with issue_time in [0, window).
std::map<std::pair<int, ContentId>, std::uint64_t> empirical_request_counts(
    std::span<const RequestEvent> stream, double window);

void write_trace_csv(std::span<const RequestEvent> stream,
                     const std::string& path, const std::string& header);

}  // namespace ferrysim
