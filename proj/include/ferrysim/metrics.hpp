#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ferrysim/model.hpp"

namespace ferrysim {

enum class Outcome { LocalHit, FerryServe, Download };

double availability(std::uint64_t hits, std::uint64_t requests);

// Jaro-Winkler similarity over content-id token sequences. Match window is
// floor(max(|a|,|b|)/2) - 1, transpositions count half the out-of-order
// matches, prefix boost l*p*(1-J) with l capped at max_prefix.
double jaro_winkler(std::span<const ContentId> seq_a,
                    std::span<const ContentId> seq_b,
                    double prefix_scale = 0.1, int max_prefix = 4);

double epoch_access_delay(std::span<const std::pair<double, Outcome>> served);

struct EpochMetrics {
  int epoch_index = 0;
  std::uint64_t requests_issued = 0;
  std::uint64_t resolved = 0;
  std::uint64_t local_hits = 0;
  std::uint64_t ferry_serves = 0;
  std::uint64_t downloads = 0;         // TAD expiries resolved vertically
  std::uint64_t refill_downloads = 0;  // cache (re)fill fetches at epoch start
  double delay_sum = 0.0;
  std::vector<double> jws_per_anchor;
  std::vector<double> jws_per_ferry;
  double epsilon_current = 0.0;

  bool has_resolved() const { return resolved > 0; }
  double availability() const {
    return resolved ? static_cast<double>(local_hits + ferry_serves) /
                          static_cast<double>(resolved)
                    : 0.0;
  }
  double mean_access_delay() const {
    return resolved ? delay_sum / static_cast<double>(resolved) : 0.0;
  }
  double jws_anchor_mean() const;
  double jws_ferry_mean() const;
};

// Per-epoch CSV: epoch, availability, mean_delay, jws_anchor_mean,
// jws_ferry_mean, downloads, epsilon, refill_downloads. Availability and
// delay cells are left empty for epochs with no resolved request.
void write_epoch_csv(std::span<const EpochMetrics> epochs,
                     const std::string& path, const std::string& header);

// Aggregate across replications: per-epoch mean and sample stddev.
struct AggregateRow {
  int epoch_index = 0;
  double availability_mean = 0.0, availability_std = 0.0;
  double delay_mean = 0.0, delay_std = 0.0;
  double jws_anchor_mean = 0.0, jws_anchor_std = 0.0;
  double jws_ferry_mean = 0.0, jws_ferry_std = 0.0;
  double downloads_mean = 0.0;
  double epsilon = 0.0;
};

std::vector<AggregateRow> aggregate_epochs(
    const std::vector<std::vector<EpochMetrics>>& runs);

void write_aggregate_csv(std::span<const AggregateRow> rows,
                         const std::string& path, const std::string& header);

}  // namespace ferrysim
