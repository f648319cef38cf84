#include "ferrysim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <unordered_map>

namespace ferrysim {

double availability(std::uint64_t hits, std::uint64_t requests) {
  if (requests == 0) {
    throw std::invalid_argument("availability: requests must be > 0");
  }
  return static_cast<double>(hits) / static_cast<double>(requests);
}

double jaro_winkler(std::span<const ContentId> seq_a,
                    std::span<const ContentId> seq_b, double prefix_scale,
                    int max_prefix) {
  const std::size_t la = seq_a.size(), lb = seq_b.size();
  if (la == 0 && lb == 0) return 1.0;
  if (la == 0 || lb == 0) return 0.0;

  const std::size_t window =
      std::max(la, lb) / 2 == 0 ? 0 : std::max(la, lb) / 2 - 1;

  std::vector<char> a_matched(la, 0), b_matched(lb, 0);
  std::size_t matches = 0;
  for (std::size_t i = 0; i < la; ++i) {
    const std::size_t lo = i > window ? i - window : 0;
    const std::size_t hi = std::min(lb, i + window + 1);
    for (std::size_t j = lo; j < hi; ++j) {
      if (!b_matched[j] && seq_a[i] == seq_b[j]) {
        a_matched[i] = b_matched[j] = 1;
        ++matches;
        break;
      }
    }
  }
  if (matches == 0) return 0.0;

  // Half the number of matched tokens that appear in a different order.
  std::size_t transposed = 0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < la; ++i) {
    if (!a_matched[i]) continue;
    while (!b_matched[j]) ++j;
    if (seq_a[i] != seq_b[j]) ++transposed;
    ++j;
  }
  const double m = static_cast<double>(matches);
  const double t = static_cast<double>(transposed) / 2.0;
  const double jaro = (m / la + m / lb + (m - t) / m) / 3.0;

  std::size_t prefix = 0;
  const std::size_t prefix_cap =
      std::min({la, lb, static_cast<std::size_t>(max_prefix)});
  while (prefix < prefix_cap && seq_a[prefix] == seq_b[prefix]) ++prefix;
  return jaro + static_cast<double>(prefix) * prefix_scale * (1.0 - jaro);
}

double epoch_access_delay(std::span<const std::pair<double, Outcome>> served) {
  if (served.empty()) {
    throw std::invalid_argument("epoch_access_delay: no resolved requests");
  }
  double sum = 0.0;
  for (const auto& [delay, outcome] : served) sum += delay;
  return sum / static_cast<double>(served.size());
}

double EpochMetrics::jws_anchor_mean() const {
  if (jws_per_anchor.empty()) return 0.0;
  double s = 0.0;
  for (double v : jws_per_anchor) s += v;
  return s / static_cast<double>(jws_per_anchor.size());
}

double EpochMetrics::jws_ferry_mean() const {
  if (jws_per_ferry.empty()) return 0.0;
  double s = 0.0;
  for (double v : jws_per_ferry) s += v;
  return s / static_cast<double>(jws_per_ferry.size());
}

void write_epoch_csv(std::span<const EpochMetrics> epochs,
                     const std::string& path, const std::string& header) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open metrics file '" + path + "'");
  if (!header.empty()) std::fprintf(f, "# %s\n", header.c_str());
  std::fprintf(f,
               "epoch,availability,mean_delay,jws_anchor_mean,jws_ferry_mean,"
               "downloads,epsilon,refill_downloads\n");
  for (const auto& e : epochs) {
    if (e.has_resolved()) {
      std::fprintf(f, "%d,%.6f,%.3f,", e.epoch_index, e.availability(),
                   e.mean_access_delay());
    } else {
      std::fprintf(f, "%d,,,", e.epoch_index);
    }
    std::fprintf(f, "%.6f,%.6f,%llu,%.6f,%llu\n", e.jws_anchor_mean(),
                 e.jws_ferry_mean(),
                 static_cast<unsigned long long>(e.downloads),
                 e.epsilon_current,
                 static_cast<unsigned long long>(e.refill_downloads));
  }
  std::fclose(f);
}

std::vector<AggregateRow> aggregate_epochs(
    const std::vector<std::vector<EpochMetrics>>& runs) {
  std::vector<AggregateRow> rows;
  if (runs.empty()) return rows;
  const std::size_t epochs = runs.front().size();
  const double n = static_cast<double>(runs.size());
  rows.resize(epochs);
  for (std::size_t e = 0; e < epochs; ++e) {
    auto stat = [&](auto getter, double& mean, double& stddev) {
      double s = 0.0;
      for (const auto& run : runs) s += getter(run[e]);
      mean = s / n;
      double sq = 0.0;
      for (const auto& run : runs) {
        const double d = getter(run[e]) - mean;
        sq += d * d;
      }
      stddev = runs.size() > 1 ? std::sqrt(sq / (n - 1.0)) : 0.0;
    };
    AggregateRow& r = rows[e];
    r.epoch_index = runs.front()[e].epoch_index;
    stat([](const EpochMetrics& m) { return m.availability(); },
         r.availability_mean, r.availability_std);
    stat([](const EpochMetrics& m) { return m.mean_access_delay(); },
         r.delay_mean, r.delay_std);
    stat([](const EpochMetrics& m) { return m.jws_anchor_mean(); },
         r.jws_anchor_mean, r.jws_anchor_std);
    stat([](const EpochMetrics& m) { return m.jws_ferry_mean(); },
         r.jws_ferry_mean, r.jws_ferry_std);
    double dl = 0.0, eps = 0.0;
    for (const auto& run : runs) {
      dl += static_cast<double>(run[e].downloads);
      eps += run[e].epsilon_current;
    }
    r.downloads_mean = dl / n;
    r.epsilon = eps / n;
  }
  return rows;
}

void write_aggregate_csv(std::span<const AggregateRow> rows,
                         const std::string& path, const std::string& header) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open metrics file '" + path + "'");
  if (!header.empty()) std::fprintf(f, "# %s\n", header.c_str());
  std::fprintf(f,
               "epoch,availability_mean,availability_std,delay_mean,delay_std,"
               "jws_anchor_mean,jws_anchor_std,jws_ferry_mean,jws_ferry_std,"
               "downloads_mean,epsilon\n");
  for (const auto& r : rows) {
    std::fprintf(f, "%d,%.6f,%.6f,%.3f,%.3f,%.6f,%.6f,%.6f,%.6f,%.3f,%.6f\n",
                 r.epoch_index, r.availability_mean, r.availability_std,
                 r.delay_mean, r.delay_std, r.jws_anchor_mean,
                 r.jws_anchor_std, r.jws_ferry_mean, r.jws_ferry_std,
                 r.downloads_mean, r.epsilon);
  }
  std::fclose(f);
}

}  // namespace ferrysim
