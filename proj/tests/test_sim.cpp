#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ferrysim/experiment.hpp"
#include "ferrysim/preload.hpp"
#include "ferrysim/sim.hpp"

using namespace ferrysim;

namespace {

SystemConfig small_config() {
  SystemConfig cfg;
  cfg.total_contents = 60;
  cfg.num_anchor_uavs = 4;
  cfg.num_ferry_uavs = 2;
  cfg.anchor_cache_capacity = 10;
  cfg.ferry_cache_capacity = 10;
  cfg.request_rate = 0.5;
  cfg.hover_time = 60.0;
  cfg.transition_time = 30.0;
  cfg.tad_values = {120.0};
  cfg.epoch_length = 0.0;  // 4 * 90 / 2 = 180 s
  cfg.swap_probability = 0.3;
  cfg.rng_seed = 7;
  cfg.benchmark_lambda = 0.5;
  return cfg;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct LogRow {
  double time;
  std::string kind, outcome;
  int community;
  std::string content;
  std::string delay;
};

std::vector<LogRow> parse_log(const std::string& path) {
  std::ifstream in(path);
  std::vector<LogRow> rows;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    LogRow r;
    std::string time_s, community_s;
    std::getline(ss, time_s, ',');
    std::getline(ss, r.kind, ',');
    std::getline(ss, community_s, ',');
    std::getline(ss, r.content, ',');
    std::getline(ss, r.outcome, ',');
    std::getline(ss, r.delay, ',');
    r.time = std::stod(time_s);
    r.community = std::stoi(community_s);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace

TEST_CASE("frozen full-duplication with everything cached never downloads") {
  SystemConfig cfg;
  cfg.total_contents = 20;
  cfg.num_anchor_uavs = 2;
  cfg.num_ferry_uavs = 1;
  cfg.anchor_cache_capacity = 20;  // cache the entire catalog
  cfg.ferry_cache_capacity = 5;
  cfg.hover_time = 60.0;
  cfg.transition_time = 30.0;
  cfg.tad_values = {120.0};
  cfg.swap_probability = 0.0;
  cfg.benchmark_policy = PreloadPolicy::FD;
  cfg.rng_seed = 3;

  const auto r = simulate(cfg, Strategy::EpsilonGreedy, true, 10);
  CHECK(r.availability() == doctest::Approx(1.0));
  CHECK(r.total_downloads == 0);
  CHECK(r.total_local_hits == r.total_resolved);
  // Initial load only; frozen caches never refill.
  CHECK(r.total_refill_downloads == 2 * 20);
  std::uint64_t late_refills = 0;
  for (std::size_t e = 1; e < r.epochs.size(); ++e) {
    late_refills += r.epochs[e].refill_downloads;
  }
  CHECK(late_refills == 0);
  // Frozen caches compared against their own plan are fully similar.
  for (const auto& m : r.epochs) {
    for (double jws : m.jws_per_anchor) CHECK(jws == doctest::Approx(1.0));
  }
}

TEST_CASE("conservation holds per epoch and across the run") {
  const auto cfg = small_config();
  for (Strategy s : {Strategy::EpsilonGreedy, Strategy::Ucb,
                     Strategy::HybridEpsilonOnUcb}) {
    const auto r = simulate(cfg, s, false, 30);
    std::uint64_t resolved = 0;
    for (const auto& m : r.epochs) {
      CHECK(m.local_hits + m.ferry_serves + m.downloads == m.resolved);
      resolved += m.resolved;
    }
    CHECK(resolved == r.total_resolved);
    CHECK(r.total_local_hits + r.total_ferry_serves + r.total_downloads ==
          r.total_resolved);
    // Whatever was issued either resolved or was still pending at the end.
    CHECK(r.total_resolved <= r.total_requests);
    CHECK(r.total_requests - r.total_resolved <= cfg.num_anchor_uavs * 200);
  }
}

TEST_CASE("identical config and seed replay byte-identically") {
  auto cfg = small_config();
  const std::string log1 = "/tmp/ferrysim_test_log1.csv";
  const std::string log2 = "/tmp/ferrysim_test_log2.csv";
  const auto r1 = simulate(cfg, Strategy::HybridEpsilonOnUcb, false, 12, log1);
  const auto r2 = simulate(cfg, Strategy::HybridEpsilonOnUcb, false, 12, log2);
  CHECK(slurp(log1) == slurp(log2));
  REQUIRE(r1.epochs.size() == r2.epochs.size());
  for (std::size_t e = 0; e < r1.epochs.size(); ++e) {
    CHECK(r1.epochs[e].availability() == r2.epochs[e].availability());
    CHECK(r1.epochs[e].delay_sum == r2.epochs[e].delay_sum);
  }
  const std::string m1 = "/tmp/ferrysim_test_m1.csv";
  const std::string m2 = "/tmp/ferrysim_test_m2.csv";
  write_epoch_csv(r1.epochs, m1, "h");
  write_epoch_csv(r2.epochs, m2, "h");
  CHECK(slurp(m1) == slurp(m2));
  std::remove(log1.c_str());
  std::remove(log2.c_str());
  std::remove(m1.c_str());
  std::remove(m2.c_str());
}

TEST_CASE("a different seed perturbs the run") {
  auto cfg = small_config();
  const auto r1 = simulate(cfg, Strategy::EpsilonGreedy, false, 8);
  cfg.rng_seed = 8;
  const auto r2 = simulate(cfg, Strategy::EpsilonGreedy, false, 8);
  CHECK(r1.total_requests != r2.total_requests);
}

TEST_CASE("round-robin ferry timing and service deadlines") {
  auto cfg = small_config();
  cfg.tad_values = {200.0};
  const std::string log = "/tmp/ferrysim_test_ferry_log.csv";
  const auto r = simulate(cfg, Strategy::EpsilonGreedy, false, 20, log);
  const auto rows = parse_log(log);
  std::remove(log.c_str());

  // Consecutive arrivals of one ferry at one anchor are one full loop apart.
  const double loop = cfg.num_anchor_uavs * (cfg.hover_time +
                                             cfg.transition_time);
  std::map<std::pair<std::string, int>, double> last_arrival;
  int checked = 0;
  for (const auto& row : rows) {
    if (row.kind != "ferry_arrival") continue;
    const auto key = std::make_pair(row.outcome, row.community);
    if (auto it = last_arrival.find(key); it != last_arrival.end()) {
      CHECK(row.time - it->second == doctest::Approx(loop));
      ++checked;
    }
    last_arrival[key] = row.time;
  }
  CHECK(checked > 0);

  // Every ferry serve lands within the deadline, every download at it.
  int serves = 0, downloads = 0;
  for (const auto& row : rows) {
    if (row.kind == "ferry_serve") {
      CHECK(std::stod(row.delay) <= 200.0 + 1e-9);
      ++serves;
    } else if (row.kind == "expiry" && row.outcome == "download") {
      CHECK(std::stod(row.delay) == doctest::Approx(200.0));
      ++downloads;
    }
  }
  CHECK(serves > 0);
  CHECK(downloads > 0);
  CHECK(r.total_ferry_serves == static_cast<std::uint64_t>(serves));
  CHECK(r.total_downloads == static_cast<std::uint64_t>(downloads));
}

TEST_CASE("no ferries and a frozen exclusive plan match the pmf mass") {
  SystemConfig cfg;
  cfg.total_contents = 100;
  cfg.num_anchor_uavs = 5;
  cfg.num_ferry_uavs = 0;
  cfg.anchor_cache_capacity = 20;
  cfg.ferry_cache_capacity = 5;
  cfg.request_rate = 1.0;
  cfg.hover_time = 60.0;
  cfg.transition_time = 30.0;
  cfg.tad_values = {50.0};
  cfg.epoch_length = 2000.0;
  cfg.swap_probability = 0.0;
  cfg.benchmark_policy = PreloadPolicy::SEC;
  cfg.benchmark_lambda = 0.0;
  cfg.rng_seed = 5;

  const auto profiles = build_profiles(cfg);
  const auto r = simulate(cfg, Strategy::EpsilonGreedy, true, 20);
  CHECK(r.total_ferry_serves == 0);
  const auto pmf = zipf_pmf(cfg.zipf_alpha, cfg.total_contents);
  for (std::uint32_t a = 0; a < cfg.num_anchor_uavs; ++a) {
    // SEC lambda=0: anchor a holds global ranks [20a+1, 20(a+1)].
    double mass = 0.0;
    for (std::uint32_t rank = 20 * a; rank < 20 * (a + 1); ++rank) {
      mass += pmf[rank];
    }
    const auto& totals = r.per_anchor[a];
    REQUIRE(totals.resolved > 5000);
    const double simulated =
        static_cast<double>(totals.local_hits) /
        static_cast<double>(totals.resolved);
    CHECK(std::abs(simulated - mass) < 0.01);
  }
}

TEST_CASE("learned runs improve availability over the horizon") {
  auto cfg = small_config();
  cfg.rng_seed = 21;
  const auto r = simulate(cfg, Strategy::HybridEpsilonOnUcb, false, 60);
  const double early = tail_availability(
      {r.epochs.begin(), r.epochs.begin() + 10}, 10);
  const double late = tail_availability(r.epochs, 10);
  CHECK(late > early);
}

TEST_CASE("trace and agent snapshot export") {
  auto cfg = small_config();
  const std::string trace = "/tmp/ferrysim_test_trace.csv";
  const std::string snapdir = "/tmp/ferrysim_test_snap";
  std::filesystem::create_directories(snapdir);
  const auto r = simulate(cfg, Strategy::EpsilonGreedy, false, 4, "", trace,
                          snapdir, 2);
  {
    std::ifstream in(trace);
    std::string header, first;
    std::getline(in, header);
    CHECK(header == "request_id,community_id,content_id,issue_time,tad");
    std::getline(in, first);
    CHECK(!first.empty());
    std::size_t lines = 1;
    std::string line;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == r.total_requests);
  }
  {
    std::ifstream in(snapdir + "/agent_a0_epoch2.csv");
    REQUIRE(in.good());
    std::string comment, header, first;
    std::getline(in, comment);
    std::getline(in, header);
    CHECK(header == "content_id,q,pull_count");
    std::getline(in, first);
    CHECK(first.rfind("1,", 0) == 0);
  }
  std::remove(trace.c_str());
  std::filesystem::remove_all(snapdir);
}

TEST_CASE("hybrid availability trend rises through the learning phase") {
  // Full-scale run, default parameters; the 20-epoch moving average must not
  // regress across the first 200 epochs (small slack for the exploration-
  // phase waves) and must grow substantially overall.
  SystemConfig cfg;
  cfg.rng_seed = 1;
  const auto r = simulate(cfg, Strategy::HybridEpsilonOnUcb, false, 200);
  auto ma20 = [&](int at) {
    double sum = 0.0;
    for (int e = at - 20; e < at; ++e) sum += r.epochs[e].availability();
    return sum / 20.0;
  };
  double prev = ma20(20);
  for (int at = 40; at <= 200; at += 20) {
    const double cur = ma20(at);
    CHECK(cur >= prev - 0.005);
    prev = cur;
  }
  CHECK(ma20(200) > ma20(20) + 0.2);
}

TEST_CASE("epoch metrics carry the epsilon schedule") {
  auto cfg = small_config();
  cfg.epsilon_decay = 0.1;
  const auto r = simulate(cfg, Strategy::EpsilonGreedy, false, 12);
  CHECK(r.epochs[0].epsilon_current == doctest::Approx(1.0));
  CHECK(r.epochs[5].epsilon_current == doctest::Approx(0.5));
  CHECK(r.epochs[11].epsilon_current == doctest::Approx(0.0).epsilon(1e-9));
}
