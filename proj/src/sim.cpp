#include "ferrysim/sim.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <queue>
#include <stdexcept>

#include "ferrysim/workload.hpp"

namespace ferrysim {

std::vector<CommunityProfile> build_profiles(const SystemConfig& config) {
  const auto pmf = zipf_pmf(config.zipf_alpha, config.total_contents);
  Rng rng(substream_seed(config.rng_seed, StreamTag::Profiles));
  if (config.profile_mode == ProfileMode::Alternating) {
    return alternating_profiles(pmf, config.num_anchor_uavs,
                                config.swap_probability, rng);
  }
  return generate_profiles(pmf, config.num_anchor_uavs,
                           config.swap_probability, rng);
}

ContentCatalog build_catalog(const SystemConfig& config) {
  Rng rng(substream_seed(config.rng_seed, StreamTag::Tads));
  return assign_tads(config.total_contents, config.tad_values, rng);
}

namespace {

struct Event {
  double time = 0.0;
  EventKind kind = EventKind::RequestArrival;
  std::uint64_t seq = 0;
  std::int32_t actor = 0;        // community id or ferry id
  std::uint64_t request_id = 0;  // TadExpiry only
};

struct EventLater {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    if (a.kind != b.kind) return static_cast<int>(a.kind) > static_cast<int>(b.kind);
    return a.seq > b.seq;
  }
};

struct Pending {
  ContentId content = 0;
  double issue = 0.0;
};

struct Anchor {
  int id = 0;
  std::vector<std::uint8_t> cached;
  std::vector<ContentId> cache_list;
  std::unique_ptr<TopKAgent> agent;  // null when frozen
  std::map<std::uint64_t, Pending> pending;  // rid order = issue order

  // Demand resolved locally since the last ferry pickup (the outbox).
  std::vector<std::uint32_t> outbox;
  std::vector<ContentId> outbox_touched;
  std::uint64_t outbox_drains = 0;

  std::uint64_t ep_requests = 0, ep_hits = 0, ep_ferry = 0, ep_downloads = 0,
                ep_refill = 0;
  double ep_delay_sum = 0.0;
  AnchorTotals totals;

  std::optional<RequestGenerator> gen;
  RequestEvent next_request;

  void outbox_add(ContentId c) {
    if (outbox[c]++ == 0) outbox_touched.push_back(c);
  }
};

struct FerryItem {
  ContentId content = 0;
  int contributor = 0;
  std::uint64_t load_seq = 0;
};

struct CarriedSummary {
  int source = 0;
  std::uint64_t pickup_seq = 0;
  std::vector<std::pair<ContentId, std::uint32_t>> counts;
  std::vector<std::uint8_t> delivered;
  std::uint32_t remaining = 0;
};

struct Ferry {
  int id = 0;
  int at_anchor = 0;
  int next_anchor = 0;
  bool in_transit = false;
  std::vector<FerryItem> items;
  std::vector<std::uint8_t> carried;
  std::vector<std::vector<std::uint8_t>> last_known;  // empty = never visited
  std::vector<CarriedSummary> summaries;
  std::vector<std::vector<std::uint32_t>> credits;  // [anchor][content]
  std::vector<std::vector<ContentId>> credits_touched;
  std::uint64_t load_seq = 0;
};

class Simulation {
 public:
  Simulation(const SystemConfig& config, const ContentCatalog& catalog,
             const std::vector<CommunityProfile>& profiles,
             const SimOptions& options)
      : cfg_(config), catalog_(catalog), profiles_(profiles), opt_(options) {
    if (profiles.size() != cfg_.num_anchor_uavs) {
      throw std::invalid_argument("run_simulation: profiles/anchors mismatch");
    }
    if (!opt_.reference_plan) {
      throw std::invalid_argument("run_simulation: reference plan required");
    }
    if (opt_.frozen && !opt_.frozen_plan) {
      throw std::invalid_argument("run_simulation: frozen plan required");
    }
    weights_ = RewardWeights{cfg_.reward_w_local, cfg_.reward_w_ferry,
                             cfg_.reward_w_global, cfg_.reward_w_penalty};
    epoch_len_ = cfg_.resolved_epoch_length();
    t_end_ = epoch_len_ * opt_.horizon_epochs;
  }

  RunResult run();

 private:
  void push(double time, EventKind kind, std::int32_t actor,
            std::uint64_t request_id = 0) {
    queue_.push(Event{time, kind, seq_counter_++, actor, request_id});
  }

  int route_next(int anchor) const {
    return (anchor + 1) % static_cast<int>(cfg_.num_anchor_uavs);
  }

  void log_row(double time, const char* kind, int community,
               ContentId content, const char* outcome, double delay,
               bool has_delay) {
    if (!log_) return;
    if (content) {
      std::fprintf(log_, "%.6f,%s,%d,%u,%s,", time, kind, community, content,
                   outcome);
    } else {
      std::fprintf(log_, "%.6f,%s,%d,,%s,", time, kind, community, outcome);
    }
    if (has_delay) std::fprintf(log_, "%.6f\n", delay);
    else std::fprintf(log_, "\n");
  }

  void schedule_request(Anchor& anchor, double now);
  void handle_request(Anchor& anchor, double now);
  void handle_tad_expiry(Anchor& anchor, std::uint64_t rid, double now);
  void handle_ferry_arrival(Ferry& ferry, double now);
  void ferry_fill(Ferry& ferry, Anchor& anchor);
  void handle_epoch_boundary(int closing_epoch);

  std::vector<ContentId> anchor_ranked_cache(const Anchor& anchor) const {
    return anchor.agent ? anchor.agent->learnt_sequence() : anchor.cache_list;
  }

  const SystemConfig& cfg_;
  const ContentCatalog& catalog_;
  const std::vector<CommunityProfile>& profiles_;
  const SimOptions& opt_;
  RewardWeights weights_;

  double epoch_len_ = 0.0;
  double t_end_ = 0.0;
  std::vector<Anchor> anchors_;
  std::vector<Ferry> ferries_;
  std::priority_queue<Event, std::vector<Event>, EventLater> queue_;
  std::uint64_t seq_counter_ = 0;
  std::FILE* log_ = nullptr;
  std::FILE* trace_ = nullptr;
  RunResult result_;
};

void Simulation::schedule_request(Anchor& anchor, double now) {
  RequestEvent ev = anchor.gen->next(now);
  if (ev.issue_time <= t_end_) {
    anchor.next_request = ev;
    push(ev.issue_time, EventKind::RequestArrival, anchor.id);
  }
}

void Simulation::handle_request(Anchor& anchor, double now) {
  const RequestEvent req = anchor.next_request;
  schedule_request(anchor, now);

  ++anchor.ep_requests;
  ++anchor.totals.requests;
  if (trace_) {
    std::fprintf(trace_, "%llu,%d,%u,%.6f,%.3f\n",
                 static_cast<unsigned long long>(req.request_id), anchor.id,
                 req.content_id, req.issue_time, req.tad);
  }

  if (anchor.cached[req.content_id]) {
    ++anchor.ep_hits;
    ++anchor.totals.local_hits;
    ++anchor.totals.resolved;
    anchor.outbox_add(req.content_id);
    if (anchor.agent) anchor.agent->record_local_hit(req.content_id);
    log_row(now, "request", anchor.id, req.content_id, "hit", 0.0, true);
    return;
  }
  anchor.pending.emplace(req.request_id,
                         Pending{req.content_id, req.issue_time});
  const double expiry = req.issue_time + req.tad;
  if (expiry <= t_end_) {
    push(expiry, EventKind::TadExpiry, anchor.id, req.request_id);
  }
  log_row(now, "request", anchor.id, req.content_id, "deferred", 0.0, false);
}

void Simulation::handle_tad_expiry(Anchor& anchor, std::uint64_t rid,
                                   double now) {
  auto it = anchor.pending.find(rid);
  if (it == anchor.pending.end()) {
    // Already served by a ferry; stale timer.
    return;
  }
  const ContentId content = it->second.content;
  anchor.pending.erase(it);
  ++anchor.ep_downloads;
  ++anchor.totals.downloads;
  ++anchor.totals.resolved;
  anchor.ep_delay_sum += catalog_.tad(content);
  anchor.outbox_add(content);
  if (anchor.agent) anchor.agent->record_miss_penalty(content);
  log_row(now, "expiry", anchor.id, content, "download", catalog_.tad(content),
          true);
}

void Simulation::ferry_fill(Ferry& ferry, Anchor& anchor) {
  const int next = route_next(anchor.id);
  const auto& next_known = ferry.last_known[next];

  std::vector<ContentId> fresh;    // to load, rank order
  std::vector<ContentId> refresh;  // already aboard, re-drawn from this cache
  for (ContentId id : anchor_ranked_cache(anchor)) {
    if (!next_known.empty() && next_known[id]) continue;
    if (ferry.carried[id]) {
      refresh.push_back(id);
    } else if (fresh.size() < cfg_.ferry_cache_capacity) {
      fresh.push_back(id);
    }
  }

  for (ContentId id : refresh) {
    for (auto& item : ferry.items) {
      if (item.content == id) {
        item.contributor = anchor.id;
        item.load_seq = ferry.load_seq++;
        break;
      }
    }
  }

  const std::size_t room = cfg_.ferry_cache_capacity;
  const std::size_t need_evict =
      ferry.items.size() + fresh.size() > room
          ? ferry.items.size() + fresh.size() - room
          : 0;
  if (need_evict > 0) {
    // Oldest loads leave first; most recently loaded are kept.
    std::sort(ferry.items.begin(), ferry.items.end(),
              [](const FerryItem& a, const FerryItem& b) {
                return a.load_seq < b.load_seq;
              });
    for (std::size_t i = 0; i < need_evict; ++i) {
      ferry.carried[ferry.items[i].content] = 0;
    }
    ferry.items.erase(ferry.items.begin(),
                      ferry.items.begin() + need_evict);
  }
  for (ContentId id : fresh) {
    ferry.items.push_back(FerryItem{id, anchor.id, ferry.load_seq++});
    ferry.carried[id] = 1;
  }
}

void Simulation::handle_ferry_arrival(Ferry& ferry, double now) {
  const int a = ferry.in_transit ? ferry.next_anchor : ferry.at_anchor;
  ferry.at_anchor = a;
  ferry.in_transit = false;
  Anchor& anchor = anchors_[a];
  char ferry_tag[16];
  std::snprintf(ferry_tag, sizeof(ferry_tag), "f%d", ferry.id);
  log_row(now, "ferry_arrival", a, 0, ferry_tag, 0.0, false);

  // 1. Serve pending requests for carried contents, oldest request first.
  std::vector<std::uint64_t> served;
  for (const auto& [rid, p] : anchor.pending) {
    if (ferry.carried[p.content]) served.push_back(rid);
  }
  for (std::uint64_t rid : served) {
    auto it = anchor.pending.find(rid);
    const ContentId content = it->second.content;
    const double delay = now - it->second.issue;
    anchor.pending.erase(it);
    ++anchor.ep_ferry;
    ++anchor.totals.ferry_serves;
    ++anchor.totals.resolved;
    anchor.ep_delay_sum += delay;
    anchor.outbox_add(content);
    // Credit the anchor that contributed this content, unless it is this one.
    int contributor = -1;
    for (const auto& item : ferry.items) {
      if (item.content == content) {
        contributor = item.contributor;
        break;
      }
    }
    if (contributor >= 0 && contributor != a) {
      auto& bucket = ferry.credits[contributor];
      if (bucket[content]++ == 0) {
        ferry.credits_touched[contributor].push_back(content);
      }
    }
    log_row(now, "ferry_serve", a, content, "served", delay, true);
  }

  // 2. Deliver carried demand summaries and any credits destined here.
  std::vector<FerrySummary> deliveries;
  for (auto& s : ferry.summaries) {
    if (s.source == a || s.delivered[a]) continue;
    s.delivered[a] = 1;
    --s.remaining;
    if (anchor.agent) {
      deliveries.push_back(FerrySummary{ferry.id, s.source, s.pickup_seq,
                                        s.counts});
    }
  }
  std::erase_if(ferry.summaries,
                [](const CarriedSummary& s) { return s.remaining == 0; });
  FerryCredits credits;
  auto& touched = ferry.credits_touched[a];
  if (!touched.empty()) {
    std::sort(touched.begin(), touched.end());
    for (ContentId c : touched) {
      credits.served_counts.emplace_back(c, ferry.credits[a][c]);
      ferry.credits[a][c] = 0;
    }
    touched.clear();
  }
  if (anchor.agent && (!deliveries.empty() || !credits.served_counts.empty())) {
    anchor.agent->merge_global_feedback(deliveries, credits);
  }

  // 3. Drain this anchor's outbox into a fresh summary.
  if (!anchor.outbox_touched.empty()) {
    CarriedSummary s;
    s.source = a;
    s.pickup_seq = anchor.outbox_drains++;
    std::sort(anchor.outbox_touched.begin(), anchor.outbox_touched.end());
    for (ContentId c : anchor.outbox_touched) {
      s.counts.emplace_back(c, anchor.outbox[c]);
      anchor.outbox[c] = 0;
    }
    anchor.outbox_touched.clear();
    s.delivered.assign(cfg_.num_anchor_uavs, 0);
    s.delivered[a] = 1;
    s.remaining = cfg_.num_anchor_uavs - 1;
    if (s.remaining > 0) ferry.summaries.push_back(std::move(s));
  }

  // 4. Remember this anchor's cache for later fill decisions.
  ferry.last_known[a] = anchor.cached;

  // 5. Reload for the next anchor on the route.
  ferry_fill(ferry, anchor);

  if (now + cfg_.hover_time <= t_end_) {
    push(now + cfg_.hover_time, EventKind::FerryDeparture, ferry.id);
  }
}

void Simulation::handle_epoch_boundary(int closing_epoch) {
  EpochMetrics m;
  m.epoch_index = closing_epoch;

  // Q updates first: the epoch's learnt sequence reflects its own rewards.
  for (auto& anchor : anchors_) {
    if (!anchor.agent) continue;
    for (ContentId c : anchor.cache_list) {
      const double reward =
          anchor.ep_requests
              ? composite_reward(anchor.agent->record(c), weights_,
                                 anchor.ep_requests)
              : 0.0;
      anchor.agent->update_q(c, reward);
    }
  }

  m.epsilon_current =
      anchors_.front().agent ? anchors_.front().agent->epsilon() : 0.0;
  for (auto& anchor : anchors_) {
    m.requests_issued += anchor.ep_requests;
    m.local_hits += anchor.ep_hits;
    m.ferry_serves += anchor.ep_ferry;
    m.downloads += anchor.ep_downloads;
    m.refill_downloads += anchor.ep_refill;
    m.delay_sum += anchor.ep_delay_sum;
    const std::vector<ContentId> learnt =
        anchor.agent ? anchor.agent->learnt_sequence() : anchor.cache_list;
    m.jws_per_anchor.push_back(jaro_winkler(
        learnt, benchmark_sequence(*opt_.reference_plan, anchor.id)));
  }
  m.resolved = m.local_hits + m.ferry_serves + m.downloads;

  for (const auto& ferry : ferries_) {
    const int dest =
        ferry.in_transit ? ferry.next_anchor : route_next(ferry.at_anchor);
    const auto& ref_full = benchmark_sequence(*opt_.reference_plan, dest);
    const std::uint32_t seg1 = opt_.reference_plan->segment1_size;
    std::span<const ContentId> ref(ref_full);
    // The ferry's best sequence is the exclusive (Segment-2) slice of its
    // next destination; with no segmentation, the full benchmark sequence.
    if (seg1 > 0 && seg1 < ref_full.size()) ref = ref.subspan(seg1);
    // Ferry comparand: carried contents, most recently loaded first.
    std::vector<std::pair<std::uint64_t, ContentId>> by_recency;
    by_recency.reserve(ferry.items.size());
    for (const auto& item : ferry.items) {
      by_recency.emplace_back(item.load_seq, item.content);
    }
    std::sort(by_recency.rbegin(), by_recency.rend());
    std::vector<ContentId> carried;
    carried.reserve(by_recency.size());
    for (const auto& [seq, content] : by_recency) carried.push_back(content);
    m.jws_per_ferry.push_back(jaro_winkler(carried, ref));
  }

  result_.epochs.push_back(std::move(m));

  if (opt_.snapshot_every > 0 && !opt_.snapshot_dir.empty() &&
      closing_epoch % opt_.snapshot_every == 0) {
    for (const auto& anchor : anchors_) {
      if (!anchor.agent) continue;
      char path[512];
      std::snprintf(path, sizeof(path), "%s/agent_a%d_epoch%d.csv",
                    opt_.snapshot_dir.c_str(), anchor.id, closing_epoch);
      char header[64];
      std::snprintf(header, sizeof(header), "anchor=%d epoch=%d", anchor.id,
                    closing_epoch);
      anchor.agent->write_snapshot_csv(path, header);
    }
  }

  for (auto& anchor : anchors_) {
    anchor.ep_requests = anchor.ep_hits = anchor.ep_ferry =
        anchor.ep_downloads = anchor.ep_refill = 0;
    anchor.ep_delay_sum = 0.0;
  }

  const int next_epoch = closing_epoch + 1;
  if (next_epoch >= opt_.horizon_epochs) return;

  for (auto& anchor : anchors_) {
    if (!anchor.agent) continue;
    anchor.agent->end_epoch();
    anchor.agent->decay_epsilon();
    const auto& fresh = anchor.agent->select_top_k();
    std::uint64_t new_fetches = 0;
    for (ContentId id : fresh) {
      if (!anchor.cached[id]) ++new_fetches;
    }
    anchor.ep_refill = new_fetches;
    anchor.totals.refill_downloads += new_fetches;
    anchor.cache_list = fresh;
    std::fill(anchor.cached.begin(), anchor.cached.end(), std::uint8_t{0});
    for (ContentId id : anchor.cache_list) anchor.cached[id] = 1;
  }
  push(epoch_len_ * (next_epoch + 1), EventKind::EpochBoundary, next_epoch);
}

RunResult Simulation::run() {
  const std::uint32_t C = cfg_.total_contents;
  if (!opt_.event_log_path.empty()) {
    log_ = std::fopen(opt_.event_log_path.c_str(), "w");
    if (!log_) throw std::runtime_error("cannot open event log");
    std::fprintf(log_, "time,kind,community,content,outcome,delay\n");
  }
  if (!opt_.trace_path.empty()) {
    trace_ = std::fopen(opt_.trace_path.c_str(), "w");
    if (!trace_) throw std::runtime_error("cannot open trace file");
    std::fprintf(trace_, "request_id,community_id,content_id,issue_time,tad\n");
  }

  anchors_.resize(cfg_.num_anchor_uavs);
  for (std::uint32_t j = 0; j < cfg_.num_anchor_uavs; ++j) {
    Anchor& anchor = anchors_[j];
    anchor.id = static_cast<int>(j);
    anchor.cached.assign(C + 1, 0);
    anchor.outbox.assign(C + 1, 0);
    if (opt_.frozen) {
      anchor.cache_list = opt_.frozen_plan->anchor_cache(j);
    } else {
      anchor.agent = std::make_unique<TopKAgent>(
          C, cfg_.anchor_cache_capacity, opt_.strategy, cfg_.epsilon_initial,
          cfg_.epsilon_decay, cfg_.ucb_degree, cfg_.hybrid_anneal_power,
          substream_seed(cfg_.rng_seed, StreamTag::Agent, j));
      anchor.cache_list = anchor.agent->select_top_k();
    }
    for (ContentId id : anchor.cache_list) anchor.cached[id] = 1;
    anchor.ep_refill = anchor.cache_list.size();
    anchor.totals.refill_downloads += anchor.cache_list.size();
    anchor.gen.emplace(profiles_[j], catalog_, cfg_.request_rate,
                       substream_seed(cfg_.rng_seed, StreamTag::Workload, j));
    schedule_request(anchor, 0.0);
  }

  ferries_.resize(cfg_.num_ferry_uavs);
  for (std::uint32_t f = 0; f < cfg_.num_ferry_uavs; ++f) {
    Ferry& ferry = ferries_[f];
    ferry.id = static_cast<int>(f);
    ferry.at_anchor = static_cast<int>(f * cfg_.num_anchor_uavs /
                                       cfg_.num_ferry_uavs);
    ferry.carried.assign(C + 1, 0);
    ferry.last_known.resize(cfg_.num_anchor_uavs);
    ferry.credits.assign(cfg_.num_anchor_uavs,
                         std::vector<std::uint32_t>(C + 1, 0));
    ferry.credits_touched.resize(cfg_.num_anchor_uavs);
    push(0.0, EventKind::FerryArrival, ferry.id);
  }

  if (opt_.horizon_epochs > 0) {
    push(epoch_len_, EventKind::EpochBoundary, 0);
  }

  while (!queue_.empty()) {
    const Event ev = queue_.top();
    queue_.pop();
    switch (ev.kind) {
      case EventKind::RequestArrival:
        handle_request(anchors_[ev.actor], ev.time);
        break;
      case EventKind::TadExpiry:
        handle_tad_expiry(anchors_[ev.actor], ev.request_id, ev.time);
        break;
      case EventKind::FerryArrival:
        handle_ferry_arrival(ferries_[ev.actor], ev.time);
        break;
      case EventKind::FerryDeparture: {
        Ferry& ferry = ferries_[ev.actor];
        ferry.in_transit = true;
        ferry.next_anchor = route_next(ferry.at_anchor);
        char ferry_tag[16];
        std::snprintf(ferry_tag, sizeof(ferry_tag), "f%d", ferry.id);
        log_row(ev.time, "ferry_departure", ferry.at_anchor, 0, ferry_tag, 0.0,
                false);
        if (ev.time + cfg_.transition_time <= t_end_) {
          push(ev.time + cfg_.transition_time, EventKind::FerryArrival,
               ferry.id);
        }
        break;
      }
      case EventKind::EpochBoundary:
        handle_epoch_boundary(static_cast<int>(ev.actor));
        break;
    }
  }

  for (auto& anchor : anchors_) {
    result_.per_anchor.push_back(anchor.totals);
    result_.total_requests += anchor.totals.requests;
    result_.total_resolved += anchor.totals.resolved;
    result_.total_local_hits += anchor.totals.local_hits;
    result_.total_ferry_serves += anchor.totals.ferry_serves;
    result_.total_downloads += anchor.totals.downloads;
    result_.total_refill_downloads += anchor.totals.refill_downloads;
    result_.final_sequences.push_back(
        anchor.agent ? anchor.agent->learnt_sequence() : anchor.cache_list);
  }

  if (log_) std::fclose(log_);
  if (trace_) std::fclose(trace_);
  return std::move(result_);
}

}  // namespace

RunResult run_simulation(const SystemConfig& config,
                         const ContentCatalog& catalog,
                         const std::vector<CommunityProfile>& profiles,
                         const SimOptions& options) {
  Simulation sim(config, catalog, profiles, options);
  return sim.run();
}

}  // namespace ferrysim
