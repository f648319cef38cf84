#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ferrysim/bandit.hpp"
#include "ferrysim/config.hpp"
#include "ferrysim/experiment.hpp"
#include "ferrysim/metrics.hpp"
#include "ferrysim/model.hpp"
#include "ferrysim/preload.hpp"
#include "ferrysim/sim.hpp"
#include "ferrysim/synthetic.hpp"

namespace py = pybind11;
using namespace ferrysim;

namespace {

SystemConfig config_from_kwargs(const py::kwargs& kwargs) {
  std::string text;
  for (auto item : kwargs) {
    const std::string key = py::str(item.first);
    text += key + "=" + std::string(py::str(item.second)) + "\n";
  }
  return parse_config_text(text);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "UAV content-ferrying simulator with top-k multi-armed bandit caching";

  py::enum_<Strategy>(m, "Strategy")
      .value("EPS_GREEDY", Strategy::EpsilonGreedy)
      .value("UCB", Strategy::Ucb)
      .value("HYBRID", Strategy::HybridEpsilonOnUcb);

  py::enum_<PreloadPolicy>(m, "PreloadPolicy")
      .value("FD", PreloadPolicy::FD)
      .value("SEC", PreloadPolicy::SEC)
      .value("PBC", PreloadPolicy::PBC)
      .value("VBC", PreloadPolicy::VBC);

  py::class_<SystemConfig>(m, "SystemConfig")
      .def(py::init([](const py::kwargs& kwargs) {
        return config_from_kwargs(kwargs);
      }))
      .def_static("from_file", &load_config_file)
      .def_static("from_text", &parse_config_text)
      .def_readwrite("total_contents", &SystemConfig::total_contents)
      .def_readwrite("num_anchor_uavs", &SystemConfig::num_anchor_uavs)
      .def_readwrite("num_ferry_uavs", &SystemConfig::num_ferry_uavs)
      .def_readwrite("anchor_cache_capacity",
                     &SystemConfig::anchor_cache_capacity)
      .def_readwrite("ferry_cache_capacity",
                     &SystemConfig::ferry_cache_capacity)
      .def_readwrite("request_rate", &SystemConfig::request_rate)
      .def_readwrite("hover_time", &SystemConfig::hover_time)
      .def_readwrite("transition_time", &SystemConfig::transition_time)
      .def_readwrite("zipf_alpha", &SystemConfig::zipf_alpha)
      .def_readwrite("swap_probability", &SystemConfig::swap_probability)
      .def_readwrite("tad_values", &SystemConfig::tad_values)
      .def_readwrite("epoch_length", &SystemConfig::epoch_length)
      .def_readwrite("epsilon_initial", &SystemConfig::epsilon_initial)
      .def_readwrite("epsilon_decay", &SystemConfig::epsilon_decay)
      .def_readwrite("ucb_degree", &SystemConfig::ucb_degree)
      .def_readwrite("rng_seed", &SystemConfig::rng_seed)
      .def_readwrite("benchmark_policy", &SystemConfig::benchmark_policy)
      .def_readwrite("benchmark_lambda", &SystemConfig::benchmark_lambda)
      .def("resolved_epoch_length", &SystemConfig::resolved_epoch_length)
      .def("canonical_text", &SystemConfig::canonical_text)
      .def("hash", &SystemConfig::hash)
      .def("validate", &SystemConfig::validate);

  m.def("zipf_pmf", &zipf_pmf, py::arg("alpha"), py::arg("total_contents"));
  m.def(
      "smith_waterman_score",
      [](const std::vector<ContentId>& a, const std::vector<ContentId>& b,
         double match, double mismatch, double gap) {
        return smith_waterman_score(a, b, match, mismatch, gap);
      },
      py::arg("seq_a"), py::arg("seq_b"), py::arg("match") = 1.0,
      py::arg("mismatch") = -1.0, py::arg("gap") = -1.0);
  m.def(
      "smith_waterman_distance",
      [](const std::vector<ContentId>& a, const std::vector<ContentId>& b,
         double match, double mismatch, double gap) {
        return smith_waterman_distance(a, b, match, mismatch, gap);
      },
      py::arg("seq_a"), py::arg("seq_b"), py::arg("match") = 1.0,
      py::arg("mismatch") = -1.0, py::arg("gap") = -1.0);
  m.def(
      "jaro_winkler",
      [](const std::vector<ContentId>& a, const std::vector<ContentId>& b,
         double prefix_scale, int max_prefix) {
        return jaro_winkler(a, b, prefix_scale, max_prefix);
      },
      py::arg("seq_a"), py::arg("seq_b"), py::arg("prefix_scale") = 0.1,
      py::arg("max_prefix") = 4);
  m.def("content_value", &content_value, py::arg("p_i"), py::arg("tad_i"),
        py::arg("kappa"), py::arg("tad_min"), py::arg("p_top"));
  m.def("composite_reward", &composite_reward, py::arg("record"),
        py::arg("weights"), py::arg("epoch_request_total"));

  py::class_<RewardRecord>(m, "RewardRecord")
      .def(py::init<>())
      .def_readwrite("local_hits", &RewardRecord::local_hits)
      .def_readwrite("ferry_credit", &RewardRecord::ferry_credit)
      .def_readwrite("global_demand", &RewardRecord::global_demand)
      .def_readwrite("miss_penalties", &RewardRecord::miss_penalties);

  py::class_<RewardWeights>(m, "RewardWeights")
      .def(py::init<>())
      .def_readwrite("local", &RewardWeights::local)
      .def_readwrite("ferry", &RewardWeights::ferry)
      .def_readwrite("global_demand", &RewardWeights::global)
      .def_readwrite("penalty", &RewardWeights::penalty);

  py::class_<CommunityProfile>(m, "CommunityProfile")
      .def_readonly("community_id", &CommunityProfile::community_id)
      .def_readonly("rank_order", &CommunityProfile::rank_order)
      .def_readonly("pmf_by_rank", &CommunityProfile::pmf_by_rank)
      .def("probability_of", &CommunityProfile::probability_of);

  py::class_<ContentCatalog>(m, "ContentCatalog")
      .def_readonly("total_contents", &ContentCatalog::total_contents)
      .def_readonly("tad_min", &ContentCatalog::tad_min)
      .def("tad", &ContentCatalog::tad);

  m.def("build_profiles", &build_profiles);
  m.def("build_catalog", &build_catalog);

  py::class_<PreloadPlan>(m, "PreloadPlan")
      .def_readonly("policy", &PreloadPlan::policy)
      .def_readonly("lambda_", &PreloadPlan::lambda)
      .def_readonly("segment1_size", &PreloadPlan::segment1_size)
      .def_readonly("per_anchor_cache", &PreloadPlan::per_anchor_cache)
      .def_readonly("system_content_count",
                    &PreloadPlan::system_content_count)
      .def_readonly("non_exclusive_count", &PreloadPlan::non_exclusive_count)
      .def_readonly("exclusive_total", &PreloadPlan::exclusive_total);

  m.def("plan_fd", &plan_fd);
  m.def("plan_sec", &plan_sec);
  m.def("plan_pbc", &plan_pbc);
  m.def("plan_vbc", &plan_vbc, py::arg("profiles"), py::arg("catalog"),
        py::arg("lambda"), py::arg("cache_capacity"), py::arg("kappa") = 1.0);
  m.def("build_plan", &build_plan, py::arg("policy"), py::arg("profiles"),
        py::arg("catalog"), py::arg("lambda"), py::arg("cache_capacity"),
        py::arg("kappa") = 1.0);
  m.def("benchmark_sequence", &benchmark_sequence, py::arg("plan"),
        py::arg("community_id"));

  py::class_<TopKAgent>(m, "TopKAgent")
      .def(py::init<std::uint32_t, std::uint32_t, Strategy, double, double,
                    double, double, std::uint64_t>(),
           py::arg("total_contents"), py::arg("k"), py::arg("strategy"),
           py::arg("epsilon_initial") = 1.0, py::arg("epsilon_decay") = 0.0025,
           py::arg("ucb_degree") = 2.0, py::arg("hybrid_anneal_power") = 6.0,
           py::arg("seed") = 1)
      .def("select_top_k", &TopKAgent::select_top_k,
           py::return_value_policy::copy)
      .def("update_q", &TopKAgent::update_q)
      .def("decay_epsilon", &TopKAgent::decay_epsilon)
      .def("end_epoch", &TopKAgent::end_epoch)
      .def("learnt_sequence", &TopKAgent::learnt_sequence)
      .def("q_value", &TopKAgent::q_value)
      .def("pull_count", &TopKAgent::pull_count)
      .def_property_readonly("epsilon", &TopKAgent::epsilon)
      .def_property_readonly("epoch_index", &TopKAgent::epoch_index);

  py::class_<EpochMetrics>(m, "EpochMetrics")
      .def_readonly("epoch_index", &EpochMetrics::epoch_index)
      .def_readonly("requests_issued", &EpochMetrics::requests_issued)
      .def_readonly("resolved", &EpochMetrics::resolved)
      .def_readonly("local_hits", &EpochMetrics::local_hits)
      .def_readonly("ferry_serves", &EpochMetrics::ferry_serves)
      .def_readonly("downloads", &EpochMetrics::downloads)
      .def_readonly("refill_downloads", &EpochMetrics::refill_downloads)
      .def_readonly("jws_per_anchor", &EpochMetrics::jws_per_anchor)
      .def_readonly("jws_per_ferry", &EpochMetrics::jws_per_ferry)
      .def_readonly("epsilon", &EpochMetrics::epsilon_current)
      .def("availability", &EpochMetrics::availability)
      .def("mean_access_delay", &EpochMetrics::mean_access_delay)
      .def("jws_anchor_mean", &EpochMetrics::jws_anchor_mean)
      .def("jws_ferry_mean", &EpochMetrics::jws_ferry_mean);

  py::class_<AnchorTotals>(m, "AnchorTotals")
      .def_readonly("requests", &AnchorTotals::requests)
      .def_readonly("resolved", &AnchorTotals::resolved)
      .def_readonly("local_hits", &AnchorTotals::local_hits)
      .def_readonly("ferry_serves", &AnchorTotals::ferry_serves)
      .def_readonly("downloads", &AnchorTotals::downloads)
      .def_readonly("refill_downloads", &AnchorTotals::refill_downloads);

  py::class_<RunResult>(m, "RunResult")
      .def_readonly("epochs", &RunResult::epochs)
      .def_readonly("per_anchor", &RunResult::per_anchor)
      .def_readonly("total_requests", &RunResult::total_requests)
      .def_readonly("total_resolved", &RunResult::total_resolved)
      .def_readonly("total_local_hits", &RunResult::total_local_hits)
      .def_readonly("total_ferry_serves", &RunResult::total_ferry_serves)
      .def_readonly("total_downloads", &RunResult::total_downloads)
      .def_readonly("total_refill_downloads",
                    &RunResult::total_refill_downloads)
      .def_readonly("final_sequences", &RunResult::final_sequences)
      .def("availability", &RunResult::availability);

  m.def("simulate", &simulate, py::arg("config"), py::arg("strategy"),
        py::arg("frozen") = false, py::arg("horizon_epochs") = 400,
        py::arg("event_log_path") = std::string(),
        py::arg("trace_path") = std::string(),
        py::arg("snapshot_dir") = std::string(), py::arg("snapshot_every") = 0,
        py::call_guard<py::gil_scoped_release>());
}
