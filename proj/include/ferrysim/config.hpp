#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ferrysim {

enum class TrajectoryPolicy { RoundRobin };
enum class ProfileMode { Chained, Alternating };
enum class PreloadPolicy { FD, SEC, PBC, VBC };
enum class Strategy { EpsilonGreedy, Ucb, HybridEpsilonOnUcb };

const char* to_string(PreloadPolicy p);
const char* to_string(Strategy s);
Strategy strategy_from_string(const std::string& name);
PreloadPolicy preload_policy_from_string(const std::string& name);

struct SystemConfig {
  std::uint32_t total_contents = 1000;     // C
  std::uint32_t num_anchor_uavs = 12;      // N_A
  std::uint32_t num_ferry_uavs = 3;        // N_F
  std::uint32_t anchor_cache_capacity = 100;  // C_A
  std::uint32_t ferry_cache_capacity = 100;   // C_F
  double request_rate = 1.0;               // mu, requests/second per community
  double hover_time = 600.0;               // seconds
  double transition_time = 300.0;          // seconds
  double zipf_alpha = 0.7;
  TrajectoryPolicy trajectory_policy = TrajectoryPolicy::RoundRobin;
  double swap_probability = 0.3;
  std::vector<double> tad_values = {300.0};  // seconds
  // 0 = derive one fleet coverage period: N_A * (hover + transition) / N_F.
  double epoch_length = 0.0;
  double epsilon_initial = 1.0;
  double epsilon_decay = 0.0025;  // per epoch, linear
  double ucb_degree = 2.0;        // alpha_u
  std::uint64_t rng_seed = 1;

  ProfileMode profile_mode = ProfileMode::Chained;
  double reward_w_local = 1.0;
  double reward_w_ferry = 1.0;
  double reward_w_global = 0.5;
  double reward_w_penalty = 0.5;
  double value_kappa = 1.0;
  // Exponent on epsilon modulating the hybrid strategy's confidence bonus.
  double hybrid_anneal_power = 6.0;
  PreloadPolicy benchmark_policy = PreloadPolicy::VBC;
  double benchmark_lambda = 1.0;

  double resolved_epoch_length() const {
    if (epoch_length > 0.0) return epoch_length;
    return num_anchor_uavs * (hover_time + transition_time) /
           static_cast<double>(num_ferry_uavs == 0 ? 1 : num_ferry_uavs);
  }

  // Canonical key=value rendering, one field per line, fixed order.
  std::string canonical_text() const;
  std::uint64_t hash() const;

  // Throws ConfigError on violated ranges/relations.
  void validate() const;
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Parses a flat key=value file. Every key optional (struct defaults),
// unknown and duplicate keys rejected, '#' starts a comment.
SystemConfig parse_config_text(const std::string& text);
SystemConfig load_config_file(const std::string& path);

}  // namespace ferrysim
