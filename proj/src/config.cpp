#include "ferrysim/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ferrysim {

const char* to_string(PreloadPolicy p) {
  switch (p) {
    case PreloadPolicy::FD: return "fd";
    case PreloadPolicy::SEC: return "sec";
    case PreloadPolicy::PBC: return "pbc";
    case PreloadPolicy::VBC: return "vbc";
  }
  return "?";
}

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::EpsilonGreedy: return "eps-greedy";
    case Strategy::Ucb: return "ucb";
    case Strategy::HybridEpsilonOnUcb: return "hybrid";
  }
  return "?";
}

Strategy strategy_from_string(const std::string& name) {
  if (name == "eps-greedy" || name == "epsilon-greedy") {
    return Strategy::EpsilonGreedy;
  }
  if (name == "ucb") return Strategy::Ucb;
  if (name == "hybrid") return Strategy::HybridEpsilonOnUcb;
  throw ConfigError("unknown strategy '" + name +
                    "' (expected eps-greedy|ucb|hybrid)");
}

PreloadPolicy preload_policy_from_string(const std::string& name) {
  if (name == "fd") return PreloadPolicy::FD;
  if (name == "sec") return PreloadPolicy::SEC;
  if (name == "pbc") return PreloadPolicy::PBC;
  if (name == "vbc") return PreloadPolicy::VBC;
  throw ConfigError("unknown preload policy '" + name +
                    "' (expected fd|sec|pbc|vbc)");
}

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Parser {
  int line_no = 0;
  std::string key;

  [[noreturn]] void fail(const std::string& msg) const {
    std::ostringstream os;
    os << "config line " << line_no << ": key '" << key << "': " << msg;
    throw ConfigError(os.str());
  }

  double as_double(const std::string& v) const {
    try {
      std::size_t pos = 0;
      double d = std::stod(v, &pos);
      if (pos != v.size()) fail("trailing characters in number '" + v + "'");
      return d;
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      fail("expected a number, got '" + v + "'");
    }
  }

  std::uint64_t as_uint(const std::string& v) const {
    try {
      std::size_t pos = 0;
      if (!v.empty() && v[0] == '-') fail("expected a non-negative integer");
      std::uint64_t u = std::stoull(v, &pos);
      if (pos != v.size()) fail("trailing characters in integer '" + v + "'");
      return u;
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      fail("expected an integer, got '" + v + "'");
    }
  }

  std::vector<double> as_double_list(const std::string& v) const {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) fail("empty list element");
      out.push_back(as_double(item));
    }
    if (out.empty()) fail("expected a comma-separated list");
    return out;
  }
};

}  // namespace

std::string SystemConfig::canonical_text() const {
  std::ostringstream os;
  os << "total_contents=" << total_contents << '\n'
     << "num_anchor_uavs=" << num_anchor_uavs << '\n'
     << "num_ferry_uavs=" << num_ferry_uavs << '\n'
     << "anchor_cache_capacity=" << anchor_cache_capacity << '\n'
     << "ferry_cache_capacity=" << ferry_cache_capacity << '\n'
     << "request_rate=" << format_double(request_rate) << '\n'
     << "hover_time=" << format_double(hover_time) << '\n'
     << "transition_time=" << format_double(transition_time) << '\n'
     << "zipf_alpha=" << format_double(zipf_alpha) << '\n'
     << "trajectory_policy=RoundRobin\n"
     << "swap_probability=" << format_double(swap_probability) << '\n';
  os << "tad_values=";
  for (std::size_t i = 0; i < tad_values.size(); ++i) {
    if (i) os << ',';
    os << format_double(tad_values[i]);
  }
  os << '\n'
     << "epoch_length=" << format_double(resolved_epoch_length()) << '\n'
     << "epsilon_initial=" << format_double(epsilon_initial) << '\n'
     << "epsilon_decay=" << format_double(epsilon_decay) << '\n'
     << "ucb_degree=" << format_double(ucb_degree) << '\n'
     << "rng_seed=" << rng_seed << '\n'
     << "profile_mode="
     << (profile_mode == ProfileMode::Chained ? "chained" : "alternating")
     << '\n'
     << "reward_w_local=" << format_double(reward_w_local) << '\n'
     << "reward_w_ferry=" << format_double(reward_w_ferry) << '\n'
     << "reward_w_global=" << format_double(reward_w_global) << '\n'
     << "reward_w_penalty=" << format_double(reward_w_penalty) << '\n'
     << "value_kappa=" << format_double(value_kappa) << '\n'
     << "hybrid_anneal_power=" << format_double(hybrid_anneal_power) << '\n'
     << "benchmark_policy=" << to_string(benchmark_policy) << '\n'
     << "benchmark_lambda=" << format_double(benchmark_lambda) << '\n';
  return os.str();
}

std::uint64_t SystemConfig::hash() const {
  // FNV-1a over the canonical text.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_text()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void SystemConfig::validate() const {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError("config: " + msg);
  };
  require(total_contents >= 1, "total_contents must be >= 1");
  require(num_anchor_uavs >= 1, "num_anchor_uavs must be >= 1");
  require(anchor_cache_capacity >= 1 &&
              anchor_cache_capacity <= total_contents,
          "anchor_cache_capacity must be in [1, total_contents]");
  require(ferry_cache_capacity >= 1 && ferry_cache_capacity <= total_contents,
          "ferry_cache_capacity must be in [1, total_contents]");
  require(request_rate > 0.0, "request_rate must be > 0");
  require(hover_time > 0.0, "hover_time must be > 0");
  require(transition_time > 0.0, "transition_time must be > 0");
  require(zipf_alpha >= 0.0, "zipf_alpha must be >= 0");
  require(swap_probability >= 0.0 && swap_probability <= 1.0,
          "swap_probability must be in [0, 1]");
  require(!tad_values.empty(), "tad_values must be non-empty");
  for (double v : tad_values) require(v > 0.0, "tad_values must be positive");
  require(epoch_length >= 0.0, "epoch_length must be >= 0 (0 = auto)");
  require(resolved_epoch_length() > 0.0, "resolved epoch length must be > 0");
  require(epsilon_initial >= 0.0 && epsilon_initial <= 1.0,
          "epsilon_initial must be in [0, 1]");
  require(epsilon_decay >= 0.0, "epsilon_decay must be >= 0");
  require(ucb_degree > 0.0, "ucb_degree must be > 0");
  require(reward_w_local >= 0.0 && reward_w_ferry >= 0.0 &&
              reward_w_global >= 0.0 && reward_w_penalty >= 0.0,
          "reward weights must be >= 0");
  require(value_kappa > 0.0, "value_kappa must be > 0");
  require(hybrid_anneal_power >= 1.0, "hybrid_anneal_power must be >= 1");
  require(benchmark_lambda >= 0.0 && benchmark_lambda <= 1.0,
          "benchmark_lambda must be in [0, 1]");
}

SystemConfig parse_config_text(const std::string& text) {
  SystemConfig cfg;
  std::set<std::string> seen;
  std::istringstream is(text);
  std::string raw;
  Parser p;
  while (std::getline(is, raw)) {
    ++p.line_no;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      p.key = line;
      p.fail("expected key=value");
    }
    p.key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (p.key.empty()) p.fail("empty key");
    if (!seen.insert(p.key).second) p.fail("duplicate key");

    if (p.key == "total_contents") {
      cfg.total_contents = static_cast<std::uint32_t>(p.as_uint(value));
    } else if (p.key == "num_anchor_uavs") {
      cfg.num_anchor_uavs = static_cast<std::uint32_t>(p.as_uint(value));
    } else if (p.key == "num_ferry_uavs") {
      cfg.num_ferry_uavs = static_cast<std::uint32_t>(p.as_uint(value));
    } else if (p.key == "anchor_cache_capacity") {
      cfg.anchor_cache_capacity = static_cast<std::uint32_t>(p.as_uint(value));
    } else if (p.key == "ferry_cache_capacity") {
      cfg.ferry_cache_capacity = static_cast<std::uint32_t>(p.as_uint(value));
    } else if (p.key == "request_rate") {
      cfg.request_rate = p.as_double(value);
    } else if (p.key == "hover_time") {
      cfg.hover_time = p.as_double(value);
    } else if (p.key == "transition_time") {
      cfg.transition_time = p.as_double(value);
    } else if (p.key == "zipf_alpha") {
      cfg.zipf_alpha = p.as_double(value);
    } else if (p.key == "trajectory_policy") {
      if (value != "RoundRobin") {
        p.fail("only RoundRobin is supported, got '" + value + "'");
      }
      cfg.trajectory_policy = TrajectoryPolicy::RoundRobin;
    } else if (p.key == "swap_probability") {
      cfg.swap_probability = p.as_double(value);
    } else if (p.key == "tad_values") {
      cfg.tad_values = p.as_double_list(value);
    } else if (p.key == "epoch_length") {
      cfg.epoch_length = p.as_double(value);
    } else if (p.key == "epsilon_initial") {
      cfg.epsilon_initial = p.as_double(value);
    } else if (p.key == "epsilon_decay") {
      cfg.epsilon_decay = p.as_double(value);
    } else if (p.key == "ucb_degree") {
      cfg.ucb_degree = p.as_double(value);
    } else if (p.key == "rng_seed") {
      cfg.rng_seed = p.as_uint(value);
    } else if (p.key == "profile_mode") {
      if (value == "chained") {
        cfg.profile_mode = ProfileMode::Chained;
      } else if (value == "alternating") {
        cfg.profile_mode = ProfileMode::Alternating;
      } else {
        p.fail("expected chained|alternating, got '" + value + "'");
      }
    } else if (p.key == "reward_w_local") {
      cfg.reward_w_local = p.as_double(value);
    } else if (p.key == "reward_w_ferry") {
      cfg.reward_w_ferry = p.as_double(value);
    } else if (p.key == "reward_w_global") {
      cfg.reward_w_global = p.as_double(value);
    } else if (p.key == "reward_w_penalty") {
      cfg.reward_w_penalty = p.as_double(value);
    } else if (p.key == "value_kappa") {
      cfg.value_kappa = p.as_double(value);
    } else if (p.key == "hybrid_anneal_power") {
      cfg.hybrid_anneal_power = p.as_double(value);
    } else if (p.key == "benchmark_policy") {
      try {
        cfg.benchmark_policy = preload_policy_from_string(value);
      } catch (const ConfigError& e) {
        p.fail(e.what());
      }
    } else if (p.key == "benchmark_lambda") {
      cfg.benchmark_lambda = p.as_double(value);
    } else {
      p.fail("unknown key");
    }
  }
  cfg.validate();
  return cfg;
}

SystemConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace ferrysim
