#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ferrysim {

// All samplers are hand-rolled transforms over the raw mt19937_64 output.
// The standard <random> distributions are implementation-defined, so using
// them would break the bit-identical-replay guarantee across toolchains.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream tags for deriving independent substreams from one experiment seed.
// Workloads must not share a stream with agents: strategy comparisons rely
// on paired request sequences across runs with the same seed.
enum class StreamTag : std::uint64_t {
  Workload = 1,
  Agent = 2,
  Profiles = 3,
  Tads = 4,
  Synthetic = 5,
};

inline std::uint64_t substream_seed(std::uint64_t base, StreamTag tag,
                                    std::uint64_t index = 0) {
  return splitmix64(splitmix64(base) ^
                    splitmix64((static_cast<std::uint64_t>(tag) << 32) | index));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform double in [0, 1).
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Exponential inter-arrival gap via inverse CDF; rate > 0.
  double exponential(double rate) {
    return -std::log1p(-uniform01()) / rate;
  }

  // Unbiased integer in [0, n), n > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ferrysim
