#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace hhcs {

// Seedable generator with counter-based stream splitting. A stream is keyed
// by a master seed and a path of counters (e.g. {ratio, trial, purpose}), so
// every trial draws from its own sequence regardless of execution order.
class Rng {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64/splitmix64-split";

  explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

  static Rng stream(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = mix(master);
    for (std::uint64_t p : path) h = mix(h ^ mix(p + 0x632be59bd9b4e019ULL));
    return Rng(h);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
  }

  double normal(double sigma = 1.0) { return sigma * normal_(engine_); }

  std::mt19937_64& engine() { return engine_; }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace hhcs
