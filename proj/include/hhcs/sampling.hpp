#pragma once

// Uniform (UDS), variable (VDS) and multilevel (MDS) density sampling of
// Hadamard rows, and the subsampled measurement operator y = P_Omega Phi^T x.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hhcs/system.hpp"

namespace hhcs {

enum class Strategy { uds, vds, mds };
std::string_view to_string(Strategy strategy);
Strategy strategy_from_string(std::string_view name);

struct SamplingPlan {
  Strategy strategy = Strategy::uds;
  std::vector<double> pmf;              // uds / vds, entry l-1 for index l
  std::vector<std::size_t> m;           // mds, per level
  std::optional<LevelPartition> partition;  // mds

  std::size_t total() const;  // sum of m (mds)
};

struct SampleSet {
  std::vector<Index> omega;     // 1-based row indices, in draw order
  std::vector<double> weights;  // d_j = 1 / sqrt(eta(omega_j)); all ones for mds
  Strategy strategy = Strategy::uds;
  std::uint64_t seed = 0;
  std::string rng_algorithm;

  std::size_t size() const { return omega.size(); }
};

// eta(l) = (mu^loc_l)^2 / ||mu^loc||^2 from the closed-form local coherence.
SamplingPlan vds_pmf(const SystemKind& system);
SamplingPlan uds_pmf(std::size_t n);

// Integer m_t summing to M with m_t <= |T_t|, proportional to k_t. Levels
// whose quota M k_t / K would overflow are pinned at their size and the rest
// re-apportioned; rounding is largest remainder with ties to the lower level.
SamplingPlan mds_allocate(std::span<const std::size_t> k, std::size_t total,
                          const LevelPartition& partition);

// uds / vds: M i.i.d. inverse-CDF draws. mds: m_t distinct indices per level
// (partial Fisher-Yates), concatenated in level order; M must equal sum m_t.
SampleSet draw_sample(const SamplingPlan& plan, std::size_t count, std::uint64_t seed);

// y_j = (Phi^T x)_{omega_j}
std::vector<double> measure(const SystemKind& system, const SampleSet& sample,
                            std::span<const double> x);
// Phi (P_Omega^T y), duplicates accumulated; exact adjoint of measure().
std::vector<double> measure_adjoint(const SystemKind& system, const SampleSet& sample,
                                    std::span<const double> y);

// 0/255 sampling mask over the Hadamard grid: N x N for 2-D systems, 1 x N
// for 1-D. Row-major pixels; pixel (i, j) is flat index i + N j (0-based).
struct Mask {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<unsigned char> pixels;
};
Mask sample_mask(const SystemKind& system, const SampleSet& sample);

}  // namespace hhcs
