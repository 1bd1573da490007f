#include "hhcs/sampling.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "hhcs/coherence.hpp"
#include "hhcs/error.hpp"
#include "hhcs/rng.hpp"

namespace hhcs {

namespace {

constexpr std::uint64_t kDrawStream = 0x73616d706c65ULL;

// (mu^loc_l)^2 as an exact power of two.
double squared_local_coherence(const SystemKind& system, Index l) {
  auto scale = [](Index i) { return i <= 2 ? 0 : static_cast<int>(std::bit_width(i - 1)) - 1; };
  switch (system.tag) {
    case SystemTag::had_dhw_1d: return std::ldexp(1.0, -scale(l));
    case SystemTag::had2_idhw: {
      const IndexPair p = index_to_pair(l, system.side(), system.side());
      return std::ldexp(1.0, -2 * scale(std::max(p.l1, p.l2)));
    }
    case SystemTag::had2_adhw: {
      const IndexPair p = index_to_pair(l, system.side(), system.side());
      return std::ldexp(1.0, -scale(p.l1) - scale(p.l2));
    }
  }
  return 0.0;
}

void validate_pmf(std::span<const double> pmf) {
  if (pmf.empty()) throw InvalidArgument("empty pmf");
  double sum = 0.0;
  for (double p : pmf) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw InvalidArgument("pmf entries must be finite and >= 0");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw InvalidArgument("pmf sums to " + std::to_string(sum) + ", expected 1");
  }
}

void check_indices(const SystemKind& system, const SampleSet& sample) {
  const std::size_t n = system.dim();
  for (Index i : sample.omega) {
    if (i < 1 || i > n) {
      throw RangeError("sample index " + std::to_string(i) + " outside [1, " +
                       std::to_string(n) + "]");
    }
  }
}

}  // namespace

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::uds: return "uds";
    case Strategy::vds: return "vds";
    case Strategy::mds: return "mds";
  }
  return "?";
}

Strategy strategy_from_string(std::string_view name) {
  if (name == "uds") return Strategy::uds;
  if (name == "vds") return Strategy::vds;
  if (name == "mds") return Strategy::mds;
  throw InvalidArgument("unknown strategy '" + std::string(name) + "'");
}

std::size_t SamplingPlan::total() const { return std::accumulate(m.begin(), m.end(), std::size_t{0}); }

SamplingPlan vds_pmf(const SystemKind& system) {
  if (system.r < 1) throw InvalidArgument("vds pmf needs r >= 1");
  SamplingPlan plan;
  plan.strategy = Strategy::vds;
  const double norm = closed_sum_sq(system);
  plan.pmf.resize(system.dim());
  for (Index l = 1; l <= system.dim(); ++l) {
    plan.pmf[l - 1] = squared_local_coherence(system, l) / norm;
  }
  return plan;
}

SamplingPlan uds_pmf(std::size_t n) {
  if (n == 0) throw InvalidArgument("uniform pmf over an empty range");
  SamplingPlan plan;
  plan.strategy = Strategy::uds;
  plan.pmf.assign(n, 1.0 / static_cast<double>(n));
  return plan;
}

SamplingPlan mds_allocate(std::span<const std::size_t> k, std::size_t total,
                          const LevelPartition& partition) {
  const std::vector<std::size_t> caps = partition.cardinalities();
  if (k.size() != caps.size()) {
    throw InvalidArgument("expected " + std::to_string(caps.size()) +
                          " per-level sparsities, got " + std::to_string(k.size()));
  }
  for (std::size_t t = 0; t < k.size(); ++t) {
    if (k[t] > caps[t]) {
      throw InfeasibleError("k_" + std::to_string(t) + " = " + std::to_string(k[t]) +
                            " exceeds level size " + std::to_string(caps[t]));
    }
  }
  if (std::accumulate(k.begin(), k.end(), std::size_t{0}) == 0) {
    throw DegenerateError("total sparsity K is zero");
  }
  if (total > partition.total()) {
    throw InfeasibleError("M = " + std::to_string(total) + " exceeds the " +
                          std::to_string(partition.total()) + " available rows");
  }

  std::vector<std::size_t> m(k.size(), 0);
  std::vector<std::size_t> active;
  for (std::size_t t = 0; t < k.size(); ++t) {
    if (k[t] > 0) active.push_back(t);
  }
  std::size_t remaining = total;

  while (!active.empty()) {
    std::size_t k_active = 0;
    for (std::size_t t : active) k_active += k[t];

    // Quota remaining * k_t / k_active above the cap: pin and re-apportion.
    std::vector<std::size_t> still;
    bool pinned = false;
    for (std::size_t t : active) {
      if (remaining * k[t] > caps[t] * k_active) {
        m[t] = caps[t];
        remaining -= caps[t];
        pinned = true;
      } else {
        still.push_back(t);
      }
    }
    if (pinned) {
      active = std::move(still);
      continue;
    }

    std::vector<std::size_t> rem(k.size(), 0);
    std::size_t assigned = 0;
    for (std::size_t t : active) {
      m[t] = remaining * k[t] / k_active;
      rem[t] = remaining * k[t] % k_active;
      assigned += m[t];
    }
    std::stable_sort(active.begin(), active.end(),
                     [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
    for (std::size_t i = 0; i < remaining - assigned; ++i) ++m[active[i]];
    remaining = 0;
    break;
  }

  // Every level with k_t > 0 is full: spill into the others, coarse first.
  for (std::size_t t = 0; t < m.size() && remaining > 0; ++t) {
    const std::size_t add = std::min(caps[t] - m[t], remaining);
    m[t] += add;
    remaining -= add;
  }

  SamplingPlan plan;
  plan.strategy = Strategy::mds;
  plan.m = std::move(m);
  plan.partition = partition;
  return plan;
}

SampleSet draw_sample(const SamplingPlan& plan, std::size_t count, std::uint64_t seed) {
  SampleSet out;
  out.strategy = plan.strategy;
  out.seed = seed;
  out.rng_algorithm = std::string(Rng::kAlgorithm);
  Rng rng = Rng::stream(seed, {kDrawStream});

  if (plan.strategy == Strategy::mds) {
    if (!plan.partition) throw InvalidArgument("mds plan without a level partition");
    const LevelPartition& partition = *plan.partition;
    if (plan.m.size() != partition.size()) throw InvalidArgument("mds plan level count mismatch");
    if (count != plan.total()) {
      throw InvalidArgument("mds draw of " + std::to_string(count) + " rows but the plan holds " +
                            std::to_string(plan.total()));
    }
    out.omega.reserve(count);
    std::vector<Index> pool;
    for (std::size_t t = 0; t < partition.size(); ++t) {
      pool = partition.levels[t];
      if (plan.m[t] > pool.size()) {
        throw InfeasibleError("m_" + std::to_string(t) + " = " + std::to_string(plan.m[t]) +
                              " exceeds level size " + std::to_string(pool.size()));
      }
      for (std::size_t j = 0; j < plan.m[t]; ++j) {
        const std::size_t pick = j + rng.below(pool.size() - j);
        std::swap(pool[j], pool[pick]);
        out.omega.push_back(pool[j]);
      }
    }
    out.weights.assign(out.omega.size(), 1.0);
    return out;
  }

  validate_pmf(plan.pmf);
  std::vector<double> cdf(plan.pmf.size());
  std::partial_sum(plan.pmf.begin(), plan.pmf.end(), cdf.begin());
  const double mass = cdf.back();
  out.omega.reserve(count);
  out.weights.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    const double u = rng.uniform() * mass;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    const auto pos = static_cast<std::size_t>(it - cdf.begin());
    out.omega.push_back(pos + 1);
    out.weights.push_back(1.0 / std::sqrt(plan.pmf[pos]));
  }
  return out;
}

std::vector<double> measure(const SystemKind& system, const SampleSet& sample,
                            std::span<const double> x) {
  check_indices(system, sample);
  const std::vector<double> z = sense(system, x);
  std::vector<double> y(sample.size());
  for (std::size_t j = 0; j < sample.size(); ++j) y[j] = z[sample.omega[j] - 1];
  return y;
}

std::vector<double> measure_adjoint(const SystemKind& system, const SampleSet& sample,
                                    std::span<const double> y) {
  check_indices(system, sample);
  if (y.size() != sample.size()) {
    throw ShapeError("measurement vector has " + std::to_string(y.size()) + " entries, sample " +
                     std::to_string(sample.size()));
  }
  std::vector<double> z(system.dim(), 0.0);
  for (std::size_t j = 0; j < sample.size(); ++j) z[sample.omega[j] - 1] += y[j];
  return sense_adjoint(system, z);
}

Mask sample_mask(const SystemKind& system, const SampleSet& sample) {
  check_indices(system, sample);
  Mask mask;
  const std::size_t side = system.side();
  mask.rows = system.two_d() ? side : 1;
  mask.cols = side;
  mask.pixels.assign(mask.rows * mask.cols, 0);
  for (Index l : sample.omega) {
    if (system.two_d()) {
      const IndexPair p = index_to_pair(l, side, side);
      mask.pixels[(p.l1 - 1) * mask.cols + (p.l2 - 1)] = 255;
    } else {
      mask.pixels[l - 1] = 255;
    }
  }
  return mask;
}

}  // namespace hhcs
