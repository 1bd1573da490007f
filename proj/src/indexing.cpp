#include "hhcs/indexing.hpp"

#include <bit>
#include <string>

#include "hhcs/error.hpp"

namespace hhcs {

IndexPair index_to_pair(Index l, Index n1, Index n2) {
  if (n1 == 0 || n2 == 0 || l < 1 || l > n1 * n2) {
    throw RangeError("flat index " + std::to_string(l) + " outside [1, " +
                     std::to_string(n1 * n2) + "]");
  }
  return {l, (l - 1) % n1 + 1, (l - 1) / n1 + 1};
}

Index pair_to_index(Index l1, Index l2, Index n1, Index n2) {
  if (l1 < 1 || l1 > n1 || l2 < 1 || l2 > n2) {
    throw RangeError("pair (" + std::to_string(l1) + ", " + std::to_string(l2) +
                     ") outside a " + std::to_string(n1) + " x " + std::to_string(n2) +
                     " grid");
  }
  return l1 + n1 * (l2 - 1);
}

IndexList flatten_cartesian(std::span<const Index> s1, std::span<const Index> s2,
                            Index n1, Index n2) {
  IndexList out;
  out.reserve(s1.size() * s2.size());
  for (Index k : s2) {
    for (Index j : s1) out.push_back(pair_to_index(j, k, n1, n2));
  }
  return out;
}

std::string_view to_string(PartitionKind kind) {
  switch (kind) {
    case PartitionKind::dyadic1d: return "dyadic1d";
    case PartitionKind::iso2d: return "iso2d";
    case PartitionKind::aniso2d: return "aniso2d";
  }
  return "?";
}

PartitionKind partition_kind_from_string(std::string_view name) {
  if (name == "dyadic1d") return PartitionKind::dyadic1d;
  if (name == "iso2d") return PartitionKind::iso2d;
  if (name == "aniso2d") return PartitionKind::aniso2d;
  throw InvalidArgument("unknown partition kind '" + std::string(name) + "'");
}

Index LevelPartition::total() const {
  const Index side = Index{1} << r;
  return kind == PartitionKind::dyadic1d ? side : side * side;
}

std::vector<std::size_t> LevelPartition::cardinalities() const {
  std::vector<std::size_t> out;
  out.reserve(levels.size());
  for (const auto& level : levels) out.push_back(level.size());
  return out;
}

std::vector<std::size_t> LevelPartition::level_of() const {
  std::vector<std::size_t> out(total(), 0);
  for (std::size_t t = 0; t < levels.size(); ++t) {
    for (Index l : levels[t]) out[l - 1] = t;
  }
  return out;
}

IndexList dyadic_level(int l) {
  if (l <= 0) return {1};
  const Index lo = Index{1} << (l - 1);
  IndexList out;
  out.reserve(lo);
  for (Index i = lo + 1; i <= 2 * lo; ++i) out.push_back(i);
  return out;
}

IndexList dyadic_prefix(int l) {
  if (l <= 0) return {};
  const Index hi = Index{1} << (l - 1);
  IndexList out;
  out.reserve(hi);
  for (Index i = 1; i <= hi; ++i) out.push_back(i);
  return out;
}

AnisoLevel aniso_level_pair(std::size_t t, int r) {
  const auto base = static_cast<std::size_t>(r + 1);
  return {static_cast<int>(t % base), static_cast<int>(t / base)};
}

std::size_t aniso_level_index(int t1, int t2, int r) {
  return static_cast<std::size_t>(t1) + static_cast<std::size_t>(r + 1) * t2;
}

LevelPartition build_levels(PartitionKind kind, int r) {
  if (r < 0) throw InvalidArgument("scale count r must be non-negative");
  LevelPartition p{kind, r, {}};
  const Index side = Index{1} << r;
  switch (kind) {
    case PartitionKind::dyadic1d:
      for (int l = 0; l <= r; ++l) p.levels.push_back(dyadic_level(l));
      break;
    case PartitionKind::iso2d: {
      p.levels.push_back({1});
      for (int l = 1; l <= r; ++l) {
        const IndexList cur = dyadic_level(l);
        const IndexList lower = dyadic_prefix(l);
        // subband order (01), (11), (10)
        IndexList level = flatten_cartesian(cur, lower, side, side);
        const IndexList b11 = flatten_cartesian(cur, cur, side, side);
        const IndexList b10 = flatten_cartesian(lower, cur, side, side);
        level.insert(level.end(), b11.begin(), b11.end());
        level.insert(level.end(), b10.begin(), b10.end());
        p.levels.push_back(std::move(level));
      }
      break;
    }
    case PartitionKind::aniso2d:
      for (int t2 = 0; t2 <= r; ++t2) {
        for (int t1 = 0; t1 <= r; ++t1) {
          p.levels.push_back(
              flatten_cartesian(dyadic_level(t1), dyadic_level(t2), side, side));
        }
      }
      break;
  }
  return p;
}

int exact_log2(std::size_t n) {
  if (!is_power_of_two(n)) {
    throw ShapeError("length " + std::to_string(n) + " is not a power of two");
  }
  return std::countr_zero(n);
}

}  // namespace hhcs
