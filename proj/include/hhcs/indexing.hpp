#pragma once

// Index arithmetic and level partitions.
//
// All public indices are 1-based. A 2-D position (l1, l2) in an N1 x N2 grid
// maps to the flat index l = l1 + N1 * (l2 - 1), i.e. column-major
// vectorization: l1 runs over rows (first index), l2 over columns.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hhcs {

using Index = std::size_t;
using IndexList = std::vector<Index>;

struct IndexPair {
  Index l = 1;
  Index l1 = 1;
  Index l2 = 1;

  friend bool operator==(const IndexPair&, const IndexPair&) = default;
};

IndexPair index_to_pair(Index l, Index n1, Index n2);
Index pair_to_index(Index l1, Index l2, Index n1, Index n2);

// {l : l <-> (j, k), j in s1, k in s2}, ordered with k outer and j inner,
// which for sorted inputs is ascending flat order.
IndexList flatten_cartesian(std::span<const Index> s1, std::span<const Index> s2,
                            Index n1, Index n2);

enum class PartitionKind { dyadic1d, iso2d, aniso2d };

std::string_view to_string(PartitionKind kind);
PartitionKind partition_kind_from_string(std::string_view name);

struct LevelPartition {
  PartitionKind kind = PartitionKind::dyadic1d;
  int r = 0;
  std::vector<IndexList> levels;

  // 2^r for dyadic1d, 4^r otherwise.
  Index total() const;
  std::size_t size() const { return levels.size(); }
  std::vector<std::size_t> cardinalities() const;
  // level_of()[l-1] is the 0-based level holding flat index l.
  std::vector<std::size_t> level_of() const;
};

// 1-D dyadic level T_l: {1} for l = 0, [2^l] \ [2^(l-1)] otherwise.
IndexList dyadic_level(int l);
// T_<l = [2^(l-1)] for l >= 1, empty for l = 0.
IndexList dyadic_prefix(int l);

LevelPartition build_levels(PartitionKind kind, int r);

// Anisotropic level t (0-based) <-> (t1, t2) with t = t1 + (r + 1) * t2.
struct AnisoLevel {
  int t1 = 0;
  int t2 = 0;
};
AnisoLevel aniso_level_pair(std::size_t t, int r);
std::size_t aniso_level_index(int t1, int t2, int r);

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }
// log2 of a power of two; throws ShapeError otherwise.
int exact_log2(std::size_t n);

}  // namespace hhcs
