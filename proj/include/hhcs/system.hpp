#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "hhcs/indexing.hpp"
#include "hhcs/transforms.hpp"

namespace hhcs {

enum class SystemTag { had_dhw_1d, had2_idhw, had2_adhw };

std::string_view to_string(SystemTag tag);
SystemTag system_tag_from_string(std::string_view name);

// A Hadamard-Haar sensing/sparsity pair at scale r.
struct SystemKind {
  SystemTag tag = SystemTag::had_dhw_1d;
  int r = 1;

  bool two_d() const { return tag != SystemTag::had_dhw_1d; }
  std::size_t side() const { return std::size_t{1} << r; }
  std::size_t dim() const { return two_d() ? side() * side() : side(); }

  BasisKind sensing() const;
  BasisKind sparsity() const;
  PartitionKind partition_kind() const;
  LevelPartition partition() const { return build_levels(partition_kind(), r); }

  friend bool operator==(const SystemKind&, const SystemKind&) = default;
};

// Phi^T x, the full vector of Hadamard measurements.
std::vector<double> sense(const SystemKind& system, std::span<const double> x);
// Phi z; equal to sense() because the Hadamard bases are symmetric.
std::vector<double> sense_adjoint(const SystemKind& system, std::span<const double> z);
std::vector<double> sparsify(const SystemKind& system, std::span<const double> x);
std::vector<double> synthesize(const SystemKind& system, std::span<const double> s);

}  // namespace hhcs
