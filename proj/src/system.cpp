#include "hhcs/system.hpp"

#include <string>

#include "hhcs/error.hpp"

namespace hhcs {

std::string_view to_string(SystemTag tag) {
  switch (tag) {
    case SystemTag::had_dhw_1d: return "had_dhw_1d";
    case SystemTag::had2_idhw: return "had2_idhw";
    case SystemTag::had2_adhw: return "had2_adhw";
  }
  return "?";
}

SystemTag system_tag_from_string(std::string_view name) {
  for (SystemTag tag : {SystemTag::had_dhw_1d, SystemTag::had2_idhw, SystemTag::had2_adhw}) {
    if (name == to_string(tag)) return tag;
  }
  throw InvalidArgument("unknown system '" + std::string(name) + "'");
}

BasisKind SystemKind::sensing() const {
  return {two_d() ? BasisTag::hadamard2d : BasisTag::hadamard1d, r};
}

BasisKind SystemKind::sparsity() const {
  switch (tag) {
    case SystemTag::had_dhw_1d: return {BasisTag::dhw, r};
    case SystemTag::had2_idhw: return {BasisTag::idhw, r};
    case SystemTag::had2_adhw: return {BasisTag::adhw, r};
  }
  return {BasisTag::dhw, r};
}

PartitionKind SystemKind::partition_kind() const {
  switch (tag) {
    case SystemTag::had_dhw_1d: return PartitionKind::dyadic1d;
    case SystemTag::had2_idhw: return PartitionKind::iso2d;
    case SystemTag::had2_adhw: return PartitionKind::aniso2d;
  }
  return PartitionKind::dyadic1d;
}

std::vector<double> sense(const SystemKind& system, std::span<const double> x) {
  return apply_basis(system.sensing(), Direction::analysis, x);
}

std::vector<double> sense_adjoint(const SystemKind& system, std::span<const double> z) {
  return apply_basis(system.sensing(), Direction::synthesis, z);
}

std::vector<double> sparsify(const SystemKind& system, std::span<const double> x) {
  return apply_basis(system.sparsity(), Direction::analysis, x);
}

std::vector<double> synthesize(const SystemKind& system, std::span<const double> s) {
  return apply_basis(system.sparsity(), Direction::synthesis, s);
}

}  // namespace hhcs
