#pragma once

// Local coherence, multilevel coherence and relative sparsity of the
// Hadamard-Haar systems, each available in closed form and by brute force
// over the dense product Phi^T Psi.

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "hhcs/system.hpp"

namespace hhcs {

enum class Mode { closed, brute };
Mode mode_from_string(std::string_view name);
std::string_view to_string(Mode mode);

struct CoherenceProfile {
  std::vector<double> values;  // mu^loc_l, entry l-1
  double sum_sq = 0.0;
};

// values(t, l) = mu(P_Wt U) * mu(P_Wt U P_Sl^T) over the system's own
// partition (W = S).
struct MultilevelProfile {
  LevelPartition partition;
  Eigen::MatrixXd values;
};

// Dense Phi^T Psi through dense_basis; subject to its caps.
Eigen::MatrixXd hadamard_haar_matrix(const SystemKind& system);

CoherenceProfile local_coherence(const SystemKind& system, Mode mode);
// log2 N + 1, 3 log2 N + 1 or (log2 N + 1)^2 with N the side length.
double closed_sum_sq(const SystemKind& system);
// mu^loc for a single flat index from the closed form.
double closed_local_coherence(const SystemKind& system, Index l);

MultilevelProfile multilevel_coherence(const SystemKind& system, Mode mode);

enum class SparsityMode { bound, search };

struct RelativeSparsityOptions {
  int trials = 64;
  std::uint64_t seed = 0;
};

// Per-level relative sparsity K_t. bound: the block-norm upper bound, which
// evaluates to k_t for these systems. search: the best ||P_Wt U z||^2 found
// over random +-1 vectors that are (S, k)-sparse-in-levels, a lower
// certificate for K_t.
std::vector<double> relative_sparsity(const SystemKind& system, std::span<const std::size_t> k,
                                      SparsityMode mode,
                                      const RelativeSparsityOptions& options = {});

struct BlockCheck {
  std::size_t t = 0;
  std::size_t l = 0;
  bool diagonal = false;
  double max_abs = 0.0;
  // Diagonal blocks: the magnitude every entry should have, the worst
  // deviation of |entry| from it, and the worst signed deviation from the
  // predicted Hadamard pattern. Zero for off-diagonal blocks.
  double expected_magnitude = 0.0;
  double magnitude_residual = 0.0;
  double pattern_residual = 0.0;
};

struct StructureReport {
  SystemKind system;
  std::vector<BlockCheck> blocks;
  double max_offdiagonal = 0.0;
  double max_magnitude_residual = 0.0;
  double max_pattern_residual = 0.0;

  bool holds(double tol = 1e-12) const {
    return max_offdiagonal <= tol && max_magnitude_residual <= tol &&
           max_pattern_residual <= tol;
  }
};

StructureReport structure_check(const SystemKind& system);

}  // namespace hhcs
