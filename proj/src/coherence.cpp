#include "hhcs/coherence.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "hhcs/error.hpp"
#include "hhcs/rng.hpp"

namespace hhcs {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// 2^(-k/2) built from exact powers of two and one factor of 1/sqrt2.
double pow2_neg_half(int k) {
  if (k <= 0) return 1.0;
  const double base = std::ldexp(1.0, -(k / 2));
  return (k % 2 == 0) ? base : base * kInvSqrt2;
}

// floor(log2(l - 1)) clamped so that l <= 2 maps to 0.
int dyadic_scale(Index l) {
  if (l <= 2) return 0;
  return static_cast<int>(std::bit_width(l - 1)) - 1;
}

double one_d_factor(Index l) { return pow2_neg_half(dyadic_scale(l)); }

int positive_part(int v) { return v > 0 ? v : 0; }

void require_r(const SystemKind& system) {
  if (system.r < 1) throw InvalidArgument("coherence formulas need r >= 1");
}

// Diagonal block magnitudes are 2^(-e/2) with e from the level index.
int diagonal_exponent(const SystemKind& system, std::size_t t) {
  switch (system.tag) {
    case SystemTag::had_dhw_1d: return positive_part(static_cast<int>(t) - 1);
    case SystemTag::had2_idhw: return 2 * positive_part(static_cast<int>(t) - 1);
    case SystemTag::had2_adhw: {
      const AnisoLevel p = aniso_level_pair(t, system.r);
      return positive_part(p.t1 - 1) + positive_part(p.t2 - 1);
    }
  }
  return 0;
}

double diagonal_magnitude(const SystemKind& system, std::size_t t) {
  return pow2_neg_half(diagonal_exponent(system, t));
}

Eigen::MatrixXd diagonal_pattern(const SystemKind& system, std::size_t t) {
  switch (system.tag) {
    case SystemTag::had_dhw_1d:
      return hadamard_matrix(positive_part(static_cast<int>(t) - 1));
    case SystemTag::had2_idhw: {
      if (t == 0) return Eigen::MatrixXd::Ones(1, 1);
      const Eigen::MatrixXd h = hadamard_matrix(static_cast<int>(t) - 1);
      return kron(Eigen::MatrixXd::Identity(3, 3), kron(h, h));
    }
    case SystemTag::had2_adhw: {
      const AnisoLevel p = aniso_level_pair(t, system.r);
      return kron(hadamard_matrix(positive_part(p.t2 - 1)),
                  hadamard_matrix(positive_part(p.t1 - 1)));
    }
  }
  return {};
}

Eigen::MatrixXd block(const Eigen::MatrixXd& u, const IndexList& rows, const IndexList& cols) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          u(static_cast<Eigen::Index>(rows[i] - 1), static_cast<Eigen::Index>(cols[j] - 1));
    }
  }
  return out;
}

}  // namespace

Mode mode_from_string(std::string_view name) {
  if (name == "closed") return Mode::closed;
  if (name == "brute") return Mode::brute;
  throw InvalidArgument("unknown mode '" + std::string(name) + "'");
}

std::string_view to_string(Mode mode) { return mode == Mode::closed ? "closed" : "brute"; }

Eigen::MatrixXd hadamard_haar_matrix(const SystemKind& system) {
  const Eigen::MatrixXd phi = dense_basis(system.sensing());
  const Eigen::MatrixXd psi = dense_basis(system.sparsity());
  Eigen::MatrixXd u(phi.cols(), psi.cols());
  u.noalias() = phi.transpose() * psi;
  return u;
}

double closed_local_coherence(const SystemKind& system, Index l) {
  const Index side = system.side();
  switch (system.tag) {
    case SystemTag::had_dhw_1d:
      if (l < 1 || l > side) throw RangeError("row index out of range");
      return one_d_factor(l);
    case SystemTag::had2_idhw: {
      const IndexPair p = index_to_pair(l, side, side);
      return pow2_neg_half(2 * dyadic_scale(std::max(p.l1, p.l2)));
    }
    case SystemTag::had2_adhw: {
      const IndexPair p = index_to_pair(l, side, side);
      return one_d_factor(p.l1) * one_d_factor(p.l2);
    }
  }
  return 0.0;
}

double closed_sum_sq(const SystemKind& system) {
  const double r = system.r;
  switch (system.tag) {
    case SystemTag::had_dhw_1d: return r + 1.0;
    case SystemTag::had2_idhw: return 3.0 * r + 1.0;
    case SystemTag::had2_adhw: return (r + 1.0) * (r + 1.0);
  }
  return 0.0;
}

CoherenceProfile local_coherence(const SystemKind& system, Mode mode) {
  require_r(system);
  CoherenceProfile out;
  const std::size_t n = system.dim();
  out.values.resize(n);
  if (mode == Mode::closed) {
    for (Index l = 1; l <= n; ++l) out.values[l - 1] = closed_local_coherence(system, l);
  } else {
    const Eigen::MatrixXd u = hadamard_haar_matrix(system);
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
      out.values[static_cast<std::size_t>(i)] = u.row(i).cwiseAbs().maxCoeff();
    }
  }
  out.sum_sq = std::transform_reduce(out.values.begin(), out.values.end(), 0.0, std::plus<>(),
                                     [](double v) { return v * v; });
  return out;
}

MultilevelProfile multilevel_coherence(const SystemKind& system, Mode mode) {
  require_r(system);
  MultilevelProfile out{system.partition(), {}};
  const auto levels = static_cast<Eigen::Index>(out.partition.size());
  out.values = Eigen::MatrixXd::Zero(levels, levels);
  if (mode == Mode::closed) {
    for (Eigen::Index t = 0; t < levels; ++t) {
      out.values(t, t) = std::ldexp(1.0, -diagonal_exponent(system, static_cast<std::size_t>(t)));
    }
    return out;
  }
  const Eigen::MatrixXd u = hadamard_haar_matrix(system);
  IndexList all(system.dim());
  std::iota(all.begin(), all.end(), Index{1});
  for (Eigen::Index t = 0; t < levels; ++t) {
    const IndexList& rows = out.partition.levels[static_cast<std::size_t>(t)];
    const Eigen::MatrixXd row_block = block(u, rows, all);
    const double row_mu = row_block.cwiseAbs().maxCoeff();
    for (Eigen::Index l = 0; l < levels; ++l) {
      const IndexList& cols = out.partition.levels[static_cast<std::size_t>(l)];
      out.values(t, l) = row_mu * block(u, rows, cols).cwiseAbs().maxCoeff();
    }
  }
  return out;
}

std::vector<double> relative_sparsity(const SystemKind& system, std::span<const std::size_t> k,
                                      SparsityMode mode, const RelativeSparsityOptions& options) {
  const LevelPartition partition = system.partition();
  if (k.size() != partition.size()) {
    throw InvalidArgument("expected " + std::to_string(partition.size()) +
                          " per-level sparsities, got " + std::to_string(k.size()));
  }
  for (std::size_t l = 0; l < k.size(); ++l) {
    if (k[l] > partition.levels[l].size()) {
      throw InfeasibleError("k_" + std::to_string(l) + " = " + std::to_string(k[l]) +
                            " exceeds level size " + std::to_string(partition.levels[l].size()));
    }
  }

  const std::size_t levels = partition.size();
  std::vector<double> out(levels, 0.0);
  if (mode == SparsityMode::bound) {
    // sqrt(K_t) <= sum_l ||P_Wt U P_Sl^T||_2 sqrt(k_l); the blocks are zero
    // off the diagonal and orthonormal on it, so the sum collapses to k_t.
    for (std::size_t t = 0; t < levels; ++t) out[t] = static_cast<double>(k[t]);
    return out;
  }

  Rng rng = Rng::stream(options.seed, {0x72656c73ULL});
  std::vector<Index> pool;
  for (int trial = 0; trial < options.trials; ++trial) {
    std::vector<double> z(system.dim(), 0.0);
    for (std::size_t l = 0; l < levels; ++l) {
      pool = partition.levels[l];
      for (std::size_t j = 0; j < k[l]; ++j) {
        const std::size_t pick = j + rng.below(pool.size() - j);
        std::swap(pool[j], pool[pick]);
        z[pool[j] - 1] = rng.uniform() < 0.5 ? -1.0 : 1.0;
      }
    }
    const std::vector<double> w = sense(system, synthesize(system, z));
    for (std::size_t t = 0; t < levels; ++t) {
      double energy = 0.0;
      for (Index i : partition.levels[t]) energy += w[i - 1] * w[i - 1];
      out[t] = std::max(out[t], energy);
    }
  }
  return out;
}

StructureReport structure_check(const SystemKind& system) {
  StructureReport report{system, {}, 0.0, 0.0, 0.0};
  const Eigen::MatrixXd u = hadamard_haar_matrix(system);
  const LevelPartition partition = system.partition();
  for (std::size_t t = 0; t < partition.size(); ++t) {
    for (std::size_t l = 0; l < partition.size(); ++l) {
      const Eigen::MatrixXd b = block(u, partition.levels[t], partition.levels[l]);
      BlockCheck check;
      check.t = t;
      check.l = l;
      check.diagonal = t == l;
      check.max_abs = b.cwiseAbs().maxCoeff();
      if (check.diagonal) {
        check.expected_magnitude = diagonal_magnitude(system, t);
        const Eigen::MatrixXd pattern = diagonal_pattern(system, t);
        for (Eigen::Index j = 0; j < b.cols(); ++j) {
          for (Eigen::Index i = 0; i < b.rows(); ++i) {
            if (pattern(i, j) == 0.0) continue;
            check.magnitude_residual = std::max(
                check.magnitude_residual, std::abs(std::abs(b(i, j)) - check.expected_magnitude));
          }
        }
        check.pattern_residual = (b - pattern).cwiseAbs().maxCoeff();
        report.max_magnitude_residual =
            std::max(report.max_magnitude_residual, check.magnitude_residual);
        report.max_pattern_residual = std::max(report.max_pattern_residual, check.pattern_residual);
      } else {
        report.max_offdiagonal = std::max(report.max_offdiagonal, check.max_abs);
      }
      report.blocks.push_back(check);
    }
  }
  return report;
}

}  // namespace hhcs
