#pragma once

// Test signals, measurement noise, effective sparsity and reconstruction
// quality metrics.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "hhcs/indexing.hpp"

namespace hhcs {

enum class SignalKind { gaussian_bump, blocks, bumps, heavisine, doppler, shepp_logan };
std::string_view to_string(SignalKind kind);
SignalKind signal_kind_from_string(std::string_view name);
bool is_image(SignalKind kind);

struct SignalSpec {
  SignalKind kind = SignalKind::gaussian_bump;
  double sigma = 16.0;   // gaussian_bump width
  double center = 0.0;   // gaussian_bump i0 (1-based position)
};

// Length-2^r vector, or for shepp_logan the 2^r x 2^r image vectorized
// column-major (flat index i + N j for row i, column j).
std::vector<double> generate(const SignalSpec& spec, int r);

// x_i = exp(-(i - i0)^2 / (2 sigma^2)) / (sigma sqrt(2 pi)), i = 1..n.
std::vector<double> gaussian_bump(std::size_t n, double sigma, double center);

// Donoho-Johnstone test functions sampled at t_i = i/n, i = 1..n.
std::vector<double> donoho_signal(SignalKind kind, std::size_t n);

// Classic 10-ellipse phantom on [-1,1]^2. Pixel centres are used; row 0 is
// the top (y = +1) and column 0 the left edge (x = -1).
std::vector<double> shepp_logan(std::size_t n);

struct NoiseSpec {
  double snr_db = 20.0;       // +infinity gives the zero vector
  std::uint64_t seed = 0;
  std::size_t reference_length = 0;  // length in the SNR definition; 0 means the noise length
};

struct Noise {
  std::vector<double> values;
  double sigma = 0.0;
  double norm = 0.0;           // ||n||
  double weighted_norm = 0.0;  // ||D n|| / sqrt(M) when weights are given, else ||n||
};

// sigma = ||x|| / (sqrt(L) 10^(snr/20)) with L the reference length.
double noise_sigma(double snr_db, double signal_norm, std::size_t reference_length);

// i.i.d. N(0, sigma^2) samples of the requested length.
Noise make_noise(const NoiseSpec& spec, std::span<const double> x, std::size_t length,
                 std::span<const double> weights = {});

// Indices of the n largest-magnitude entries, ties to the lower index,
// returned in selection order.
std::vector<std::size_t> largest_entries(std::span<const double> s, std::size_t n);
std::vector<double> hard_threshold(std::span<const double> s, std::size_t n);

// ||u - H_K(u)||_1
double sigma_k(std::span<const double> u, std::size_t k);

struct EffectiveSparsity {
  double rho = 0.995;
  std::size_t K = 0;
  std::vector<std::size_t> k;      // per level
  std::vector<Index> support;      // 1-based, ascending
};

EffectiveSparsity effective_sparsity(std::span<const double> s, double rho,
                                     const LevelPartition& partition);

inline constexpr double kSreCapDb = 300.0;
inline constexpr double kRatioCap = 1e15;  // 10^(kSreCapDb / 20)

// ||x|| / ||x - x_hat||; +infinity on exact recovery.
double recovery_ratio(std::span<const double> x, std::span<const double> x_hat);
// 20 log10 of a ratio, capped at kSreCapDb.
double ratio_db(double ratio);

// Trial ratios are capped at kRatioCap before averaging, so an exact trial
// counts as 300 dB and every reported value is finite.
struct SreSummary {
  double sre_db = 0.0;          // 20 log10 of the mean capped ratio
  bool exact = false;           // every trial hit the cap
  std::vector<double> trial_db; // per-trial 20 log10 ratio, capped
};

// Aggregates trials given as ||x|| / ||x - x_hat|| ratios.
SreSummary summarize_ratios(std::span<const double> ratios);
// One truth per trial.
SreSummary sre(std::span<const std::vector<double>> truths,
               std::span<const std::vector<double>> estimates);

}  // namespace hhcs
