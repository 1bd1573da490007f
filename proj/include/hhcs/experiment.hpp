#pragma once

// Monte-Carlo reconstruction experiments: for each measurement ratio and
// trial, draw a signal, a sample set and noise, then reconstruct by l1
// minimization (CS) and by the minimal-energy pseudo-inverse (ME).

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hhcs/recovery.hpp"
#include "hhcs/sampling.hpp"
#include "hhcs/signals.hpp"
#include "hhcs/system.hpp"

namespace hhcs {

inline constexpr std::string_view kLibraryVersion = "1.0.0";
inline constexpr int kConfigVersion = 1;

enum class SparsitySource { oracle, worst_case };
std::string_view to_string(SparsitySource source);
SparsitySource sparsity_source_from_string(std::string_view name);

struct ExperimentConfig {
  SystemKind system{SystemTag::had_dhw_1d, 9};
  Strategy strategy = Strategy::vds;
  std::vector<double> ratios{0.2};
  double snr_db = 20.0;  // +infinity for noiseless runs ("inf" in JSON)
  int trials = 100;
  std::uint64_t seed = 1;
  SignalSpec signal{SignalKind::gaussian_bump, 64.0, 0.0};
  bool randomize_center = true;  // gaussian_bump: i0 ~ U[sigma, N - sigma] per trial
  double rho = 0.995;
  SparsitySource mds_sparsity = SparsitySource::worst_case;
  int pregenerated = 100;
  SolverOptions solver;
  std::string output_dir = "out";

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&);
};

std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

// Named configurations: fig6 (1-D Gaussian bumps on a ratio grid from 0.02 to 1),
// donoho (Blocks at N = 2048, ratio 0.2), phantom
// (Shepp-Logan, 2-D isotropic system).
ExperimentConfig preset(std::string_view name);
std::vector<std::string> preset_names();

struct TrialRecord {
  std::size_t ratio_index = 0;
  double ratio = 0.0;
  std::size_t m = 0;
  int trial = 0;
  double center = 0.0;
  std::size_t distinct = 0;  // distinct rows in the sample
  double noise_sigma = 0.0;
  double epsilon = 0.0;
  double cs_ratio = 0.0;  // ||x|| / ||x - x_hat||, capped at kRatioCap
  double me_ratio = 0.0;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

struct RatioSummary {
  double ratio = 0.0;
  std::size_t m = 0;
  SreSummary cs;
  SreSummary me;
  int converged = 0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<std::size_t> mds_k;  // per-level sparsity used for allocation (worst_case)
  std::vector<TrialRecord> trials; // ordered by (ratio, trial)
  std::vector<RatioSummary> summary;
};

struct RunOptions {
  int threads = 1;
};

ExperimentReport run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

// trials.csv, summary.csv and config.json under dir.
void write_report(const ExperimentReport& report, const std::filesystem::path& dir);
void write_trials_csv(std::ostream& out, const ExperimentReport& report);
void write_summary_csv(std::ostream& out, const ExperimentReport& report);

}  // namespace hhcs
