// hhcs: command-line front end to the Hadamard-Haar compressive sensing
// library. Every subcommand writes CSV (to --out DIR, or stdout when --out is
// omitted) and exits non-zero with a single "error: <category>: <message>"
// line on failure.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hhcs/coherence.hpp"
#include "hhcs/error.hpp"
#include "hhcs/experiment.hpp"
#include "hhcs/io.hpp"
#include "hhcs/recovery.hpp"
#include "hhcs/sampling.hpp"
#include "hhcs/signals.hpp"
#include "hhcs/system.hpp"
#include "hhcs/transforms.hpp"

namespace fs = std::filesystem;
using namespace hhcs;

namespace {

// Output sink: a named file under --out, or stdout.
class Sink {
 public:
  Sink(const std::string& dir, const std::string& name) {
    if (!dir.empty()) {
      file_ = io::open_output(fs::path(dir) / name);
      out_ = &file_;
    }
  }
  std::ostream& stream() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_ = &std::cout;
};

struct SystemArgs {
  std::string system = "had_dhw_1d";
  int r = 3;

  SystemKind kind() const {
    if (r < 0 || r > 30) throw InvalidArgument("--r must lie in [0, 30]");
    return {system_tag_from_string(system), r};
  }
};

void add_system(CLI::App* cmd, SystemArgs& args) {
  cmd->add_option("--system", args.system, "had_dhw_1d | had2_idhw | had2_adhw")->capture_default_str();
  cmd->add_option("--r", args.r, "scale count (side 2^r)")->capture_default_str();
}

std::vector<std::size_t> parse_counts(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size() || v < 0) throw std::invalid_argument(item);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw InvalidArgument("bad count '" + item + "' in list '" + text + "'");
    }
  }
  return out;
}

double parse_snr(const std::string& text) {
  if (text == "inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw InvalidArgument("bad --snr value '" + text + "'");
}

// transform --------------------------------------------------------------

struct TransformArgs {
  std::string basis = "hadamard1d";
  int r = 3;
  std::string direction = "analysis";
  std::string input;
  std::string out;
};

int run_transform(const TransformArgs& a) {
  const BasisKind basis{basis_tag_from_string(a.basis), a.r};
  Direction dir;
  if (a.direction == "analysis") {
    dir = Direction::analysis;
  } else if (a.direction == "synthesis") {
    dir = Direction::synthesis;
  } else {
    throw InvalidArgument("--direction must be analysis or synthesis");
  }
  const std::vector<double> x = io::read_vector_csv(a.input);
  if (x.size() != basis.dim()) {
    throw ShapeError("input has " + std::to_string(x.size()) + " values, basis expects " +
                     std::to_string(basis.dim()));
  }
  Sink sink(a.out, "transform.csv");
  io::write_vector_csv(sink.stream(), apply_basis(basis, dir, x));
  return 0;
}

// coherence --------------------------------------------------------------

struct CoherenceArgs {
  SystemArgs sys;
  std::string mode = "closed";
  std::string kind = "local";
  std::string out;
};

void write_local(std::ostream& out, const SystemKind& system, const CoherenceProfile& p) {
  const std::vector<std::size_t> level = system.partition().level_of();
  io::CsvWriter csv(out, {"index", "l1", "l2", "level", "mu"});
  for (Index l = 1; l <= p.values.size(); ++l) {
    const IndexPair pair = system.two_d() ? index_to_pair(l, system.side(), system.side())
                                          : IndexPair{l, l, 1};
    csv.cell(l).cell(pair.l1).cell(pair.l2).cell(level[l - 1]).cell(p.values[l - 1]);
    csv.end_row();
  }
}

void write_multilevel(std::ostream& out, const SystemKind& system, const MultilevelProfile& p) {
  const bool aniso = system.tag == SystemTag::had2_adhw;
  io::CsvWriter csv(out, {"t", "l", "t1", "t2", "l1", "l2", "mu"});
  for (Eigen::Index t = 0; t < p.values.rows(); ++t) {
    for (Eigen::Index l = 0; l < p.values.cols(); ++l) {
      const auto ts = static_cast<std::size_t>(t);
      const auto ls = static_cast<std::size_t>(l);
      const AnisoLevel at = aniso ? aniso_level_pair(ts, system.r) : AnisoLevel{static_cast<int>(t), 0};
      const AnisoLevel al = aniso ? aniso_level_pair(ls, system.r) : AnisoLevel{static_cast<int>(l), 0};
      csv.cell(ts).cell(ls).cell(at.t1).cell(at.t2).cell(al.t1).cell(al.t2).cell(p.values(t, l));
      csv.end_row();
    }
  }
}

int run_coherence(const CoherenceArgs& a) {
  const SystemKind system = a.sys.kind();
  const Mode mode = mode_from_string(a.mode);
  if (a.kind == "local") {
    const CoherenceProfile p = local_coherence(system, mode);
    Sink sink(a.out, "local_coherence.csv");
    write_local(sink.stream(), system, p);
    if (!a.out.empty()) std::cout << "sum_sq," << io::format_double(p.sum_sq) << "\n";
  } else if (a.kind == "multilevel") {
    Sink sink(a.out, "multilevel_coherence.csv");
    write_multilevel(sink.stream(), system, multilevel_coherence(system, mode));
  } else {
    throw InvalidArgument("--kind must be local or multilevel");
  }
  return 0;
}

// structure-check --------------------------------------------------------

struct StructureArgs {
  SystemArgs sys;
  double tol = 1e-12;
  std::string out;
};

int run_structure(const StructureArgs& a) {
  const StructureReport report = structure_check(a.sys.kind());
  {
    Sink sink(a.out, "structure.csv");
    io::CsvWriter csv(sink.stream(), {"t", "l", "diagonal", "max_abs", "expected_magnitude",
                                      "magnitude_residual", "pattern_residual"});
    for (const BlockCheck& b : report.blocks) {
      csv.cell(b.t).cell(b.l).cell(b.diagonal).cell(b.max_abs).cell(b.expected_magnitude);
      csv.cell(b.magnitude_residual).cell(b.pattern_residual);
      csv.end_row();
    }
  }
  std::cerr << "max_offdiagonal," << io::format_double(report.max_offdiagonal) << "\n"
            << "max_magnitude_residual," << io::format_double(report.max_magnitude_residual) << "\n"
            << "max_pattern_residual," << io::format_double(report.max_pattern_residual) << "\n";
  if (!report.holds(a.tol)) {
    throw Error("check", "block structure residual exceeds " + io::format_double(a.tol));
  }
  return 0;
}

// sample -----------------------------------------------------------------

struct SampleArgs {
  SystemArgs sys;
  std::string strategy = "vds";
  std::size_t m = 0;
  std::uint64_t seed = 0;
  std::string k;
  std::string out;
};

SamplingPlan make_plan(const SystemKind& system, Strategy strategy, std::size_t m, const std::string& k) {
  switch (strategy) {
    case Strategy::uds: return uds_pmf(system.dim());
    case Strategy::vds: return vds_pmf(system);
    case Strategy::mds: {
      if (k.empty()) throw InvalidArgument("mds needs --k with one sparsity per level");
      return mds_allocate(parse_counts(k), m, system.partition());
    }
  }
  throw InvalidArgument("unknown strategy");
}

int run_sample(const SampleArgs& a) {
  const SystemKind system = a.sys.kind();
  const Strategy strategy = strategy_from_string(a.strategy);
  if (a.m == 0) throw InvalidArgument("--M must be positive");
  const SampleSet sample = draw_sample(make_plan(system, strategy, a.m, a.k), a.m, a.seed);
  Sink sink(a.out, "sample.csv");
  io::write_sample_csv(sink.stream(), sample);
  if (!a.out.empty()) {
    const Mask mask = sample_mask(system, sample);
    io::write_pgm(fs::path(a.out) / "mask.pgm", mask.rows, mask.cols, mask.pixels);
  }
  return 0;
}

// recover ----------------------------------------------------------------

struct RecoverArgs {
  SystemArgs sys;
  std::string sample;
  std::string measurements;
  std::string truth;
  std::string snr = "inf";
  std::uint64_t seed = 0;
  std::optional<double> epsilon;
  std::string fidelity;
  SolverOptions solver;
  std::string out;
};

int run_recover(const RecoverArgs& a) {
  const SystemKind system = a.sys.kind();
  const SampleSet sample = io::read_sample_csv(a.sample);
  const Fidelity fidelity =
      a.fidelity.empty() ? (std::all_of(sample.weights.begin(), sample.weights.end(),
                                        [](double w) { return w == 1.0; })
                                ? Fidelity::unweighted
                                : Fidelity::weighted)
                         : fidelity_from_string(a.fidelity);

  std::vector<double> truth;
  std::vector<double> y;
  double epsilon = 0.0;
  if (!a.measurements.empty()) {
    y = io::read_vector_csv(a.measurements);
  } else if (!a.truth.empty()) {
    truth = io::read_vector_csv(a.truth);
    y = measure(system, sample, truth);
    NoiseSpec spec{parse_snr(a.snr), a.seed, system.dim()};
    const Noise noise = make_noise(spec, truth, y.size(),
                                   fidelity == Fidelity::weighted ? std::span<const double>(sample.weights)
                                                                  : std::span<const double>());
    for (std::size_t j = 0; j < y.size(); ++j) y[j] += noise.values[j];
    epsilon = fidelity == Fidelity::weighted ? noise.weighted_norm : noise.norm;
  } else {
    throw InvalidArgument("give --measurements or --truth");
  }
  if (a.epsilon) epsilon = *a.epsilon;

  RecoveryProblem problem{system, sample, y, epsilon, fidelity, a.solver};
  const RecoveryReport rep = solve_bpdn(problem);
  const std::vector<double> me = me_reconstruct(system, sample, y);

  if (a.out.empty()) {
    io::write_vector_csv(std::cout, rep.x_hat);
  } else {
    io::write_vector_csv(fs::path(a.out) / "x_cs.csv", rep.x_hat);
    io::write_vector_csv(fs::path(a.out) / "x_me.csv", me);
  }
  Sink sink(a.out, "recovery.csv");
  std::ostream& report_out = a.out.empty() ? std::cerr : sink.stream();
  io::CsvWriter csv(report_out, {"fidelity", "epsilon", "iterations", "residual", "objective",
                                 "converged", "cs_sre_db", "me_sre_db"});
  csv.cell(to_string(fidelity)).cell(epsilon).cell(rep.iterations).cell(rep.residual);
  csv.cell(rep.objective).cell(rep.converged);
  if (truth.empty()) {
    csv.cell(std::string_view("")).cell(std::string_view(""));
  } else {
    csv.cell(ratio_db(recovery_ratio(truth, rep.x_hat))).cell(ratio_db(recovery_ratio(truth, me)));
  }
  csv.end_row();
  return 0;
}

// experiment -------------------------------------------------------------

struct ExperimentArgs {
  std::string config;
  std::string preset;
  std::string strategy;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::string out;
};

int run_experiment_cmd(const ExperimentArgs& a) {
  if (a.config.empty() == a.preset.empty()) throw InvalidArgument("give exactly one of --config or --preset");
  ExperimentConfig config = a.config.empty() ? preset(a.preset) : load_config(a.config);
  if (!a.strategy.empty()) config.strategy = strategy_from_string(a.strategy);
  if (a.trials) config.trials = *a.trials;
  if (a.seed) config.seed = *a.seed;
  if (!a.out.empty()) config.output_dir = a.out;
  if (a.threads < 1) throw InvalidArgument("--threads must be >= 1");
  const ExperimentReport report = run_experiment(config, {a.threads});
  write_report(report, config.output_dir);
  write_summary_csv(std::cout, report);
  return 0;
}

// signal -----------------------------------------------------------------

struct SignalArgs {
  std::string kind = "gaussian_bump";
  int r = 9;
  double sigma = 16.0;
  std::optional<double> center;
  std::optional<double> rho;
  std::string system;
  std::string out;
};

int run_signal(const SignalArgs& a) {
  SignalSpec spec{signal_kind_from_string(a.kind), a.sigma, 0.0};
  const std::size_t n = std::size_t{1} << a.r;
  spec.center = a.center.value_or(static_cast<double>(n) / 2.0);
  const std::vector<double> x = generate(spec, a.r);
  if (is_image(spec.kind)) {
    if (a.out.empty()) {
      io::CsvWriter csv(std::cout, {"row", "col", "value"});
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          csv.cell(i).cell(j).cell(x[i + n * j]);
          csv.end_row();
        }
      }
    } else {
      io::write_image_csv(fs::path(a.out) / "signal.csv", x, n);
      io::write_image_pgm(fs::path(a.out) / "signal.pgm", x, n);
    }
  } else {
    Sink sink(a.out, "signal.csv");
    io::write_vector_csv(sink.stream(), x);
  }
  if (a.rho) {
    const SystemKind system{a.system.empty() ? (is_image(spec.kind) ? SystemTag::had2_idhw
                                                                    : SystemTag::had_dhw_1d)
                                             : system_tag_from_string(a.system),
                            a.r};
    if (system.dim() != x.size()) throw ShapeError("--system does not match the signal shape");
    const EffectiveSparsity es = effective_sparsity(sparsify(system, x), *a.rho, system.partition());
    Sink sink(a.out, "sparsity.csv");
    std::ostream& s = a.out.empty() ? std::cerr : sink.stream();
    io::CsvWriter csv(s, {"level", "size", "k"});
    const auto sizes = system.partition().cardinalities();
    for (std::size_t t = 0; t < es.k.size(); ++t) {
      csv.cell(t).cell(sizes[t]).cell(es.k[t]);
      csv.end_row();
    }
  }
  return 0;
}

int exit_code(std::string_view category) {
  static const std::map<std::string_view, int> codes = {
      {"usage", 2},      {"invalid-argument", 2}, {"range", 3}, {"shape", 3}, {"size", 3},
      {"infeasible", 4}, {"degenerate", 4},       {"io", 5},    {"check", 6}};
  const auto it = codes.find(category);
  return it == codes.end() ? 1 : it->second;
}

int fail(std::string_view category, const std::string& message) {
  std::string line = message;
  std::replace(line.begin(), line.end(), '\n', ' ');
  std::cerr << "error: " << category << ": " << line << "\n";
  return exit_code(category);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hadamard-Haar compressive sensing toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kLibraryVersion));

  TransformArgs ta;
  auto* transform = app.add_subcommand("transform", "apply a basis to a vector read from CSV");
  transform->add_option("--basis", ta.basis, "hadamard1d | hadamard2d | dhw | adhw | idhw")->capture_default_str();
  transform->add_option("--r", ta.r, "scale count")->capture_default_str();
  transform->add_option("--direction", ta.direction, "analysis | synthesis")->capture_default_str();
  transform->add_option("--in", ta.input, "index,value CSV")->required();
  transform->add_option("--out", ta.out, "output directory");

  CoherenceArgs ca;
  auto* coherence = app.add_subcommand("coherence", "local or multilevel coherence");
  add_system(coherence, ca.sys);
  coherence->add_option("--mode", ca.mode, "closed | brute")->capture_default_str();
  coherence->add_option("--kind", ca.kind, "local | multilevel")->capture_default_str();
  coherence->add_option("--out", ca.out, "output directory");

  StructureArgs sa;
  auto* structure = app.add_subcommand("structure-check", "verify the block structure of Phi^T Psi");
  add_system(structure, sa.sys);
  structure->add_option("--tol", sa.tol, "residual tolerance")->capture_default_str();
  structure->add_option("--out", sa.out, "output directory");

  SampleArgs sm;
  auto* sample = app.add_subcommand("sample", "draw a sampling set");
  add_system(sample, sm.sys);
  sample->add_option("--strategy", sm.strategy, "uds | vds | mds")->capture_default_str();
  sample->add_option("--M", sm.m, "number of measurements")->required();
  sample->add_option("--seed", sm.seed, "RNG seed")->capture_default_str();
  sample->add_option("--k", sm.k, "mds: comma-separated sparsity per level");
  sample->add_option("--out", sm.out, "output directory");

  RecoverArgs ra;
  auto* recover = app.add_subcommand("recover", "l1 and minimal-energy reconstruction");
  add_system(recover, ra.sys);
  recover->add_option("--sample", ra.sample, "sample CSV from `sample`")->required();
  recover->add_option("--measurements", ra.measurements, "index,value CSV of y");
  recover->add_option("--truth", ra.truth, "index,value CSV of x; y is simulated from it");
  recover->add_option("--snr", ra.snr, "noise level for --truth, dB or inf")->capture_default_str();
  recover->add_option("--seed", ra.seed, "noise seed")->capture_default_str();
  recover->add_option("--epsilon", ra.epsilon, "data-ball radius (default: oracle or 0)");
  recover->add_option("--fidelity", ra.fidelity, "weighted | unweighted");
  recover->add_option("--tol-feas", ra.solver.tol_feas)->capture_default_str();
  recover->add_option("--tol-gap", ra.solver.tol_gap)->capture_default_str();
  recover->add_option("--max-iterations", ra.solver.max_iterations)->capture_default_str();
  recover->add_option("--out", ra.out, "output directory");

  ExperimentArgs ea;
  auto* experiment = app.add_subcommand("experiment", "run a Monte-Carlo reconstruction experiment");
  experiment->add_option("--config", ea.config, "JSON configuration");
  experiment->add_option("--preset", ea.preset, "fig6 | donoho | phantom");
  experiment->add_option("--strategy", ea.strategy, "override the strategy");
  experiment->add_option("--trials", ea.trials, "override the trial count");
  experiment->add_option("--seed", ea.seed, "override the master seed");
  experiment->add_option("--threads", ea.threads, "worker threads")->capture_default_str();
  experiment->add_option("--out", ea.out, "output directory (overrides the config)");

  SignalArgs ga;
  auto* signal = app.add_subcommand("signal", "generate a test signal");
  signal->add_option("--kind", ga.kind, "gaussian_bump | blocks | bumps | heavisine | doppler | shepp_logan")
      ->capture_default_str();
  signal->add_option("--r", ga.r, "scale count")->capture_default_str();
  signal->add_option("--sigma", ga.sigma, "gaussian width")->capture_default_str();
  signal->add_option("--center", ga.center, "gaussian centre (default N/2)");
  signal->add_option("--rho", ga.rho, "also report effective sparsity per level");
  signal->add_option("--system", ga.system, "system for --rho");
  signal->add_option("--out", ga.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what());
  }

  try {
    if (*transform) return run_transform(ta);
    if (*coherence) return run_coherence(ca);
    if (*structure) return run_structure(sa);
    if (*sample) return run_sample(sm);
    if (*recover) return run_recover(ra);
    if (*experiment) return run_experiment_cmd(ea);
    if (*signal) return run_signal(ga);
  } catch (const Error& e) {
    return fail(e.category(), e.what());
  } catch (const std::exception& e) {
    return fail("internal", e.what());
  }
  return 0;
}
