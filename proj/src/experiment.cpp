#include "hhcs/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "hhcs/error.hpp"
#include "hhcs/io.hpp"
#include "hhcs/rng.hpp"

namespace hhcs {

namespace {

using nlohmann::json;

enum StreamTag : std::uint64_t { kSignal = 1, kSample = 2, kNoise = 3, kPregen = 4 };

std::uint64_t derive(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  return Rng::stream(master, path).engine()();
}

json snr_to_json(double snr) {
  if (snr == std::numeric_limits<double>::infinity()) return "inf";
  return snr;
}

double snr_from_json(const json& j) {
  if (j.is_string() && j.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
  if (j.is_number()) return j.get<double>();
  throw InvalidArgument("snr_db must be a number or \"inf\"");
}

void check_keys(const json& j, std::initializer_list<std::string_view> allowed, std::string_view where) {
  if (!j.is_object()) throw InvalidArgument(std::string(where) + " must be a JSON object");
  for (const auto& item : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw InvalidArgument("unknown field '" + item.key() + "' in " + std::string(where));
    }
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void validate(const ExperimentConfig& c) {
  if (c.system.r < 1) throw InvalidArgument("experiment needs r >= 1");
  if (c.trials < 1) throw InvalidArgument("trials must be >= 1");
  if (c.ratios.empty()) throw InvalidArgument("no measurement ratios given");
  for (double r : c.ratios) {
    if (!(r > 0.0 && r <= 1.0)) throw InvalidArgument("ratio " + io::format_double(r) + " outside (0, 1]");
  }
  if (std::isnan(c.snr_db)) throw InvalidArgument("snr_db must not be NaN");
  if (!(c.rho > 0.0 && c.rho <= 1.0)) throw InvalidArgument("rho must lie in (0, 1]");
  if (c.pregenerated < 1) throw InvalidArgument("pregenerated must be >= 1");
  if (is_image(c.signal.kind) != c.system.two_d()) {
    throw InvalidArgument("signal '" + std::string(to_string(c.signal.kind)) +
                          "' does not match system '" + std::string(to_string(c.system.tag)) + "'");
  }
  if (c.signal.kind == SignalKind::gaussian_bump) {
    const double n = static_cast<double>(c.system.side());
    if (!(c.signal.sigma > 0.0)) throw InvalidArgument("gaussian sigma must be > 0");
    if (c.randomize_center && !(2.0 * c.signal.sigma <= n)) {
      throw InvalidArgument("gaussian sigma too wide for a random centre in [sigma, N - sigma]");
    }
  }
  if (c.solver.max_iterations < 1) throw InvalidArgument("max_iterations must be >= 1");
}

bool random_signal(const ExperimentConfig& c) {
  return c.signal.kind == SignalKind::gaussian_bump && c.randomize_center;
}

double draw_center(const ExperimentConfig& c, Rng rng) {
  const double n = static_cast<double>(c.system.side());
  return rng.uniform(c.signal.sigma, n - c.signal.sigma);
}

std::vector<double> trial_signal(const ExperimentConfig& c, double center) {
  SignalSpec spec = c.signal;
  spec.center = center;
  return generate(spec, c.system.r);
}

std::vector<std::size_t> level_sparsity(const ExperimentConfig& c, std::span<const double> x,
                                        const LevelPartition& partition) {
  return effective_sparsity(sparsify(c.system, x), c.rho, partition).k;
}

std::size_t count_for(double ratio, std::size_t n) {
  const auto m = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n)));
  return std::clamp<std::size_t>(m, 1, n);
}

}  // namespace

std::string_view to_string(SparsitySource source) {
  return source == SparsitySource::oracle ? "oracle" : "worst_case";
}

SparsitySource sparsity_source_from_string(std::string_view name) {
  if (name == "oracle") return SparsitySource::oracle;
  if (name == "worst_case") return SparsitySource::worst_case;
  throw InvalidArgument("unknown sparsity source '" + std::string(name) + "'");
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return a.system == b.system && a.strategy == b.strategy && a.ratios == b.ratios &&
         (a.snr_db == b.snr_db) && a.trials == b.trials && a.seed == b.seed &&
         a.signal.kind == b.signal.kind && a.signal.sigma == b.signal.sigma &&
         a.signal.center == b.signal.center && a.randomize_center == b.randomize_center &&
         a.rho == b.rho && a.mds_sparsity == b.mds_sparsity && a.pregenerated == b.pregenerated &&
         a.solver.tol_feas == b.solver.tol_feas && a.solver.tol_gap == b.solver.tol_gap &&
         a.solver.max_iterations == b.solver.max_iterations && a.output_dir == b.output_dir;
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["version"] = kConfigVersion;
  j["system"] = {{"tag", std::string(to_string(c.system.tag))}, {"r", c.system.r}};
  j["strategy"] = std::string(to_string(c.strategy));
  j["ratios"] = c.ratios;
  j["snr_db"] = snr_to_json(c.snr_db);
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["signal"] = {{"kind", std::string(to_string(c.signal.kind))},
                 {"sigma", c.signal.sigma},
                 {"center", c.signal.center},
                 {"randomize_center", c.randomize_center}};
  j["rho"] = c.rho;
  j["mds_sparsity"] = {{"source", std::string(to_string(c.mds_sparsity))},
                       {"pregenerated", c.pregenerated}};
  j["solver"] = {{"tol_feas", c.solver.tol_feas},
                 {"tol_gap", c.solver.tol_gap},
                 {"max_iterations", c.solver.max_iterations}};
  j["output_dir"] = c.output_dir;
  return j.dump(2) + "\n";
}

ExperimentConfig config_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig c;
  try {
    check_keys(j, {"version", "system", "strategy", "ratios", "snr_db", "trials", "seed", "signal",
                   "rho", "mds_sparsity", "solver", "output_dir"},
               "config");
    if (j.contains("version") && j.at("version").get<int>() != kConfigVersion) {
      throw InvalidArgument("unsupported config version " + j.at("version").dump());
    }
    if (j.contains("system")) {
      const json& s = j.at("system");
      check_keys(s, {"tag", "r"}, "system");
      if (s.contains("tag")) c.system.tag = system_tag_from_string(s.at("tag").get<std::string>());
      read(s, "r", c.system.r);
    }
    if (j.contains("strategy")) c.strategy = strategy_from_string(j.at("strategy").get<std::string>());
    read(j, "ratios", c.ratios);
    if (j.contains("snr_db")) c.snr_db = snr_from_json(j.at("snr_db"));
    read(j, "trials", c.trials);
    read(j, "seed", c.seed);
    if (j.contains("signal")) {
      const json& s = j.at("signal");
      check_keys(s, {"kind", "sigma", "center", "randomize_center"}, "signal");
      if (s.contains("kind")) c.signal.kind = signal_kind_from_string(s.at("kind").get<std::string>());
      read(s, "sigma", c.signal.sigma);
      read(s, "center", c.signal.center);
      read(s, "randomize_center", c.randomize_center);
    }
    read(j, "rho", c.rho);
    if (j.contains("mds_sparsity")) {
      const json& s = j.at("mds_sparsity");
      check_keys(s, {"source", "pregenerated"}, "mds_sparsity");
      if (s.contains("source")) {
        c.mds_sparsity = sparsity_source_from_string(s.at("source").get<std::string>());
      }
      read(s, "pregenerated", c.pregenerated);
    }
    if (j.contains("solver")) {
      const json& s = j.at("solver");
      check_keys(s, {"tol_feas", "tol_gap", "max_iterations"}, "solver");
      read(s, "tol_feas", c.solver.tol_feas);
      read(s, "tol_gap", c.solver.tol_gap);
      read(s, "max_iterations", c.solver.max_iterations);
    }
    read(j, "output_dir", c.output_dir);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad config field: ") + e.what());
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

std::vector<std::string> preset_names() { return {"fig6", "donoho", "phantom"}; }

ExperimentConfig preset(std::string_view name) {
  ExperimentConfig c;
  if (name == "fig6") {
    c.ratios = {0.02, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    return c;
  }
  if (name == "donoho") {
    c.system = {SystemTag::had_dhw_1d, 11};
    c.signal = {SignalKind::blocks, 0.0, 0.0};
    c.randomize_center = false;
    c.mds_sparsity = SparsitySource::oracle;
    c.ratios = {0.2};
    c.trials = 1;
    return c;
  }
  if (name == "phantom") {
    c.system = {SystemTag::had2_idhw, 7};
    c.signal = {SignalKind::shepp_logan, 0.0, 0.0};
    c.randomize_center = false;
    c.mds_sparsity = SparsitySource::oracle;
    c.ratios = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    c.trials = 10;
    return c;
  }
  throw InvalidArgument("unknown preset '" + std::string(name) + "'");
}

ExperimentReport run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  validate(config);
  ExperimentReport report;
  report.config = config;
  const SystemKind& system = config.system;
  const std::size_t n = system.dim();
  const LevelPartition partition = system.partition();
  const bool varying = random_signal(config);

  std::vector<double> fixed_signal;
  if (!varying) fixed_signal = trial_signal(config, config.signal.center);

  SamplingPlan density;
  if (config.strategy == Strategy::uds) density = uds_pmf(n);
  if (config.strategy == Strategy::vds) density = vds_pmf(system);

  const bool mds = config.strategy == Strategy::mds;
  const bool per_trial_k = mds && varying && config.mds_sparsity == SparsitySource::oracle;
  if (mds && !per_trial_k) {
    if (varying) {
      report.mds_k.assign(partition.size(), 0);
      for (int p = 0; p < config.pregenerated; ++p) {
        const double center = draw_center(config, Rng::stream(config.seed, {kPregen, std::uint64_t(p)}));
        const auto k = level_sparsity(config, trial_signal(config, center), partition);
        for (std::size_t t = 0; t < k.size(); ++t) report.mds_k[t] = std::max(report.mds_k[t], k[t]);
      }
    } else {
      report.mds_k = level_sparsity(config, fixed_signal, partition);
    }
  }

  std::vector<std::size_t> counts;
  std::vector<SamplingPlan> plans;
  for (double ratio : config.ratios) {
    counts.push_back(count_for(ratio, n));
    plans.push_back(mds && !per_trial_k ? mds_allocate(report.mds_k, counts.back(), partition) : density);
  }

  const std::size_t trials = static_cast<std::size_t>(config.trials);
  const std::size_t jobs = config.ratios.size() * trials;
  report.trials.resize(jobs);
  std::vector<std::exception_ptr> failures(jobs);
  const Fidelity fidelity = default_fidelity(config.strategy);

  auto run_job = [&](std::size_t job) {
    const std::size_t ri = job / trials;
    const std::size_t t = job % trials;
    TrialRecord& rec = report.trials[job];
    rec.ratio_index = ri;
    rec.ratio = config.ratios[ri];
    rec.m = counts[ri];
    rec.trial = static_cast<int>(t);

    std::vector<double> x;
    if (varying) {
      rec.center = draw_center(config, Rng::stream(config.seed, {kSignal, ri, t}));
      x = trial_signal(config, rec.center);
    } else {
      rec.center = config.signal.center;
      x = fixed_signal;
    }

    SamplingPlan plan = per_trial_k
                            ? mds_allocate(level_sparsity(config, x, partition), rec.m, partition)
                            : plans[ri];
    const SampleSet sample = draw_sample(plan, rec.m, derive(config.seed, {kSample, ri, t}));
    std::vector<Index> distinct(sample.omega);
    std::sort(distinct.begin(), distinct.end());
    rec.distinct = static_cast<std::size_t>(std::unique(distinct.begin(), distinct.end()) - distinct.begin());

    NoiseSpec noise_spec{config.snr_db, derive(config.seed, {kNoise, ri, t}), n};
    const Noise noise = make_noise(noise_spec, x, sample.size(),
                                   fidelity == Fidelity::weighted ? std::span<const double>(sample.weights)
                                                                  : std::span<const double>());
    std::vector<double> y = measure(system, sample, x);
    for (std::size_t j = 0; j < y.size(); ++j) y[j] += noise.values[j];
    rec.noise_sigma = noise.sigma;
    rec.epsilon = fidelity == Fidelity::weighted ? noise.weighted_norm : noise.norm;

    RecoveryProblem problem{system, sample, y, rec.epsilon, fidelity, config.solver};
    const RecoveryReport cs = solve_bpdn(problem);
    rec.iterations = cs.iterations;
    rec.residual = cs.residual;
    rec.converged = cs.converged;
    rec.cs_ratio = std::min(recovery_ratio(x, cs.x_hat), kRatioCap);
    rec.me_ratio = std::min(recovery_ratio(x, me_reconstruct(system, sample, y)), kRatioCap);
  };

  const std::size_t workers =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(options.threads, 1)), 1, std::max<std::size_t>(jobs, 1));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t job = next++; job < jobs; job = next++) {
      try {
        run_job(job);
      } catch (...) {
        failures[job] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  for (const std::exception_ptr& e : failures) {
    if (e) std::rethrow_exception(e);
  }

  for (std::size_t ri = 0; ri < config.ratios.size(); ++ri) {
    RatioSummary s;
    s.ratio = config.ratios[ri];
    s.m = counts[ri];
    std::vector<double> cs, me;
    for (std::size_t t = 0; t < trials; ++t) {
      const TrialRecord& rec = report.trials[ri * trials + t];
      cs.push_back(rec.cs_ratio);
      me.push_back(rec.me_ratio);
      s.converged += rec.converged ? 1 : 0;
    }
    s.cs = summarize_ratios(cs);
    s.me = summarize_ratios(me);
    report.summary.push_back(std::move(s));
  }
  return report;
}

void write_trials_csv(std::ostream& out, const ExperimentReport& report) {
  io::CsvWriter csv(out, {"ratio_index", "ratio", "m", "trial", "center", "distinct", "noise_sigma",
                          "epsilon", "cs_ratio", "cs_sre_db", "cs_exact", "me_ratio", "me_sre_db",
                          "me_exact", "iterations", "residual", "converged"});
  for (const TrialRecord& r : report.trials) {
    csv.cell(r.ratio_index).cell(r.ratio).cell(r.m).cell(r.trial).cell(r.center).cell(r.distinct);
    csv.cell(r.noise_sigma).cell(r.epsilon);
    csv.cell(r.cs_ratio).cell(ratio_db(r.cs_ratio)).cell(r.cs_ratio == kRatioCap);
    csv.cell(r.me_ratio).cell(ratio_db(r.me_ratio)).cell(r.me_ratio == kRatioCap);
    csv.cell(r.iterations).cell(r.residual).cell(r.converged);
    csv.end_row();
  }
}

void write_summary_csv(std::ostream& out, const ExperimentReport& report) {
  io::CsvWriter csv(out, {"system", "r", "strategy", "ratio", "m", "trials", "cs_sre_db", "cs_exact",
                          "me_sre_db", "me_exact", "converged"});
  for (const RatioSummary& s : report.summary) {
    csv.cell(to_string(report.config.system.tag)).cell(report.config.system.r);
    csv.cell(to_string(report.config.strategy)).cell(s.ratio).cell(s.m).cell(report.config.trials);
    csv.cell(s.cs.sre_db).cell(s.cs.exact).cell(s.me.sre_db).cell(s.me.exact).cell(s.converged);
    csv.end_row();
  }
}

void write_report(const ExperimentReport& report, const std::filesystem::path& dir) {
  {
    std::ofstream out = io::open_output(dir / "trials.csv");
    write_trials_csv(out, report);
  }
  {
    std::ofstream out = io::open_output(dir / "summary.csv");
    write_summary_csv(out, report);
  }
  {
    std::ofstream out = io::open_output(dir / "config.json");
    out << config_to_json(report.config);
  }
  {
    json meta;
    meta["library_version"] = std::string(kLibraryVersion);
    meta["rng_algorithm"] = std::string(Rng::kAlgorithm);
    meta["mds_k"] = report.mds_k;
    std::ofstream out = io::open_output(dir / "meta.json");
    out << meta.dump(2) << "\n";
  }
}

}  // namespace hhcs
