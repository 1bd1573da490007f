#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "hhcs/error.hpp"
#include "hhcs/experiment.hpp"

using namespace hhcs;

namespace {

ExperimentConfig small_config(Strategy strategy) {
  ExperimentConfig c;
  c.system = {SystemTag::had_dhw_1d, 7};
  c.strategy = strategy;
  c.ratios = {0.25, 0.5};
  c.trials = 4;
  c.seed = 31;
  c.signal = {SignalKind::gaussian_bump, 12.0, 0.0};
  c.pregenerated = 10;
  return c;
}

std::string csv(const ExperimentReport& r, bool trials) {
  std::ostringstream out;
  if (trials) write_trials_csv(out, r);
  else write_summary_csv(out, r);
  return out.str();
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config round trips through JSON") {
  ExperimentConfig c = small_config(Strategy::mds);
  c.snr_db = std::numeric_limits<double>::infinity();
  c.solver = {1e-7, 1e-8, 1234};
  c.output_dir = "results/run1";
  c.mds_sparsity = SparsitySource::oracle;
  CHECK(config_from_json(config_to_json(c)) == c);
  for (const std::string& name : preset_names()) {
    const ExperimentConfig p = preset(name);
    CHECK(config_from_json(config_to_json(p)) == p);
  }
  CHECK(config_from_json("{}") == ExperimentConfig{});
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(config_from_json("{\"bogus\": 1}"), InvalidArgument);
  CHECK_THROWS_AS(config_from_json("{\"trials\": 0}"), InvalidArgument);
  CHECK_THROWS_AS(config_from_json("{\"ratios\": [0.0]}"), InvalidArgument);
  CHECK_THROWS_AS(config_from_json("{\"ratios\": [1.5]}"), InvalidArgument);
  CHECK_THROWS_AS(config_from_json("{\"version\": 99}"), InvalidArgument);
  CHECK_THROWS_AS(config_from_json("{\"system\": {\"tag\": \"had2_idhw\", \"r\": 4}}"), InvalidArgument);
  CHECK_THROWS_AS(config_from_json("not json"), InvalidArgument);
  CHECK_THROWS_AS(config_from_json("{\"trials\": \"many\"}"), InvalidArgument);
  CHECK_THROWS_AS(preset("fig99"), InvalidArgument);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), IoError);
  CHECK(config_from_json("{\"snr_db\": \"inf\"}").snr_db == std::numeric_limits<double>::infinity());
}

TEST_CASE("noiseless full-sampling MDS experiment is exact") {
  ExperimentConfig c = small_config(Strategy::mds);
  c.ratios = {1.0};
  c.snr_db = std::numeric_limits<double>::infinity();
  const ExperimentReport r = run_experiment(c);
  REQUIRE(r.summary.size() == 1);
  CHECK(r.summary[0].cs.sre_db >= 100.0);
  CHECK(r.summary[0].me.sre_db >= 240.0);
  CHECK(r.summary[0].m == 128);
}

TEST_CASE("report structure and internal consistency") {
  const ExperimentConfig c = small_config(Strategy::vds);
  const ExperimentReport r = run_experiment(c);
  REQUIRE(r.trials.size() == 8);
  REQUIRE(r.summary.size() == 2);
  for (std::size_t i = 0; i < r.trials.size(); ++i) {
    const TrialRecord& t = r.trials[i];
    CHECK(t.ratio_index == i / 4);
    CHECK(t.trial == static_cast<int>(i % 4));
    CHECK(t.m == (t.ratio_index == 0 ? 32u : 64u));
    CHECK(t.center >= c.signal.sigma);
    CHECK(t.center <= 128 - c.signal.sigma);
    CHECK(t.epsilon > 0.0);
  }
  for (std::size_t k = 0; k < 2; ++k) {
    std::vector<double> cs, me;
    int conv = 0;
    for (const TrialRecord& t : r.trials) {
      if (t.ratio_index != k) continue;
      cs.push_back(t.cs_ratio);
      me.push_back(t.me_ratio);
      conv += t.converged ? 1 : 0;
    }
    CHECK(summarize_ratios(cs).sre_db == r.summary[k].cs.sre_db);
    CHECK(summarize_ratios(me).sre_db == r.summary[k].me.sre_db);
    CHECK(conv == r.summary[k].converged);
  }
}

TEST_CASE("experiments are deterministic across runs and thread counts") {
  for (Strategy st : {Strategy::uds, Strategy::vds, Strategy::mds}) {
    const ExperimentConfig c = small_config(st);
    const ExperimentReport a = run_experiment(c, {1});
    const ExperimentReport b = run_experiment(c, {1});
    const ExperimentReport d = run_experiment(c, {8});
    CHECK(csv(a, true) == csv(b, true));
    CHECK(csv(a, true) == csv(d, true));
    CHECK(csv(a, false) == csv(d, false));
    CHECK(a.mds_k == d.mds_k);
  }
}

TEST_CASE("different seeds give different trials") {
  ExperimentConfig c = small_config(Strategy::vds);
  const ExperimentReport a = run_experiment(c);
  c.seed = 32;
  const ExperimentReport b = run_experiment(c);
  CHECK(csv(a, true) != csv(b, true));
}

TEST_CASE("worst-case MDS sparsity is the per-level maximum over pregenerated signals") {
  ExperimentConfig c = small_config(Strategy::mds);
  const ExperimentReport r = run_experiment(c);
  REQUIRE(r.mds_k.size() == 8);
  const auto caps = c.system.partition().cardinalities();
  for (std::size_t t = 0; t < caps.size(); ++t) CHECK(r.mds_k[t] <= caps[t]);
  CHECK(r.mds_k[0] == 1);
}

TEST_CASE("fixed signals from presets run") {
  ExperimentConfig c = preset("donoho");
  c.system.r = 8;
  c.signal.kind = SignalKind::heavisine;
  c.strategy = Strategy::mds;
  const ExperimentReport r = run_experiment(c);
  CHECK(r.summary.size() == 1);
  CHECK(r.summary[0].cs.sre_db > 10.0);

  ExperimentConfig img = preset("phantom");
  img.system.r = 4;
  img.ratios = {0.5};
  img.trials = 2;
  img.strategy = Strategy::vds;
  const ExperimentReport ri = run_experiment(img);
  CHECK(ri.trials.size() == 2);
}

TEST_CASE("write_report produces CSV and JSON files") {
  const ExperimentConfig c = small_config(Strategy::uds);
  const ExperimentReport r = run_experiment(c);
  const auto dir = std::filesystem::temp_directory_path() / "hhcs_experiment_test";
  std::filesystem::remove_all(dir);
  write_report(r, dir);
  for (const char* f : {"trials.csv", "summary.csv", "config.json", "meta.json"}) {
    CHECK(std::filesystem::exists(dir / f));
  }
  CHECK(slurp(dir / "trials.csv") == csv(r, true));
  CHECK(load_config(dir / "config.json") == c);
  const std::string head = slurp(dir / "summary.csv").substr(0, 40);
  CHECK(head.rfind("system,r,strategy,ratio,m,trials", 0) == 0);
  std::filesystem::remove_all(dir);
}
