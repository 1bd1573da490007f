#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "hhcs/error.hpp"
#include "hhcs/recovery.hpp"
#include "hhcs/sampling.hpp"
#include "hhcs/signals.hpp"
#include "hhcs/system.hpp"
#include "oracles/dense_formulas.hpp"
#include "oracles/simplex.hpp"

using namespace hhcs;

namespace {

double norm(const std::vector<double>& v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

double rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return norm(d) / std::max(norm(b), 1e-300);
}

double l1(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += std::abs(x);
  return acc;
}

std::vector<double> random_vector(std::size_t n, std::mt19937_64& gen) {
  std::normal_distribution<double> dist;
  std::vector<double> v(n);
  for (double& x : v) x = dist(gen);
  return v;
}

SampleSet full_sample(std::size_t n) {
  SampleSet s;
  s.omega.resize(n);
  std::iota(s.omega.begin(), s.omega.end(), Index{1});
  s.weights.assign(n, 1.0);
  s.strategy = Strategy::mds;
  return s;
}

// Sampled rows of Phi^T Psi from the formula oracles (1-D only).
Eigen::MatrixXd sampled_operator(int r, const std::vector<Index>& rows) {
  const Eigen::MatrixXd u = oracle::hadamard(r).transpose() * oracle::haar(1, r);
  Eigen::MatrixXd a(rows.size(), u.cols());
  for (std::size_t j = 0; j < rows.size(); ++j) a.row(static_cast<Eigen::Index>(j)) = u.row(static_cast<Eigen::Index>(rows[j] - 1));
  return a;
}

}  // namespace

TEST_CASE("full sampling with epsilon zero returns the signal") {
  std::mt19937_64 gen(5);
  for (SystemKind s : {SystemKind{SystemTag::had_dhw_1d, 7}, SystemKind{SystemTag::had2_idhw, 3},
                       SystemKind{SystemTag::had2_adhw, 3}}) {
    const auto x = random_vector(s.dim(), gen);
    const SampleSet smp = full_sample(s.dim());
    RecoveryProblem prob{s, smp, measure(s, smp, x), 0.0, Fidelity::unweighted, {}};
    const RecoveryReport rep = solve_bpdn(prob);
    CHECK(rel_diff(rep.x_hat, x) <= 1e-8);
    CHECK(rep.converged);
    CHECK(rel_diff(me_reconstruct(s, smp, prob.y), x) <= 1e-12);
  }
}

TEST_CASE("basis pursuit at N = 8, M = 4 matches the LP oracle") {
  std::mt19937_64 gen(8);
  const SystemKind s{SystemTag::had_dhw_1d, 3};
  for (int trial = 0; trial < 10; ++trial) {
    SampleSet smp = draw_sample(uds_pmf(8), 4, 100 + static_cast<std::uint64_t>(trial));
    const auto x = random_vector(8, gen);
    const auto y = measure(s, smp, x);
    const RecoveryReport rep = solve_bpdn({s, smp, y, 0.0, Fidelity::weighted, {}});
    std::vector<Index> rows = smp.omega;
    const auto lp = oracle::basis_pursuit(sampled_operator(3, rows),
                                          Eigen::Map<const Eigen::VectorXd>(y.data(), 4));
    REQUIRE(lp.has_value());
    CAPTURE(trial);
    CHECK(std::abs(rep.objective - lp->objective) <= 1e-6 * lp->objective);
    CHECK(rep.residual <= 1e-6 * std::max(1.0, norm(y)));
  }
}

TEST_CASE("the LP oracle solves a hand-checked program") {
  // min |a| + |b| s.t. a + 2 b = 2 has optimum b = 1.
  Eigen::MatrixXd a(1, 2);
  a << 1, 2;
  Eigen::VectorXd b(1);
  b << 2;
  const auto res = oracle::basis_pursuit(a, b);
  REQUIRE(res.has_value());
  CHECK(res->objective == doctest::Approx(1.0));
  CHECK(res->x(1) == doctest::Approx(1.0));
  CHECK(std::abs(res->x(0)) < 1e-12);
}

TEST_CASE("noisy recovery satisfies the ball and beats the truth's objective") {
  std::mt19937_64 gen(13);
  const SystemKind s{SystemTag::had_dhw_1d, 8};
  for (Strategy st : {Strategy::vds, Strategy::uds}) {
    const SamplingPlan plan = st == Strategy::vds ? vds_pmf(s) : uds_pmf(s.dim());
    const SampleSet smp = draw_sample(plan, 96, 77);
    const auto x = generate({SignalKind::gaussian_bump, 12.0, 120.0}, 8);
    auto y = measure(s, smp, x);
    const Noise noise = make_noise({30.0, 3, 0}, x, y.size(), smp.weights);
    for (std::size_t j = 0; j < y.size(); ++j) y[j] += noise.values[j];
    RecoveryProblem prob{s, smp, y, noise.weighted_norm, Fidelity::weighted, {}};
    const RecoveryReport rep = solve_bpdn(prob);
    CHECK(rep.converged);
    CHECK(rep.residual <= prob.epsilon + 1e-6 * std::max(1.0, norm(y)));
    CHECK(constraint_residual(prob, x) == doctest::Approx(noise.weighted_norm).epsilon(1e-10));
    const double truth_obj = l1(sparsify(s, x));
    CHECK(rep.objective <= truth_obj * (1 + 1e-6));
    CHECK(rep.objective == doctest::Approx(l1(rep.coefficients)));
  }
}

TEST_CASE("unweighted fidelity uses the plain residual") {
  const SystemKind s{SystemTag::had_dhw_1d, 6};
  const LevelPartition part = s.partition();
  const std::vector<std::size_t> k{1, 1, 2, 3, 4, 6, 8};
  const SampleSet smp = draw_sample(mds_allocate(k, 30, part), 30, 4);
  const auto x = generate({SignalKind::gaussian_bump, 6.0, 30.0}, 6);
  auto y = measure(s, smp, x);
  const Noise noise = make_noise({25.0, 9, 0}, x, y.size());
  for (std::size_t j = 0; j < y.size(); ++j) y[j] += noise.values[j];
  RecoveryProblem prob{s, smp, y, noise.norm, Fidelity::unweighted, {}};
  CHECK(constraint_residual(prob, x) == doctest::Approx(noise.norm).epsilon(1e-10));
  const RecoveryReport rep = solve_bpdn(prob);
  CHECK(rep.converged);
  CHECK(rep.residual <= noise.norm + 1e-6 * std::max(1.0, norm(y)));
  CHECK(rep.objective <= l1(sparsify(s, x)) * (1 + 1e-6));
}

TEST_CASE("duplicated rows with epsilon zero are consistent") {
  const SystemKind s{SystemTag::had_dhw_1d, 5};
  const SampleSet smp = draw_sample(vds_pmf(s), 40, 21);
  std::mt19937_64 gen(1);
  const auto x = random_vector(s.dim(), gen);
  const auto y = measure(s, smp, x);
  const RecoveryReport rep = solve_bpdn({s, smp, y, 0.0, Fidelity::weighted, {}});
  CHECK(rep.converged);
  CHECK(rep.residual <= 1e-6 * std::max(1.0, norm(y)));
}

TEST_CASE("inconsistent duplicates with epsilon zero are infeasible") {
  const SystemKind s{SystemTag::had_dhw_1d, 2};
  SampleSet smp;
  smp.omega = {1, 1};
  smp.weights = {1.0, 1.0};
  CHECK_THROWS_AS(solve_bpdn({s, smp, {1.0, 2.0}, 0.0, Fidelity::unweighted, {}}), InfeasibleError);
  SampleSet empty;
  CHECK_THROWS_AS(solve_bpdn({s, empty, {}, 0.0, Fidelity::unweighted, {}}), InfeasibleError);
}

TEST_CASE("recovery validates its inputs") {
  const SystemKind s{SystemTag::had_dhw_1d, 2};
  SampleSet smp;
  smp.omega = {1, 2};
  smp.weights = {1.0, 1.0};
  CHECK_THROWS_AS(solve_bpdn({s, smp, {1.0}, 0.0, Fidelity::weighted, {}}), ShapeError);
  CHECK_THROWS_AS(solve_bpdn({s, smp, {1.0, NAN}, 0.0, Fidelity::weighted, {}}), InvalidArgument);
  CHECK_THROWS_AS(solve_bpdn({s, smp, {1.0, 1.0}, -1.0, Fidelity::weighted, {}}), InvalidArgument);
  smp.omega = {1, 9};
  CHECK_THROWS_AS(solve_bpdn({s, smp, {1.0, 1.0}, 0.0, Fidelity::weighted, {}}), RangeError);
  CHECK_THROWS_AS(fidelity_from_string("l2"), InvalidArgument);
  CHECK(default_fidelity(Strategy::mds) == Fidelity::unweighted);
  CHECK(default_fidelity(Strategy::vds) == Fidelity::weighted);
}

TEST_CASE("solver is deterministic") {
  const SystemKind s{SystemTag::had2_idhw, 4};
  const SampleSet smp = draw_sample(vds_pmf(s), 100, 6);
  const auto x = generate({SignalKind::shepp_logan, 16, 0}, 4);
  const auto y = measure(s, smp, x);
  const RecoveryProblem prob{s, smp, y, 0.01, Fidelity::weighted, {}};
  const RecoveryReport a = solve_bpdn(prob);
  const RecoveryReport b = solve_bpdn(prob);
  CHECK(a.x_hat == b.x_hat);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("minimal-energy reconstruction examples") {
  const SystemKind s{SystemTag::had_dhw_1d, 2};
  SampleSet one;
  one.omega = {1};
  one.weights = {1.0};
  const auto x = me_reconstruct(s, one, std::vector<double>{2.0});
  for (double v : x) CHECK(v == doctest::Approx(1.0));

  // Dense pseudo-inverse of the stacked duplicated operator.
  SampleSet dup;
  dup.omega = {3, 1, 3};
  dup.weights = {1.0, 1.0, 1.0};
  const std::vector<double> y{0.5, -1.0, 1.5};
  const Eigen::MatrixXd h = oracle::hadamard(2);
  Eigen::MatrixXd a(3, 4);
  for (int j = 0; j < 3; ++j) a.row(j) = h.transpose().row(static_cast<Eigen::Index>(dup.omega[static_cast<std::size_t>(j)] - 1));
  const Eigen::VectorXd pinv = a.completeOrthogonalDecomposition().pseudoInverse() *
                               Eigen::Map<const Eigen::VectorXd>(y.data(), 3);
  const auto me = me_reconstruct(s, dup, y);
  for (int i = 0; i < 4; ++i) CHECK(me[static_cast<std::size_t>(i)] == doctest::Approx(pinv(i)).epsilon(1e-12));
}

TEST_CASE("minimal-energy full sampling at 20 dB SNR gives about 20 dB SRE") {
  const SystemKind s{SystemTag::had_dhw_1d, 9};
  const SampleSet smp = full_sample(s.dim());
  std::vector<std::vector<double>> truths, estimates;
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = generate({SignalKind::gaussian_bump, 64.0, 200.0 + 10 * trial}, 9);
    auto y = measure(s, smp, x);
    const Noise noise = make_noise({20.0, static_cast<std::uint64_t>(trial), s.dim()}, x, y.size());
    for (std::size_t j = 0; j < y.size(); ++j) y[j] += noise.values[j];
    truths.push_back(x);
    estimates.push_back(me_reconstruct(s, smp, y));
  }
  CHECK(std::abs(sre(truths, estimates).sre_db - 20.0) <= 1.0);
}
