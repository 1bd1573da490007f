#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "hhcs/error.hpp"
#include "hhcs/signals.hpp"
#include "hhcs/system.hpp"

using namespace hhcs;

namespace {

double norm(std::span<const double> v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

// WaveLab Blocks table, transcribed separately from the library.
double blocks_oracle(double t) {
  static const double pos[] = {0.10, 0.13, 0.15, 0.23, 0.25, 0.40, 0.44, 0.65, 0.76, 0.78, 0.81};
  static const double hgt[] = {4, -5, 3, -4, 5, -4.2, 2.1, 4.3, -3.1, 2.1, -4.2};
  double v = 0.0;
  for (int j = 0; j < 11; ++j) {
    if (t > pos[j]) v += hgt[j];
    else if (t == pos[j]) v += 0.5 * hgt[j];
  }
  return v;
}

double bumps_oracle(double t) {
  static const double pos[] = {0.10, 0.13, 0.15, 0.23, 0.25, 0.40, 0.44, 0.65, 0.76, 0.78, 0.81};
  static const double hgt[] = {4, 5, 3, 4, 5, 4.2, 2.1, 4.3, 3.1, 5.1, 4.2};
  static const double wth[] = {0.005, 0.005, 0.006, 0.01, 0.01, 0.03, 0.01, 0.01, 0.005, 0.008, 0.005};
  double v = 0.0;
  for (int j = 0; j < 11; ++j) v += hgt[j] / std::pow(1.0 + std::abs(t - pos[j]) / wth[j], 4);
  return v;
}

// Smallest n with ||H_n(s)|| >= rho ||s||, by direct enumeration over n.
std::size_t sparsity_oracle(std::vector<double> s, double rho) {
  std::vector<double> mags(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) mags[i] = s[i] * s[i];
  std::sort(mags.rbegin(), mags.rend());
  const double total = std::accumulate(mags.begin(), mags.end(), 0.0);
  double kept = 0.0;
  for (std::size_t n = 0; n <= s.size(); ++n) {
    if (std::sqrt(kept) >= rho * std::sqrt(total)) return n;
    kept += mags[n];
  }
  return s.size();
}

}  // namespace

TEST_CASE("gaussian bump peak and norm") {
  const auto x = gaussian_bump(512, 16.0, 100.0);
  CHECK(x[99] == doctest::Approx(0.024933892).epsilon(1e-8));
  CHECK(std::max_element(x.begin(), x.end()) - x.begin() == 99);
  const double limit = std::pow(4.0 * std::numbers::pi * 256.0, -0.25);
  CHECK(std::abs(norm(gaussian_bump(512, 16.0, 256.0)) - limit) <= 0.02 * limit);
  CHECK_THROWS_AS(gaussian_bump(8, 0.0, 1.0), InvalidArgument);
}

TEST_CASE("blocks is piecewise constant with the reference breakpoints") {
  const std::size_t n = 2048;
  const auto x = donoho_signal(SignalKind::blocks, n);
  for (std::size_t i = 1; i <= n; ++i) {
    REQUIRE(std::abs(x[i - 1] - blocks_oracle(static_cast<double>(i) / n)) <= 1e-12);
  }
}

TEST_CASE("other Donoho signals match their reference formulas") {
  const std::size_t n = 1024;
  const auto h = donoho_signal(SignalKind::heavisine, n);
  const auto d = donoho_signal(SignalKind::doppler, n);
  const auto b = donoho_signal(SignalKind::bumps, n);
  for (std::size_t i = 1; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    const double hv = 4 * std::sin(4 * std::numbers::pi * t) - (t > 0.3 ? 1 : t < 0.3 ? -1 : 0) -
                      (0.72 > t ? 1 : 0.72 < t ? -1 : 0);
    REQUIRE(std::abs(h[i - 1] - hv) <= 1e-12);
    const double dv = std::sqrt(t * (1 - t)) * std::sin(2.1 * std::numbers::pi / (t + 0.05));
    REQUIRE(std::abs(d[i - 1] - dv) <= 1e-12);
    REQUIRE(std::abs(b[i - 1] - bumps_oracle(t)) <= 1e-12);
  }
}

TEST_CASE("shepp-logan phantom") {
  const std::size_t n = 64;
  const auto img = shepp_logan(n);
  REQUIRE(img.size() == n * n);
  CHECK(img[0] == 0.0);
  CHECK(img[n - 1] == 0.0);
  CHECK(img[n * (n - 1)] == 0.0);
  const double centre = img[n / 2 + n * (n / 2)];
  CHECK(centre > 0.0);
  CHECK(*std::max_element(img.begin(), img.end()) == doctest::Approx(2.0));
  CHECK(generate({SignalKind::shepp_logan, 16, 0}, 6) == img);
  CHECK(is_image(SignalKind::shepp_logan));
  CHECK_FALSE(is_image(SignalKind::blocks));
}

TEST_CASE("noise level examples") {
  CHECK(noise_sigma(20.0, 1.0, 4) == doctest::Approx(0.05).epsilon(1e-15));
  const std::vector<double> x{1.0, 0.0, 0.0, 0.0};
  const Noise n = make_noise({20.0, 1, 0}, x, 4);
  CHECK(n.sigma == doctest::Approx(0.05).epsilon(1e-15));
  const Noise quiet = make_noise({std::numeric_limits<double>::infinity(), 1, 0}, x, 4);
  CHECK(quiet.sigma == 0.0);
  CHECK(quiet.values == std::vector<double>(4, 0.0));
  const Noise ref = make_noise({20.0, 1, 16}, x, 4);
  CHECK(ref.sigma == doctest::Approx(0.025).epsilon(1e-15));
}

TEST_CASE("noise is deterministic and has the requested statistics") {
  std::vector<double> x(1000, 0.0);
  x[0] = 1.0;
  const Noise a = make_noise({10.0, 42, 0}, x, 1000000);
  const Noise b = make_noise({10.0, 42, 0}, x, 1000000);
  CHECK(a.values == b.values);
  const double emp = norm(a.values) / std::sqrt(1e6);
  CHECK(std::abs(emp - a.sigma) <= 0.01 * a.sigma);

  std::vector<double> y(100000, 1.0);
  const Noise c = make_noise({15.0, 7, 0}, y, y.size());
  const double snr = 20 * std::log10(norm(y) / c.norm);
  CHECK(std::abs(snr - 15.0) <= 0.1);
}

TEST_CASE("weighted noise norm") {
  const std::vector<double> x{3.0, 4.0};
  const std::vector<double> w{2.0, 0.5};
  const Noise n = make_noise({0.0, 3, 0}, x, 2, w);
  const double expect = std::sqrt((4 * n.values[0] * n.values[0] + 0.25 * n.values[1] * n.values[1]) / 2);
  CHECK(n.weighted_norm == doctest::Approx(expect).epsilon(1e-14));
  CHECK(n.norm == doctest::Approx(norm(n.values)).epsilon(1e-14));
}

TEST_CASE("effective sparsity examples") {
  const LevelPartition p = build_levels(PartitionKind::dyadic1d, 2);
  const std::vector<double> s{3, 0, 1, 0};
  const EffectiveSparsity e = effective_sparsity(s, 0.995, p);
  CHECK(e.K == 2);
  CHECK(e.support == std::vector<Index>{1, 3});
  CHECK(e.k == std::vector<std::size_t>{1, 0, 1});
  CHECK(sigma_k(s, 1) == 1.0);
  const std::vector<double> zero(4, 0.0);
  CHECK_THROWS_AS(effective_sparsity(zero, 0.9, p), DegenerateError);
  CHECK_THROWS_AS(effective_sparsity(s, 0.0, p), InvalidArgument);
}

TEST_CASE("effective sparsity properties on random vectors") {
  std::mt19937_64 gen(12);
  std::normal_distribution<double> dist;
  for (int trial = 0; trial < 200; ++trial) {
    const int r = 3 + trial % 4;
    const SystemKind sys{trial % 2 ? SystemTag::had2_idhw : SystemTag::had_dhw_1d, r};
    const LevelPartition p = sys.partition();
    std::vector<double> s(sys.dim());
    for (double& v : s) v = dist(gen) * std::exp(-0.1 * static_cast<double>(&v - s.data()));
    const double rho = trial % 3 == 0 ? 1.0 : 0.9 + 0.099 * (trial % 7) / 7.0;
    const EffectiveSparsity e = effective_sparsity(s, rho, p);
    CAPTURE(trial);
    REQUIRE(e.K == sparsity_oracle(s, rho));
    REQUIRE(std::accumulate(e.k.begin(), e.k.end(), std::size_t{0}) == e.K);
    const double kept = norm(hard_threshold(s, e.K));
    REQUIRE(kept >= rho * norm(s) * (1 - 1e-15));
    if (e.K >= 1 && rho < 1.0) REQUIRE(norm(hard_threshold(s, e.K - 1)) < rho * norm(s));
  }
  std::vector<double> sparse(64, 0.0);
  for (int j : {3, 17, 40, 41, 63}) sparse[static_cast<std::size_t>(j)] = j % 2 ? 1.5 : -0.5;
  CHECK(effective_sparsity(sparse, 1.0, build_levels(PartitionKind::dyadic1d, 6)).K == 5);
}

TEST_CASE("hard thresholding") {
  const std::vector<double> s{1, -3, 3, 0.5, -1};
  CHECK(largest_entries(s, 3) == std::vector<std::size_t>{1, 2, 0});
  std::vector<double> prev = hard_threshold(s, 0);
  for (std::size_t k = 1; k <= s.size(); ++k) {
    const auto h = hard_threshold(s, k);
    CHECK(hard_threshold(h, k) == h);
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (prev[i] != 0.0) CHECK(h[i] == prev[i]);
    }
    CHECK(norm(h) >= norm(prev));
    prev = h;
  }
}

TEST_CASE("recovery quality metrics") {
  const std::vector<double> x{3, 4};
  const std::vector<double> xh{3, 3.5};
  CHECK(recovery_ratio(x, xh) == doctest::Approx(10.0));
  CHECK(ratio_db(10.0) == doctest::Approx(20.0));
  CHECK(std::isinf(recovery_ratio(x, x)));
  CHECK(ratio_db(recovery_ratio(x, x)) == kSreCapDb);

  const std::vector<std::vector<double>> truths{x};
  const std::vector<std::vector<double>> est{xh};
  const SreSummary one = sre(truths, est);
  CHECK(one.sre_db == doctest::Approx(20.0));
  CHECK_FALSE(one.exact);

  const SreSummary exact = sre(truths, truths);
  CHECK(exact.sre_db == kSreCapDb);
  CHECK(exact.exact);

  const std::vector<double> ratios{10.0, 100.0};
  const SreSummary two = summarize_ratios(ratios);
  CHECK(two.sre_db == doctest::Approx(20 * std::log10(55.0)));
  CHECK(two.trial_db.size() == 2);
  CHECK(two.trial_db[1] == doctest::Approx(40.0));

  const std::vector<std::vector<double>> bad{{1.0}};
  CHECK_THROWS_AS(sre(truths, bad), ShapeError);
}

TEST_CASE("signal names") {
  for (SignalKind k : {SignalKind::gaussian_bump, SignalKind::blocks, SignalKind::bumps,
                       SignalKind::heavisine, SignalKind::doppler, SignalKind::shepp_logan}) {
    CHECK(signal_kind_from_string(to_string(k)) == k);
  }
  CHECK_THROWS_AS(signal_kind_from_string("lena"), InvalidArgument);
}
