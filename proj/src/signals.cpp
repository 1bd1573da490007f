#include "hhcs/signals.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "hhcs/error.hpp"
#include "hhcs/rng.hpp"

namespace hhcs {

namespace {

// WaveLab MakeSignal tables.
constexpr std::array<double, 11> kJumpPos = {0.1,  0.13, 0.15, 0.23, 0.25, 0.40,
                                             0.44, 0.65, 0.76, 0.78, 0.81};
constexpr std::array<double, 11> kBlocksHeight = {4, -5, 3, -4, 5, -4.2, 2.1, 4.3, -3.1, 2.1, -4.2};
constexpr std::array<double, 11> kBumpsHeight = {4, 5, 3, 4, 5, 4.2, 2.1, 4.3, 3.1, 5.1, 4.2};
constexpr std::array<double, 11> kBumpsWidth = {0.005, 0.005, 0.006, 0.01, 0.01, 0.03,
                                                0.01,  0.01,  0.005, 0.008, 0.005};

struct Ellipse {
  double x0, y0, a, b, phi_deg, intensity;
};

constexpr std::array<Ellipse, 10> kSheppLogan = {{
    {0.0, 0.0, 0.69, 0.92, 0.0, 2.0},
    {0.0, -0.0184, 0.6624, 0.874, 0.0, -0.98},
    {0.22, 0.0, 0.11, 0.31, -18.0, -0.02},
    {-0.22, 0.0, 0.16, 0.41, 18.0, -0.02},
    {0.0, 0.35, 0.21, 0.25, 0.0, 0.01},
    {0.0, 0.1, 0.046, 0.046, 0.0, 0.01},
    {0.0, -0.1, 0.046, 0.046, 0.0, 0.01},
    {-0.08, -0.605, 0.046, 0.023, 0.0, 0.01},
    {0.0, -0.606, 0.023, 0.023, 0.0, 0.01},
    {0.06, -0.605, 0.023, 0.046, 0.0, 0.01},
}};

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

double norm2(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

void require_size(int r) {
  if (r < 0 || r > 30) throw ShapeError("unsupported scale r = " + std::to_string(r));
}

}  // namespace

std::string_view to_string(SignalKind kind) {
  switch (kind) {
    case SignalKind::gaussian_bump: return "gaussian_bump";
    case SignalKind::blocks: return "blocks";
    case SignalKind::bumps: return "bumps";
    case SignalKind::heavisine: return "heavisine";
    case SignalKind::doppler: return "doppler";
    case SignalKind::shepp_logan: return "shepp_logan";
  }
  return "?";
}

SignalKind signal_kind_from_string(std::string_view name) {
  for (SignalKind k : {SignalKind::gaussian_bump, SignalKind::blocks, SignalKind::bumps,
                       SignalKind::heavisine, SignalKind::doppler, SignalKind::shepp_logan}) {
    if (name == to_string(k)) return k;
  }
  throw InvalidArgument("unknown signal '" + std::string(name) + "'");
}

bool is_image(SignalKind kind) { return kind == SignalKind::shepp_logan; }

std::vector<double> gaussian_bump(std::size_t n, double sigma, double center) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidArgument("gaussian width must be > 0");
  if (!std::isfinite(center)) throw InvalidArgument("gaussian centre must be finite");
  std::vector<double> x(n);
  const double scale = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
  for (std::size_t i = 1; i <= n; ++i) {
    const double d = static_cast<double>(i) - center;
    x[i - 1] = scale * std::exp(-d * d / (2.0 * sigma * sigma));
  }
  return x;
}

std::vector<double> donoho_signal(SignalKind kind, std::size_t n) {
  std::vector<double> x(n, 0.0);
  for (std::size_t i = 1; i <= n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n);
    double v = 0.0;
    switch (kind) {
      case SignalKind::blocks:
        for (std::size_t j = 0; j < kJumpPos.size(); ++j) {
          v += kBlocksHeight[j] * (1.0 + sign(t - kJumpPos[j])) / 2.0;
        }
        break;
      case SignalKind::bumps:
        for (std::size_t j = 0; j < kJumpPos.size(); ++j) {
          v += kBumpsHeight[j] / std::pow(1.0 + std::abs((t - kJumpPos[j]) / kBumpsWidth[j]), 4);
        }
        break;
      case SignalKind::heavisine:
        v = 4.0 * std::sin(4.0 * std::numbers::pi * t) - sign(t - 0.3) - sign(0.72 - t);
        break;
      case SignalKind::doppler:
        v = std::sqrt(t * (1.0 - t)) * std::sin(2.0 * std::numbers::pi * 1.05 / (t + 0.05));
        break;
      default:
        throw InvalidArgument("not a 1-D test function: " + std::string(to_string(kind)));
    }
    x[i - 1] = v;
  }
  return x;
}

std::vector<double> shepp_logan(std::size_t n) {
  std::vector<double> img(n * n, 0.0);
  const double h = 2.0 / static_cast<double>(n);
  for (const Ellipse& e : kSheppLogan) {
    const double phi = e.phi_deg * std::numbers::pi / 180.0;
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    for (std::size_t j = 0; j < n; ++j) {
      const double x = -1.0 + (static_cast<double>(j) + 0.5) * h;
      for (std::size_t i = 0; i < n; ++i) {
        const double y = 1.0 - (static_cast<double>(i) + 0.5) * h;
        const double xr = (x - e.x0) * c + (y - e.y0) * s;
        const double yr = -(x - e.x0) * s + (y - e.y0) * c;
        if ((xr * xr) / (e.a * e.a) + (yr * yr) / (e.b * e.b) <= 1.0) {
          img[i + n * j] += e.intensity;
        }
      }
    }
  }
  return img;
}

std::vector<double> generate(const SignalSpec& spec, int r) {
  require_size(r);
  const std::size_t n = std::size_t{1} << r;
  switch (spec.kind) {
    case SignalKind::gaussian_bump: return gaussian_bump(n, spec.sigma, spec.center);
    case SignalKind::shepp_logan: return shepp_logan(n);
    default: return donoho_signal(spec.kind, n);
  }
}

double noise_sigma(double snr_db, double signal_norm, std::size_t reference_length) {
  if (std::isnan(snr_db)) throw InvalidArgument("snr must not be NaN");
  if (snr_db == std::numeric_limits<double>::infinity() || reference_length == 0) return 0.0;
  return signal_norm / (std::sqrt(static_cast<double>(reference_length)) * std::pow(10.0, snr_db / 20.0));
}

Noise make_noise(const NoiseSpec& spec, std::span<const double> x, std::size_t length,
                 std::span<const double> weights) {
  if (!weights.empty() && weights.size() != length) {
    throw ShapeError("noise weights have " + std::to_string(weights.size()) + " entries, expected " +
                     std::to_string(length));
  }
  Noise out;
  const std::size_t ref = spec.reference_length == 0 ? length : spec.reference_length;
  out.sigma = noise_sigma(spec.snr_db, norm2(x), ref);
  out.values.assign(length, 0.0);
  if (out.sigma > 0.0) {
    Rng rng = Rng::stream(spec.seed, {0x6e6f697365ULL});
    for (double& v : out.values) v = rng.normal(out.sigma);
  }
  out.norm = norm2(out.values);
  if (weights.empty()) {
    out.weighted_norm = out.norm;
  } else {
    double acc = 0.0;
    for (std::size_t j = 0; j < length; ++j) {
      const double e = weights[j] * out.values[j];
      acc += e * e;
    }
    out.weighted_norm = length == 0 ? 0.0 : std::sqrt(acc / static_cast<double>(length));
  }
  return out;
}

std::vector<std::size_t> largest_entries(std::span<const double> s, std::size_t n) {
  std::vector<std::size_t> order(s.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  n = std::min(n, s.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      const double fa = std::abs(s[a]);
                      const double fb = std::abs(s[b]);
                      return fa > fb || (fa == fb && a < b);
                    });
  order.resize(n);
  return order;
}

std::vector<double> hard_threshold(std::span<const double> s, std::size_t n) {
  std::vector<double> out(s.size(), 0.0);
  for (std::size_t i : largest_entries(s, n)) out[i] = s[i];
  return out;
}

double sigma_k(std::span<const double> u, std::size_t k) {
  std::vector<bool> kept(u.size(), false);
  for (std::size_t i : largest_entries(u, k)) kept[i] = true;
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!kept[i]) acc += std::abs(u[i]);
  }
  return acc;
}

EffectiveSparsity effective_sparsity(std::span<const double> s, double rho,
                                     const LevelPartition& partition) {
  if (!(rho > 0.0 && rho <= 1.0)) throw InvalidArgument("rho must lie in (0, 1]");
  if (partition.total() != s.size()) {
    throw ShapeError("partition covers " + std::to_string(partition.total()) +
                     " indices, vector has " + std::to_string(s.size()));
  }
  const std::vector<std::size_t> order = largest_entries(s, s.size());
  // Total energy summed in the same order as the running prefix, so that a
  // prefix holding every nonzero compares equal to it.
  double total = 0.0;
  for (std::size_t i : order) total += s[i] * s[i];
  if (!(total > 0.0)) throw DegenerateError("effective sparsity of the zero vector");

  EffectiveSparsity out;
  out.rho = rho;
  double running = 0.0;
  std::size_t count = 0;
  while (count < order.size()) {
    running += s[order[count]] * s[order[count]];
    ++count;
    if (std::sqrt(running) >= rho * std::sqrt(total)) break;
  }
  out.K = count;
  std::vector<bool> kept(s.size(), false);
  for (std::size_t j = 0; j < count; ++j) kept[order[j]] = true;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (kept[i]) out.support.push_back(i + 1);
  }
  out.k.assign(partition.size(), 0);
  for (std::size_t t = 0; t < partition.size(); ++t) {
    for (Index l : partition.levels[t]) out.k[t] += kept[l - 1] ? 1 : 0;
  }
  return out;
}

double recovery_ratio(std::span<const double> x, std::span<const double> x_hat) {
  if (x.size() != x_hat.size()) {
    throw ShapeError("truth has " + std::to_string(x.size()) + " entries, estimate " +
                     std::to_string(x_hat.size()));
  }
  double err = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - x_hat[i];
    err += d * d;
  }
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  return norm2(x) / std::sqrt(err);
}

double ratio_db(double ratio) {
  if (!(ratio < std::numeric_limits<double>::infinity())) return kSreCapDb;
  return std::clamp(20.0 * std::log10(ratio), -kSreCapDb, kSreCapDb);
}

SreSummary summarize_ratios(std::span<const double> ratios) {
  if (ratios.empty()) throw InvalidArgument("no trials to summarize");
  SreSummary out;
  double sum = 0.0;
  for (double r : ratios) {
    const double capped = std::min(r, kRatioCap);
    out.trial_db.push_back(ratio_db(capped));
    sum += capped;
  }
  const double mean = sum / static_cast<double>(ratios.size());
  out.exact = mean == kRatioCap;
  out.sre_db = ratio_db(mean);
  return out;
}

SreSummary sre(std::span<const std::vector<double>> truths,
               std::span<const std::vector<double>> estimates) {
  if (truths.size() != estimates.size()) {
    throw ShapeError("got " + std::to_string(truths.size()) + " truths and " +
                     std::to_string(estimates.size()) + " estimates");
  }
  std::vector<double> ratios;
  ratios.reserve(truths.size());
  for (std::size_t e = 0; e < truths.size(); ++e) {
    ratios.push_back(recovery_ratio(truths[e], estimates[e]));
  }
  return summarize_ratios(ratios);
}

}  // namespace hhcs
