#include "hhcs/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include "hhcs/error.hpp"

namespace hhcs {

namespace {

double norm2(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// Constraint after merging repeated rows:
//   sum_i c_i (u_i - ybar_i)^2 <= radius^2,  u = (Phi^T x) restricted to rows.
struct MergedData {
  std::vector<Index> rows;
  std::vector<double> c;
  std::vector<double> ybar;
  double radius = 0.0;
};

MergedData merge_rows(const RecoveryProblem& problem) {
  const std::size_t m = problem.sample.size();
  const double scale = problem.fidelity == Fidelity::weighted ? 1.0 / static_cast<double>(m) : 1.0;
  std::map<Index, std::pair<double, double>> acc;  // row -> (sum c, sum c y)
  std::vector<double> cj(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double d = problem.fidelity == Fidelity::weighted ? problem.sample.weights[j] : 1.0;
    cj[j] = d * d * scale;
    auto& [csum, cy] = acc[problem.sample.omega[j]];
    csum += cj[j];
    cy += cj[j] * problem.y[j];
  }
  MergedData out;
  std::map<Index, double> mean;
  for (const auto& [row, sums] : acc) {
    out.rows.push_back(row);
    out.c.push_back(sums.first);
    out.ybar.push_back(sums.second / sums.first);
    mean[row] = out.ybar.back();
  }
  // Spread of repeated measurements around their weighted mean is out of
  // reach of any candidate and is charged to the budget up front.
  double spread = 0.0;
  double energy = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double e = problem.y[j] - mean[problem.sample.omega[j]];
    spread += cj[j] * e * e;
    energy += cj[j] * problem.y[j] * problem.y[j];
  }
  const double eps2 = problem.epsilon * problem.epsilon;
  double left = eps2 - spread;
  if (left < 0.0) {
    if (-left > 1e-12 * std::max(eps2, energy)) {
      throw InfeasibleError("epsilon " + std::to_string(problem.epsilon) +
                            " is below the spread of repeated measurements (" +
                            std::to_string(std::sqrt(spread)) + ")");
    }
    left = 0.0;
  }
  out.radius = std::sqrt(left);
  return out;
}

// Euclidean projection of u onto {v : sum c_i (v_i - ybar_i)^2 <= radius^2}.
void project_ellipsoid(std::span<double> u, const MergedData& data) {
  const std::size_t n = u.size();
  double g0 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = u[i] - data.ybar[i];
    g0 += data.c[i] * e * e;
  }
  const double r2 = data.radius * data.radius;
  if (g0 <= r2) return;
  if (data.radius == 0.0) {
    std::copy(data.ybar.begin(), data.ybar.end(), u.begin());
    return;
  }
  // v_i = ybar_i + e_i / (1 + lambda c_i); Newton on 1/sqrt(g(lambda)) = 1/radius,
  // which is close to linear in lambda and increasing.
  auto eval = [&](double lambda, double& g, double& dg) {
    g = 0.0;
    dg = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = u[i] - data.ybar[i];
      const double f = 1.0 / (1.0 + lambda * data.c[i]);
      const double ce2 = data.c[i] * e * e;
      g += ce2 * f * f;
      dg -= 2.0 * data.c[i] * ce2 * f * f * f;
    }
  };
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  double lambda = 0.0;
  const double target = 1.0 / data.radius;
  for (int it = 0; it < 100; ++it) {
    double g = 0.0;
    double dg = 0.0;
    eval(lambda, g, dg);
    const double phi = 1.0 / std::sqrt(g) - target;
    if (std::abs(phi) <= 1e-15 * target) break;
    if (phi < 0.0) {
      lo = lambda;
    } else {
      hi = lambda;
    }
    const double dphi = -0.5 * dg / (g * std::sqrt(g));
    double next = lambda - phi / dphi;
    if (!(next > lo && next < hi)) next = std::isfinite(hi) ? 0.5 * (lo + hi) : 2.0 * lo + 1.0;
    if (next == lambda) break;
    lambda = next;
  }
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = data.ybar[i] + (u[i] - data.ybar[i]) / (1.0 + lambda * data.c[i]);
  }
}

// Projection onto {s : Psi s has sampled Hadamard rows inside the ellipsoid}.
// The merged rows of Phi^T Psi are orthonormal, so the correction lives in
// their span.
class BallProjector {
 public:
  BallProjector(const SystemKind& system, MergedData data)
      : system_(system), data_(std::move(data)), u_(data_.rows.size()),
        full_(system.dim(), 0.0) {}

  void operator()(std::span<const double> s, std::span<double> out) {
    std::copy(s.begin(), s.end(), out.begin());
    if (data_.rows.empty()) return;
    const std::vector<double> z = sense(system_, synthesize(system_, s));
    for (std::size_t i = 0; i < u_.size(); ++i) u_[i] = z[data_.rows[i] - 1];
    std::vector<double> v(u_);
    project_ellipsoid(v, data_);
    std::fill(full_.begin(), full_.end(), 0.0);
    for (std::size_t i = 0; i < u_.size(); ++i) full_[data_.rows[i] - 1] = v[i] - u_[i];
    const std::vector<double> ds = sparsify(system_, sense_adjoint(system_, full_));
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += ds[k];
  }

  // Lower bound on min ||s||_1 over the feasible set from a candidate
  // subgradient g (||g||_inf <= 1): keep its component in the row space,
  // rescale into the unit cube, and minimise the linear form over the ball.
  double dual_bound(std::span<const double> g) {
    if (data_.rows.empty()) return 0.0;
    const std::vector<double> z = sense(system_, synthesize(system_, g));
    std::fill(full_.begin(), full_.end(), 0.0);
    for (std::size_t i = 0; i < u_.size(); ++i) full_[data_.rows[i] - 1] = z[data_.rows[i] - 1];
    const std::vector<double> back = sparsify(system_, sense_adjoint(system_, full_));
    double peak = 0.0;
    for (double v : back) peak = std::max(peak, std::abs(v));
    const double scale = std::max(1.0, peak);
    double linear = 0.0;
    double spread = 0.0;
    for (std::size_t i = 0; i < u_.size(); ++i) {
      const double lam = z[data_.rows[i] - 1] / scale;
      linear += lam * data_.ybar[i];
      spread += lam * lam / data_.c[i];
    }
    return linear - data_.radius * std::sqrt(spread);
  }

  const MergedData& data() const { return data_; }

 private:
  SystemKind system_;
  MergedData data_;
  std::vector<double> u_;
  std::vector<double> full_;
};

void soft_threshold(std::span<const double> in, double tau, std::span<double> out) {
  for (std::size_t k = 0; k < in.size(); ++k) {
    const double v = in[k];
    out[k] = v > tau ? v - tau : (v < -tau ? v + tau : 0.0);
  }
}

void validate(const RecoveryProblem& problem) {
  if (problem.sample.size() == 0) throw InfeasibleError("no measurements to recover from");
  if (problem.y.size() != problem.sample.size()) {
    throw ShapeError("measurement vector has " + std::to_string(problem.y.size()) +
                     " entries, sample " + std::to_string(problem.sample.size()));
  }
  if (problem.sample.weights.size() != problem.sample.size()) {
    throw ShapeError("sample weights and indices differ in length");
  }
  if (!all_finite(problem.y) || !all_finite(problem.sample.weights) ||
      !std::isfinite(problem.epsilon)) {
    throw InvalidArgument("non-finite input to recovery");
  }
  if (problem.epsilon < 0.0) throw InvalidArgument("epsilon must be non-negative");
  for (Index i : problem.sample.omega) {
    if (i < 1 || i > problem.system.dim()) throw RangeError("sample index out of range");
  }
  for (double w : problem.sample.weights) {
    if (!(w > 0.0)) throw InvalidArgument("sample weights must be positive");
  }
}

}  // namespace

std::string_view to_string(Fidelity fidelity) {
  return fidelity == Fidelity::weighted ? "weighted" : "unweighted";
}

Fidelity fidelity_from_string(std::string_view name) {
  if (name == "weighted") return Fidelity::weighted;
  if (name == "unweighted") return Fidelity::unweighted;
  throw InvalidArgument("unknown fidelity '" + std::string(name) + "'");
}

Fidelity default_fidelity(Strategy strategy) {
  return strategy == Strategy::mds ? Fidelity::unweighted : Fidelity::weighted;
}

double constraint_residual(const RecoveryProblem& problem, std::span<const double> x) {
  const std::vector<double> ax = measure(problem.system, problem.sample, x);
  double acc = 0.0;
  for (std::size_t j = 0; j < ax.size(); ++j) {
    const double d = problem.fidelity == Fidelity::weighted ? problem.sample.weights[j] : 1.0;
    const double e = d * (problem.y[j] - ax[j]);
    acc += e * e;
  }
  if (problem.fidelity == Fidelity::weighted && !ax.empty()) acc /= static_cast<double>(ax.size());
  return std::sqrt(acc);
}

RecoveryReport solve_bpdn(const RecoveryProblem& problem) {
  validate(problem);
  const SystemKind& system = problem.system;
  const std::size_t n = system.dim();
  const SolverOptions& opt = problem.options;

  RecoveryReport report;
  BallProjector project(system, merge_rows(problem));

  std::vector<double> z(n, 0.0), p(n), q(n), reflect(n), g(n);
  // Least-norm consistent point; its scale sets the threshold step.
  project(z, p);
  double max_abs = 0.0;
  for (double v : p) max_abs = std::max(max_abs, std::abs(v));
  const double gamma = max_abs > 0.0 ? 0.1 * max_abs : 1.0;

  auto l1 = [](std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc += std::abs(x);
    return acc;
  };

  constexpr int kCheckEvery = 10;
  bool converged = false;
  int it = 0;
  while (it < opt.max_iterations) {
    if (it > 0) project(z, p);
    for (std::size_t k = 0; k < n; ++k) reflect[k] = 2.0 * p[k] - z[k];
    soft_threshold(reflect, gamma, q);
    double step = 0.0;
    double scale = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double d = q[k] - p[k];
      g[k] = (reflect[k] - q[k]) / gamma;
      z[k] += d;
      step += d * d;
      scale += p[k] * p[k];
    }
    ++it;
    const bool small_step = std::sqrt(step) <= opt.tol_gap * std::max(std::sqrt(scale), 1e-300);
    if (small_step || it % kCheckEvery == 0) {
      const double objective = l1(p);
      const double bound = project.dual_bound(g);
      if (objective - bound <= opt.tol_gap * std::max(objective, 1e-300)) {
        converged = true;
        break;
      }
    }
  }
  report.coefficients = p;
  report.x_hat = synthesize(system, p);
  report.iterations = it;
  report.objective = l1(p);
  report.residual = constraint_residual(problem, report.x_hat);
  const double feas_tol = opt.tol_feas * std::max(1.0, norm2(problem.y));
  report.converged = converged && report.residual <= problem.epsilon + feas_tol;
  return report;
}

std::vector<double> me_reconstruct(const SystemKind& system, const SampleSet& sample,
                                   std::span<const double> y) {
  if (y.size() != sample.size()) {
    throw ShapeError("measurement vector has " + std::to_string(y.size()) + " entries, sample " +
                     std::to_string(sample.size()));
  }
  const std::size_t n = system.dim();
  std::vector<double> sum(n, 0.0), count(n, 0.0);
  for (std::size_t j = 0; j < sample.size(); ++j) {
    const Index i = sample.omega[j];
    if (i < 1 || i > n) throw RangeError("sample index out of range");
    sum[i - 1] += y[j];
    count[i - 1] += 1.0;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (count[i] > 0.0) sum[i] /= count[i];
  }
  return sense_adjoint(system, sum);
}

}  // namespace hhcs
