#pragma once

// l1 recovery (basis pursuit denoise) and minimal-energy reconstruction.

#include <span>
#include <string_view>
#include <vector>

#include "hhcs/sampling.hpp"
#include "hhcs/system.hpp"

namespace hhcs {

// weighted:   (1/sqrt(M)) ||D (y - P_Omega Phi^T u)|| <= epsilon   (uds / vds)
// unweighted: ||y - P_Omega Phi^T u|| <= epsilon                   (mds)
enum class Fidelity { weighted, unweighted };
std::string_view to_string(Fidelity fidelity);
Fidelity fidelity_from_string(std::string_view name);
Fidelity default_fidelity(Strategy strategy);

struct SolverOptions {
  double tol_feas = 1e-6;
  double tol_gap = 1e-6;
  int max_iterations = 20000;
};

struct RecoveryProblem {
  SystemKind system;
  SampleSet sample;
  std::vector<double> y;
  double epsilon = 0.0;
  Fidelity fidelity = Fidelity::weighted;
  SolverOptions options;
};

struct RecoveryReport {
  std::vector<double> x_hat;
  std::vector<double> coefficients;  // Psi^T x_hat
  int iterations = 0;
  double residual = 0.0;   // left-hand side of the data constraint at x_hat
  double objective = 0.0;  // ||Psi^T x_hat||_1
  bool converged = false;
};

// Data-constraint value for a candidate signal, in the problem's convention.
double constraint_residual(const RecoveryProblem& problem, std::span<const double> x);

// Minimizes ||Psi^T u||_1 over the data ball. Solved over s = Psi^T u with
// Douglas-Rachford splitting: exact projection onto the ball (duplicated rows
// are merged first, which leaves an orthonormal row set) alternated with
// soft-thresholding.
RecoveryReport solve_bpdn(const RecoveryProblem& problem);

// Right pseudo-inverse of the sampled Hadamard operator after averaging the
// measurements of repeated rows.
std::vector<double> me_reconstruct(const SystemKind& system, const SampleSet& sample,
                                   std::span<const double> y);

}  // namespace hhcs
