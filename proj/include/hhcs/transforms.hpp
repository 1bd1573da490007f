#pragma once

// Fast orthonormal transforms for the Paley-ordered Hadamard basis and the
// 1-D, anisotropic 2-D and isotropic 2-D Haar wavelet bases.
//
// 2-D signals are N x N images stored as column-major vectors of length N^2
// (element (i, j), 1-based, at flat index i + N (j - 1)). With this layout the
// Kronecker basis A (x) B acts as vec(X) -> vec(B X A^T).

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace hhcs {

enum class BasisTag { hadamard1d, hadamard2d, dhw, adhw, idhw };

std::string_view to_string(BasisTag tag);
BasisTag basis_tag_from_string(std::string_view name);

struct BasisKind {
  BasisTag tag = BasisTag::hadamard1d;
  int r = 0;

  bool two_d() const;
  std::size_t side() const { return std::size_t{1} << r; }
  // Length of the (vectorized) signal.
  std::size_t dim() const;
};

enum class Direction { analysis, synthesis };

// z = H^T x (1-D) or vec(H^T X H) (2-D). H is symmetric and orthonormal, so
// the transform is its own inverse.
std::vector<double> fwht(std::span<const double> x);
std::vector<double> fwht2d(std::span<const double> x);

// analysis: s = Psi^T x, synthesis: x = Psi s. The 2-D kinds take column-major
// square images.
std::vector<double> haar_transform(BasisTag basis, Direction direction,
                                   std::span<const double> x);

// Dispatches to fwht / fwht2d / haar_transform; for the Hadamard kinds both
// directions coincide.
std::vector<double> apply_basis(BasisKind basis, Direction direction,
                                std::span<const double> x);

// In-place 1-D kernels on caller-owned buffers; `scratch` must hold at least
// x.size() doubles.
namespace kernels {
void paley_inplace(std::span<double> x, std::span<double> scratch);
void dhw_analysis_inplace(std::span<double> x, std::span<double> scratch);
void dhw_synthesis_inplace(std::span<double> x, std::span<double> scratch);
}  // namespace kernels

// Dense matrices built directly from the defining Kronecker recursions.
// Capped at r <= 10 (1-D) and r <= 5 (2-D).
inline constexpr int kDenseMaxR1d = 10;
inline constexpr int kDenseMaxR2d = 5;

Eigen::MatrixXd dense_basis(BasisKind basis);
Eigen::MatrixXd hadamard_matrix(int r);
// W^(1)_r (Haar wavelets) and W^(0)_r (window functions).
Eigen::MatrixXd haar_matrix(int r);
Eigen::MatrixXd window_matrix(int r);
Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

enum class Subband { none, s00, s01, s11, s10 };
std::string_view to_string(Subband band);

struct CoefficientInfo {
  int level = 0;
  Subband subband = Subband::none;
};

// Level and subband of every coefficient index (entry l-1 for index l).
// 1-D kinds report Subband::none; adhw reports the anisotropic level index and
// Subband::none.
std::vector<CoefficientInfo> coefficient_layout(BasisKind basis);

}  // namespace hhcs
