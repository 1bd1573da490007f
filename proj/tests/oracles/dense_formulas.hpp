#pragma once

// Reference matrices written from closed entrywise formulas, with no shared
// code with the library's recursive builders.

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

inline int bit(std::size_t v, int k) { return static_cast<int>((v >> k) & 1U); }

// Paley-ordered Hadamard: H(i, j) = 2^(-r/2) (-1)^(sum_k i_k j_(r-1-k)),
// 0-based i, j.
inline Eigen::MatrixXd hadamard(int r) {
  const std::size_t n = std::size_t{1} << r;
  Eigen::MatrixXd h(n, n);
  const double scale = std::pow(2.0, -0.5 * r);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      int parity = 0;
      for (int k = 0; k < r; ++k) parity ^= bit(i, k) & bit(j, r - 1 - k);
      h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = parity ? -scale : scale;
    }
  }
  return h;
}

// Column of W^(a)_r for wavelet level j >= 1 and shift p (0-based,
// p < 2^(j-1)): support of length L = 2^(r-j+1) starting at p L, value
// L^(-1/2), with the second half negated when a = 1. Level 0 is the constant.
inline Eigen::VectorXd haar_column(int a, int r, int j, std::size_t p) {
  const std::size_t n = std::size_t{1} << r;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  if (j == 0) {
    v.setConstant(std::pow(2.0, -0.5 * r));
    return v;
  }
  const std::size_t len = std::size_t{1} << (r - j + 1);
  const double amp = 1.0 / std::sqrt(static_cast<double>(len));
  for (std::size_t q = 0; q < len; ++q) {
    const bool second = q >= len / 2;
    v(static_cast<Eigen::Index>(p * len + q)) = (a == 1 && second) ? -amp : amp;
  }
  return v;
}

// Full W^(a)_r with column 2^(j-1) + p (0-based) holding haar_column(a, r, j, p).
inline Eigen::MatrixXd haar(int a, int r) {
  const std::size_t n = std::size_t{1} << r;
  Eigen::MatrixXd w(n, n);
  w.col(0) = haar_column(a, r, 0, 0);
  for (int j = 1; j <= r; ++j) {
    const std::size_t first = std::size_t{1} << (j - 1);
    for (std::size_t p = 0; p < first; ++p) {
      w.col(static_cast<Eigen::Index>(first + p)) = haar_column(a, r, j, p);
    }
  }
  return w;
}

// Columns of a (x) b ordered with the b column fastest.
inline Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// Isotropic 2-D Haar basis assembled subband by subband: for level l the
// block (W^(a) restricted to T_l) (x) (W^(b) restricted to T_l) fills the
// 1-based flat positions {l1 + n (l2 - 1)} of T^(ab)_l in ascending order,
// where T^(01) = T_l x T_<l, T^(11) = T_l x T_l, T^(10) = T_<l x T_l.
inline Eigen::MatrixXd isotropic_haar(int r) {
  const std::size_t n = std::size_t{1} << r;
  Eigen::MatrixXd psi = Eigen::MatrixXd::Zero(n * n, n * n);
  const Eigen::MatrixXd w0 = haar(0, r);
  const Eigen::MatrixXd w1 = haar(1, r);
  psi.col(0) = kron(w0.col(0), w0.col(0));
  for (int l = 1; l <= r; ++l) {
    const std::size_t lo = std::size_t{1} << (l - 1);  // T_l = {lo+1, ..., 2 lo}, T_<l = {1..lo}
    const Eigen::MatrixXd c0 = w0.middleCols(static_cast<Eigen::Index>(lo), static_cast<Eigen::Index>(lo));
    const Eigen::MatrixXd c1 = w1.middleCols(static_cast<Eigen::Index>(lo), static_cast<Eigen::Index>(lo));
    struct Band {
      const Eigen::MatrixXd* a;
      const Eigen::MatrixXd* b;
      std::size_t row_off;  // l1 range start (0-based)
      std::size_t col_off;  // l2 range start (0-based)
    };
    const Band bands[3] = {{&c0, &c1, lo, 0}, {&c1, &c1, lo, lo}, {&c1, &c0, 0, lo}};
    for (const Band& band : bands) {
      const Eigen::MatrixXd block = kron(*band.a, *band.b);
      std::vector<std::size_t> positions;
      for (std::size_t l2 = band.col_off; l2 < band.col_off + lo; ++l2) {
        for (std::size_t l1 = band.row_off; l1 < band.row_off + lo; ++l1) positions.push_back(l1 + n * l2);
      }
      for (std::size_t k = 0; k < positions.size(); ++k) {
        psi.col(static_cast<Eigen::Index>(positions[k])) = block.col(static_cast<Eigen::Index>(k));
      }
    }
  }
  return psi;
}

}  // namespace oracle
