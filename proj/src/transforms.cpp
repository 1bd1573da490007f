#include "hhcs/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hhcs/error.hpp"
#include "hhcs/indexing.hpp"

namespace hhcs {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void require_scratch(std::span<double> x, std::span<double> scratch) {
  if (scratch.size() < x.size()) throw ShapeError("scratch buffer too small");
  if (!is_power_of_two(x.size())) {
    throw ShapeError("length " + std::to_string(x.size()) + " is not a power of two");
  }
}

// One analysis step on the prefix of length n: pairs become
// [(a+b)/sqrt2 ..., (a-b)/sqrt2 ...].
inline void split_step(double* x, double* tmp, std::size_t n) {
  const std::size_t half = n / 2;
  for (std::size_t k = 0; k < half; ++k) {
    const double a = x[2 * k];
    const double b = x[2 * k + 1];
    tmp[k] = (a + b) * kInvSqrt2;
    tmp[half + k] = (a - b) * kInvSqrt2;
  }
  std::copy(tmp, tmp + n, x);
}

inline void merge_step(double* x, double* tmp, std::size_t n) {
  const std::size_t half = n / 2;
  for (std::size_t k = 0; k < half; ++k) {
    const double s = x[k];
    const double d = x[half + k];
    tmp[2 * k] = (s + d) * kInvSqrt2;
    tmp[2 * k + 1] = (s - d) * kInvSqrt2;
  }
  std::copy(tmp, tmp + n, x);
}

std::size_t square_side(std::size_t len) {
  const int twice_r = exact_log2(len);
  if (twice_r % 2 != 0) {
    throw ShapeError("length " + std::to_string(len) + " is not a square power-of-two image");
  }
  return std::size_t{1} << (twice_r / 2);
}

// Applies a 1-D in-place kernel to every column and then every row of a
// column-major side x side image.
template <class ColumnOp, class RowOp>
void separable(std::span<double> img, std::size_t side, ColumnOp column_op, RowOp row_op) {
  std::vector<double> row(side), scratch(side);
  for (std::size_t j = 0; j < side; ++j) {
    column_op(std::span<double>(img.data() + j * side, side), std::span<double>(scratch));
  }
  for (std::size_t i = 0; i < side; ++i) {
    for (std::size_t j = 0; j < side; ++j) row[j] = img[i + j * side];
    row_op(std::span<double>(row), std::span<double>(scratch));
    for (std::size_t j = 0; j < side; ++j) img[i + j * side] = row[j];
  }
}

// Isotropic Mallat pyramid: each stage splits the leading n x n block once
// along columns and once along rows.
void idhw_analysis_inplace(std::span<double> img, std::size_t side) {
  std::vector<double> row(side), tmp(side);
  for (std::size_t n = side; n >= 2; n /= 2) {
    for (std::size_t j = 0; j < n; ++j) split_step(img.data() + j * side, tmp.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) row[j] = img[i + j * side];
      split_step(row.data(), tmp.data(), n);
      for (std::size_t j = 0; j < n; ++j) img[i + j * side] = row[j];
    }
  }
}

void idhw_synthesis_inplace(std::span<double> img, std::size_t side) {
  std::vector<double> row(side), tmp(side);
  for (std::size_t n = 2; n <= side; n *= 2) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) row[j] = img[i + j * side];
      merge_step(row.data(), tmp.data(), n);
      for (std::size_t j = 0; j < n; ++j) img[i + j * side] = row[j];
    }
    for (std::size_t j = 0; j < n; ++j) merge_step(img.data() + j * side, tmp.data(), n);
  }
}

}  // namespace

std::string_view to_string(BasisTag tag) {
  switch (tag) {
    case BasisTag::hadamard1d: return "hadamard1d";
    case BasisTag::hadamard2d: return "hadamard2d";
    case BasisTag::dhw: return "dhw";
    case BasisTag::adhw: return "adhw";
    case BasisTag::idhw: return "idhw";
  }
  return "?";
}

BasisTag basis_tag_from_string(std::string_view name) {
  for (BasisTag tag : {BasisTag::hadamard1d, BasisTag::hadamard2d, BasisTag::dhw,
                       BasisTag::adhw, BasisTag::idhw}) {
    if (name == to_string(tag)) return tag;
  }
  throw InvalidArgument("unknown basis '" + std::string(name) + "'");
}

bool BasisKind::two_d() const {
  return tag == BasisTag::hadamard2d || tag == BasisTag::adhw || tag == BasisTag::idhw;
}

std::size_t BasisKind::dim() const { return two_d() ? side() * side() : side(); }

namespace kernels {

// Paley recursion: output = [paley(s); paley(d)] with s, d the normalized
// pairwise sums and differences.
void paley_inplace(std::span<double> x, std::span<double> scratch) {
  require_scratch(x, scratch);
  const std::size_t n_total = x.size();
  for (std::size_t n = n_total; n >= 2; n /= 2) {
    for (std::size_t base = 0; base < n_total; base += n) {
      split_step(x.data() + base, scratch.data(), n);
    }
  }
}

void dhw_analysis_inplace(std::span<double> x, std::span<double> scratch) {
  require_scratch(x, scratch);
  for (std::size_t n = x.size(); n >= 2; n /= 2) split_step(x.data(), scratch.data(), n);
}

void dhw_synthesis_inplace(std::span<double> x, std::span<double> scratch) {
  require_scratch(x, scratch);
  for (std::size_t n = 2; n <= x.size(); n *= 2) merge_step(x.data(), scratch.data(), n);
}

}  // namespace kernels

std::vector<double> fwht(std::span<const double> x) {
  std::vector<double> out(x.begin(), x.end()), scratch(x.size());
  kernels::paley_inplace(out, scratch);
  return out;
}

std::vector<double> fwht2d(std::span<const double> x) {
  const std::size_t side = square_side(x.size());
  std::vector<double> out(x.begin(), x.end());
  separable(out, side, kernels::paley_inplace, kernels::paley_inplace);
  return out;
}

std::vector<double> haar_transform(BasisTag basis, Direction direction,
                                   std::span<const double> x) {
  std::vector<double> out(x.begin(), x.end());
  const bool analysis = direction == Direction::analysis;
  switch (basis) {
    case BasisTag::dhw: {
      std::vector<double> scratch(x.size());
      if (analysis) {
        kernels::dhw_analysis_inplace(out, scratch);
      } else {
        kernels::dhw_synthesis_inplace(out, scratch);
      }
      return out;
    }
    case BasisTag::adhw: {
      const std::size_t side = square_side(x.size());
      if (analysis) {
        separable(out, side, kernels::dhw_analysis_inplace, kernels::dhw_analysis_inplace);
      } else {
        separable(out, side, kernels::dhw_synthesis_inplace, kernels::dhw_synthesis_inplace);
      }
      return out;
    }
    case BasisTag::idhw: {
      const std::size_t side = square_side(x.size());
      if (analysis) {
        idhw_analysis_inplace(out, side);
      } else {
        idhw_synthesis_inplace(out, side);
      }
      return out;
    }
    default:
      throw InvalidArgument("haar_transform expects dhw, adhw or idhw, got " +
                            std::string(to_string(basis)));
  }
}

std::vector<double> apply_basis(BasisKind basis, Direction direction,
                                std::span<const double> x) {
  if (x.size() != basis.dim()) {
    throw ShapeError("signal length " + std::to_string(x.size()) + " does not match " +
                     std::string(to_string(basis.tag)) + " with r = " + std::to_string(basis.r));
  }
  switch (basis.tag) {
    case BasisTag::hadamard1d: return fwht(x);
    case BasisTag::hadamard2d: return fwht2d(x);
    default: return haar_transform(basis.tag, direction, x);
  }
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

namespace {

void check_dense_cap(int r, bool two_d) {
  const int cap = two_d ? kDenseMaxR2d : kDenseMaxR1d;
  if (r < 0) throw InvalidArgument("scale count r must be non-negative");
  if (r > cap) {
    throw SizeError("dense basis capped at r <= " + std::to_string(cap) + ", got r = " +
                    std::to_string(r));
  }
}

// (1/sqrt2) [left (x) [1; 1], right (x) [1; sign]]
Eigen::MatrixXd recursion_step(const Eigen::MatrixXd& left, const Eigen::MatrixXd& right,
                               double sign) {
  const Eigen::Index n = left.rows();
  Eigen::MatrixXd out(2 * n, left.cols() + right.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < left.cols(); ++j) {
      out(2 * i, j) = left(i, j) * kInvSqrt2;
      out(2 * i + 1, j) = left(i, j) * kInvSqrt2;
    }
    for (Eigen::Index j = 0; j < right.cols(); ++j) {
      out(2 * i, left.cols() + j) = right(i, j) * kInvSqrt2;
      out(2 * i + 1, left.cols() + j) = sign * right(i, j) * kInvSqrt2;
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXd hadamard_matrix(int r) {
  check_dense_cap(r, false);
  Eigen::MatrixXd h = Eigen::MatrixXd::Ones(1, 1);
  for (int k = 1; k <= r; ++k) h = recursion_step(h, h, -1.0);
  return h;
}

Eigen::MatrixXd haar_matrix(int r) {
  check_dense_cap(r, false);
  Eigen::MatrixXd w = Eigen::MatrixXd::Ones(1, 1);
  for (int k = 1; k <= r; ++k) {
    w = recursion_step(w, Eigen::MatrixXd::Identity(w.rows(), w.rows()), -1.0);
  }
  return w;
}

Eigen::MatrixXd window_matrix(int r) {
  check_dense_cap(r, false);
  Eigen::MatrixXd w = Eigen::MatrixXd::Ones(1, 1);
  for (int k = 1; k <= r; ++k) {
    w = recursion_step(w, Eigen::MatrixXd::Identity(w.rows(), w.rows()), 1.0);
  }
  return w;
}

namespace {

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& m, const IndexList& cols) {
  Eigen::MatrixXd out(m.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) {
    out.col(static_cast<Eigen::Index>(k)) = m.col(static_cast<Eigen::Index>(cols[k] - 1));
  }
  return out;
}

// Columns of Psi_idhw: the block (W^(a) P_Tl^T) (x) (W^(b) P_Tl^T) sits at the
// flat positions T^(ab)_l, taken in ascending order.
Eigen::MatrixXd dense_idhw(int r) {
  const Index side = Index{1} << r;
  const Eigen::MatrixXd w1 = haar_matrix(r);
  const Eigen::MatrixXd w0 = window_matrix(r);
  const auto n2 = static_cast<Eigen::Index>(side * side);
  Eigen::MatrixXd psi = Eigen::MatrixXd::Zero(n2, n2);

  const IndexList t0 = dyadic_level(0);
  psi.col(0) = kron(select_columns(w1, t0), select_columns(w1, t0));

  auto place = [&](const Eigen::MatrixXd& block, const IndexList& positions) {
    for (std::size_t k = 0; k < positions.size(); ++k) {
      psi.col(static_cast<Eigen::Index>(positions[k] - 1)) =
          block.col(static_cast<Eigen::Index>(k));
    }
  };
  for (int l = 1; l <= r; ++l) {
    const IndexList cur = dyadic_level(l);
    const IndexList lower = dyadic_prefix(l);
    const Eigen::MatrixXd wav = select_columns(w1, cur);
    const Eigen::MatrixXd win = select_columns(w0, cur);
    place(kron(win, wav), flatten_cartesian(cur, lower, side, side));    // (01)
    place(kron(wav, wav), flatten_cartesian(cur, cur, side, side));      // (11)
    place(kron(wav, win), flatten_cartesian(lower, cur, side, side));    // (10)
  }
  return psi;
}

}  // namespace

Eigen::MatrixXd dense_basis(BasisKind basis) {
  check_dense_cap(basis.r, basis.two_d());
  switch (basis.tag) {
    case BasisTag::hadamard1d: return hadamard_matrix(basis.r);
    case BasisTag::hadamard2d: {
      const Eigen::MatrixXd h = hadamard_matrix(basis.r);
      return kron(h, h);
    }
    case BasisTag::dhw: return haar_matrix(basis.r);
    case BasisTag::adhw: {
      const Eigen::MatrixXd w = haar_matrix(basis.r);
      return kron(w, w);
    }
    case BasisTag::idhw: return dense_idhw(basis.r);
  }
  throw InvalidArgument("unknown basis tag");
}

std::string_view to_string(Subband band) {
  switch (band) {
    case Subband::none: return "none";
    case Subband::s00: return "00";
    case Subband::s01: return "01";
    case Subband::s11: return "11";
    case Subband::s10: return "10";
  }
  return "?";
}

std::vector<CoefficientInfo> coefficient_layout(BasisKind basis) {
  std::vector<CoefficientInfo> out(basis.dim());
  const int r = basis.r;
  switch (basis.tag) {
    case BasisTag::hadamard1d:
    case BasisTag::dhw: {
      const LevelPartition p = build_levels(PartitionKind::dyadic1d, r);
      for (std::size_t t = 0; t < p.size(); ++t) {
        for (Index l : p.levels[t]) out[l - 1] = {static_cast<int>(t), Subband::none};
      }
      break;
    }
    case BasisTag::hadamard2d:
    case BasisTag::adhw: {
      const LevelPartition p = build_levels(PartitionKind::aniso2d, r);
      for (std::size_t t = 0; t < p.size(); ++t) {
        for (Index l : p.levels[t]) out[l - 1] = {static_cast<int>(t), Subband::none};
      }
      break;
    }
    case BasisTag::idhw: {
      const Index side = basis.side();
      out[0] = {0, Subband::s00};
      for (int l = 1; l <= r; ++l) {
        const IndexList cur = dyadic_level(l);
        const IndexList lower = dyadic_prefix(l);
        for (Index i : flatten_cartesian(cur, lower, side, side)) out[i - 1] = {l, Subband::s01};
        for (Index i : flatten_cartesian(cur, cur, side, side)) out[i - 1] = {l, Subband::s11};
        for (Index i : flatten_cartesian(lower, cur, side, side)) out[i - 1] = {l, Subband::s10};
      }
      break;
    }
  }
  return out;
}

}  // namespace hhcs
