#include "gsvdkit/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace gsvdkit {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Flips column i of u (and of v) so that its first non-negligible entry is
// nonnegative.
void fix_signs(Matrix& u, Matrix& v) {
  for (Index j = 0; j < u.cols(); ++j) {
    const double scale = u.col(j).cwiseAbs().maxCoeff();
    if (scale == 0.0) continue;
    for (Index i = 0; i < u.rows(); ++i) {
      const double x = u(i, j);
      if (std::abs(x) > 1e-12 * scale) {
        if (x < 0.0) {
          u.col(j) = -u.col(j);
          if (j < v.cols()) v.col(j) = -v.col(j);
        }
        break;
      }
    }
  }
}

}  // namespace

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidDimensions: return "InvalidDimensions";
    case ErrorCode::RankOutOfRange: return "RankOutOfRange";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::NeedsAugmentation: return "NeedsAugmentation";
    case ErrorCode::NoAugmentationNeeded: return "NoAugmentationNeeded";
    case ErrorCode::SingularH: return "SingularH";
    case ErrorCode::NotOrthonormal: return "NotOrthonormal";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::InvalidPartition: return "InvalidPartition";
    case ErrorCode::ZeroWithin: return "ZeroWithin";
    case ErrorCode::DegenerateData: return "DegenerateData";
    case ErrorCode::UnsupportedBeta: return "UnsupportedBeta";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NumericFailure: return "NumericFailure";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

double Tolerance::rel_for(Index rows, Index cols) const {
  if (rel) return *rel;
  return static_cast<double>(std::max<Index>({rows, cols, 1})) * kEps;
}

double Tolerance::threshold(double sigma_max, Index rows, Index cols) const {
  return std::max(rel_for(rows, cols) * sigma_max, abs);
}

void Tolerance::validate() const {
  if ((rel && !(*rel >= 0.0)) || !(abs >= 0.0)) {
    throw Error(ErrorCode::DomainError, "tolerance components must be nonnegative");
  }
}

Matrix make_matrix(Index rows, Index cols, std::span<const double> row_major) {
  if (rows < 0 || cols < 0 || static_cast<std::size_t>(rows * cols) != row_major.size()) {
    throw Error(ErrorCode::InvalidDimensions,
                "expected " + std::to_string(rows * cols) + " entries, got " +
                    std::to_string(row_major.size()));
  }
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = row_major[static_cast<std::size_t>(i * cols + j)];
  require_finite(m, "matrix");
  return m;
}

void require_finite(const Matrix& m, std::string_view what) {
  if (!m.allFinite()) {
    throw Error(ErrorCode::NonFinite, std::string(what) + " contains NaN or Inf");
  }
}

Index numerical_rank(const Matrix& m, const Tolerance& tol) {
  tol.validate();
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double thr = tol.threshold(s(0), m.rows(), m.cols());
  Index rank = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > thr) ++rank;
  return rank;
}

QrFactors thin_qr_truncated(const Matrix& m, Index rank) {
  const Index rows = m.rows();
  const Index cols = m.cols();
  QrFactors out;
  out.perm.resize(static_cast<std::size_t>(cols));
  if (rank == 0 || m.size() == 0) {
    std::iota(out.perm.begin(), out.perm.end(), Index{0});
    out.q = Matrix(rows, 0);
    out.r = Matrix(0, cols);
    return out;
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(m);
  const auto& indices = qr.colsPermutation().indices();
  for (Index j = 0; j < cols; ++j) out.perm[static_cast<std::size_t>(j)] = indices(j);
  Matrix q_full = qr.householderQ() * Matrix::Identity(rows, rank);
  Matrix r_full = qr.matrixR().topRows(rank).triangularView<Eigen::Upper>();
  for (Index i = 0; i < rank; ++i) {
    if (r_full(i, i) < 0.0) {
      r_full.row(i) = -r_full.row(i);
      q_full.col(i) = -q_full.col(i);
    }
  }
  out.q = std::move(q_full);
  out.r = std::move(r_full);
  return out;
}

QrFactors thin_qr(const Matrix& m, bool pivoted, const Tolerance& tol) {
  require_finite(m, "thin_qr input");
  if (pivoted) return thin_qr_truncated(m, numerical_rank(m, tol));

  const Index rows = m.rows();
  const Index cols = m.cols();
  const Index k = std::min(rows, cols);
  QrFactors out;
  out.perm.resize(static_cast<std::size_t>(cols));
  std::iota(out.perm.begin(), out.perm.end(), Index{0});
  Eigen::HouseholderQR<Matrix> qr(m);
  out.q = qr.householderQ() * Matrix::Identity(rows, k);
  out.r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  for (Index i = 0; i < k; ++i) {
    if (out.r(i, i) < 0.0) {
      out.r.row(i) = -out.r.row(i);
      out.q.col(i) = -out.q.col(i);
    }
  }
  return out;
}

SvdFactors full_svd(const Matrix& m) {
  require_finite(m, "full_svd input");
  SvdFactors out;
  if (m.rows() == 0 || m.cols() == 0) {
    out.u = Matrix::Identity(m.rows(), m.rows());
    out.v = Matrix::Identity(m.cols(), m.cols());
    out.sigma = Vector(0);
    return out;
  }
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  out.u = svd.matrixU();
  out.v = svd.matrixV();
  out.sigma = svd.singularValues();
  fix_signs(out.u, out.v);
  return out;
}

Matrix pinv(const Matrix& m, const Tolerance& tol) {
  tol.validate();
  require_finite(m, "pinv input");
  Matrix out = Matrix::Zero(m.cols(), m.rows());
  if (m.size() == 0) return out;
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return out;
  const double thr = tol.threshold(s(0), m.rows(), m.cols());
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) > thr) out.noalias() += svd.matrixV().col(i) * (svd.matrixU().col(i).transpose() / s(i));
  }
  return out;
}

Matrix orth(const Matrix& m, const Tolerance& tol) {
  tol.validate();
  if (m.size() == 0) return Matrix(m.rows(), 0);
  const SvdFactors f = full_svd(m);
  if (f.sigma.size() == 0 || f.sigma(0) == 0.0) return Matrix(m.rows(), 0);
  const double thr = tol.threshold(f.sigma(0), m.rows(), m.cols());
  Index rank = 0;
  while (rank < f.sigma.size() && f.sigma(rank) > thr) ++rank;
  return f.u.leftCols(rank);
}

Matrix null_space(const Matrix& m, const Tolerance& tol) {
  tol.validate();
  if (m.rows() == 0 || m.cols() == 0) return Matrix::Identity(m.cols(), m.cols());
  const SvdFactors f = full_svd(m);
  Index rank = 0;
  if (f.sigma(0) > 0.0) {
    const double thr = tol.threshold(f.sigma(0), m.rows(), m.cols());
    while (rank < f.sigma.size() && f.sigma(rank) > thr) ++rank;
  }
  return f.v.rightCols(m.cols() - rank);
}

Matrix complete_orthonormal(const Matrix& q) {
  const Index n = q.rows();
  const Index k = q.cols();
  if (k == 0) return Matrix::Identity(n, n);
  Eigen::HouseholderQR<Matrix> qr(q);
  Matrix full = qr.householderQ() * Matrix::Identity(n, n);
  // Householder QR spans the same nested subspaces; align signs with q.
  for (Index j = 0; j < k; ++j) {
    if (full.col(j).dot(q.col(j)) < 0.0) full.col(j) = -full.col(j);
  }
  return full;
}

Matrix vstack(const Matrix& top, const Matrix& bottom) {
  if (top.cols() != bottom.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                "cannot stack matrices with " + std::to_string(top.cols()) + " and " +
                    std::to_string(bottom.cols()) + " columns");
  }
  Matrix out(top.rows() + bottom.rows(), top.cols());
  out.topRows(top.rows()) = top;
  out.bottomRows(bottom.rows()) = bottom;
  return out;
}

double rel_frobenius(const Matrix& a, const Matrix& b) {
  const double denom = std::max(b.norm(), std::numeric_limits<double>::min());
  return (a - b).norm() / denom;
}

}  // namespace gsvdkit
