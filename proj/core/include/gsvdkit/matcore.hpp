#pragma once

// Dense-matrix foundation: rank decisions, QR, SVD and pseudoinverse.
// Every other module goes through these entry points so that rank
// thresholds and sign conventions are decided in exactly one place.

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gsvdkit/errors.hpp"

namespace gsvdkit {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Threshold used for numerical rank decisions.
///
/// A singular value counts as nonzero when it exceeds
/// max(rel * sigma_max, abs). When `rel` is left unset it defaults to
/// max(rows, cols) * machine epsilon of the matrix being examined.
struct Tolerance {
  std::optional<double> rel;
  double abs = 0.0;

  double rel_for(Index rows, Index cols) const;
  double threshold(double sigma_max, Index rows, Index cols) const;
  void validate() const;
};

/// Builds a matrix from row-major entries; rejects non-finite values and
/// entry counts that do not match rows * cols.
Matrix make_matrix(Index rows, Index cols, std::span<const double> row_major);

/// Throws ErrorCode::NonFinite if any entry is NaN or infinite.
void require_finite(const Matrix& m, std::string_view what);

Index numerical_rank(const Matrix& m, const Tolerance& tol = {});

struct QrFactors {
  Matrix q;
  Matrix r;
  std::vector<Index> perm;  // column j of M*P is column perm[j] of M
};

/// Thin QR with nonnegative diagonal in R. With `pivoted` the factor is
/// truncated to the numerical rank of `m`.
QrFactors thin_qr(const Matrix& m, bool pivoted, const Tolerance& tol = {});

/// Pivoted QR truncated to a caller-supplied rank.
QrFactors thin_qr_truncated(const Matrix& m, Index rank);

struct SvdFactors {
  Matrix u;       // rows x rows
  Vector sigma;   // min(rows, cols), descending
  Matrix v;       // cols x cols
};

/// Full SVD. The first entry of each left singular vector that is not
/// negligible is made nonnegative (the right vector is flipped with it).
SvdFactors full_svd(const Matrix& m);

/// Moore-Penrose pseudoinverse; singular values at or below the tolerance
/// threshold are treated as zero.
Matrix pinv(const Matrix& m, const Tolerance& tol = {});

/// Orthonormal basis (columns) of the column space of `m`.
Matrix orth(const Matrix& m, const Tolerance& tol = {});

/// Orthonormal basis (columns) of the nullspace of `m`.
Matrix null_space(const Matrix& m, const Tolerance& tol = {});

/// Completes the orthonormal columns of `q` to a square orthogonal matrix
/// whose leading columns span the same nested subspaces as `q`.
Matrix complete_orthonormal(const Matrix& q);

/// Stacks [top; bottom]; column counts must agree.
Matrix vstack(const Matrix& top, const Matrix& bottom);

/// Relative Frobenius distance ||a - b|| / max(||b||, tiny).
double rel_frobenius(const Matrix& a, const Matrix& b);

}  // namespace gsvdkit
