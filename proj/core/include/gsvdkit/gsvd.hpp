#pragma once

// GSVD in "GH" form:
//
//   [A; B] = [U C; V S] H
//
// U (m1 x m1) and V (m2 x m2) orthogonal, C and S one-diagonal with
// C'C + S'S = I_r, and H (r x n) of full row rank r = rank([A; B]).
// Cosines are stored descending, sines ascending.

#include <string_view>
#include <vector>

#include "gsvdkit/matcore.hpp"

namespace gsvdkit {

/// Where the positive sines sit in the rows of S. Bottom keeps the
/// column-space basis of B in the rightmost columns of V (mirror image of
/// U); Top is the LAPACK layout with that basis on the left.
enum class SineLayout { Bottom, Top };

std::string_view to_string(SineLayout layout) noexcept;

struct GsvdFactors {
  Matrix u;
  Matrix v;
  std::vector<double> c;
  std::vector<double> s;
  Matrix h;
  Index r = 0;
  Index r_a = 0;
  Index r_b = 0;
  Index m1 = 0;
  Index m2 = 0;
  Index n = 0;
  /// Column of v holding v_i, or -1 when s_i == 0.
  std::vector<Index> v_col_of;
  SineLayout layout = SineLayout::Bottom;
  bool compact = false;
  /// Relative rank threshold the factorization was computed with.
  double rank_rel_tol = 0.0;

  /// u.cols() x r matrix with c_i at (i, i).
  Matrix cosine_matrix() const;
  /// v.cols() x r matrix with s_i at (v_col_of[i], i).
  Matrix sine_matrix() const;
  /// [U C; V S], whose columns are orthonormal.
  Matrix g() const;
  /// Rebuilds the stacked matrix [A; B].
  Matrix stacked() const;
  Matrix a() const;
  Matrix b() const;
};

/// Table 1 accounting of the C/S block columns and zero rows.
struct CsStructure {
  Index n_infinite = 0;  // #{c_i = 1} = r - r_b
  Index n_finite = 0;    // #{0 < c_i < 1} = r_a + r_b - r
  Index n_zero = 0;      // #{c_i = 0} = r - r_a
  Index zero_rows_c = 0; // m1 - r_a
  Index zero_rows_s = 0; // m2 - r_b
};

struct FundamentalBases {
  Matrix col_a;
  Matrix col_b;
  Matrix left_null_a;
  Matrix left_null_b;
  Matrix row_ab;  // rows of H
  Matrix row_a;   // rows of H with c_i > 0
  Matrix row_b;   // rows of H with s_i > 0
  Matrix null_a;  // columns of H^+ with c_i = 0, then common_null
  Matrix null_b;  // columns of H^+ with s_i = 0, then common_null
  Matrix common_null;
};

struct ExpandedFactors {
  Matrix c_exp;  // u.cols() x n
  Matrix s_exp;  // v.cols() x n
  Matrix h_exp;  // n x n, nonsingular
};

/// H = [0 R] Q' with R upper triangular (r x r) and Q orthogonal (n x n).
/// The first n - r columns of Q span the common nullspace of A and B.
struct RqFactors {
  Matrix r;
  Matrix q;
};

struct RankReduced {
  Matrix a;
  Matrix b;
};

/// Dimension count of both sides of [A;B] = [UC;VS]H for generic rank-r
/// data. Columns are labelled by the role of the smaller of (m1, m2), so
/// `u_stiefel` belongs to the smaller block; `swapped` records whether that
/// is B rather than A.
struct ParameterCount {
  enum class Regime { RankBelowBoth, RankBetween, RankAboveBoth };
  Regime regime = Regime::RankBelowBoth;
  bool swapped = false;
  long long rank_codim = 0;
  long long h_params = 0;
  long long angle_count = 0;
  long long u_stiefel = 0;
  long long v_stiefel = 0;
  long long v_grassmann = 0;
  long long r_a = 0;
  long long r_b = 0;
  long long total = 0;
};

GsvdFactors gsvd_decompose(const Matrix& a, const Matrix& b, const Tolerance& tol = {});

CsStructure structure_counts(const GsvdFactors& f);

FundamentalBases fundamental_subspaces(const GsvdFactors& f, const Matrix& a, const Matrix& b);

/// Drops the left-nullspace columns of U and V (and the zero rows of C, S).
GsvdFactors compact(const GsvdFactors& f);

/// Re-lays V for the requested sine placement. Compact factors are returned
/// unchanged because both layouts coincide there.
GsvdFactors with_layout(const GsvdFactors& f, SineLayout layout);

ExpandedFactors expand(const GsvdFactors& f);

RqFactors rq_drilldown(const GsvdFactors& f);

/// Rank-k truncation [A;B] H^+ I_{r,k} I_{r,k}' H.
RankReduced rank_reduce(const GsvdFactors& f, const Matrix& a, const Matrix& b, Index k);

ParameterCount parameter_count(Index m1, Index m2, Index n, Index r);

/// theta_i = atan2(s_i, c_i) in [0, pi/2]; theta = 0 is an infinite value.
std::vector<double> angles(const GsvdFactors& f);

/// Generalized singular values c_i / s_i, +infinity where s_i == 0.
std::vector<double> cotangents(const GsvdFactors& f);

/// Finite nonzero cotangents (0 < c_i and 0 < s_i), in descending order.
std::vector<double> finite_cotangents(const GsvdFactors& f);

}  // namespace gsvdkit
