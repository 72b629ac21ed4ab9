#pragma once

// Clustering matrices, one-way ANOVA, discriminant reduction and the
// comparative apportionment of the rows of H.

#include <numbers>
#include <string_view>
#include <vector>

#include "gsvdkit/gsvd.hpp"

namespace gsvdkit {

struct ClusterDesign {
  std::vector<Index> partition;
  Index p = 0;
  Index k = 0;
  Matrix indicator;   // p x k, 0/1 blocks
  Matrix y1;          // indicator * diag(1 / sqrt(p_i))
  Matrix constraint;  // (k-1) x k, [I  -1]
  Matrix u_split;     // p x p orthogonal: [U1 | U2 | U3], widths 1, k-1, p-k

  auto u1() const { return u_split.leftCols(1); }
  auto u2() const { return u_split.middleCols(1, k - 1); }
  auto u3() const { return u_split.rightCols(p - k); }
};

/// Builds the design for a partition p_1..p_k (all p_i >= 1, k >= 2). The
/// U-split is the U factor of gsvd(indicator, constraint).
ClusterDesign cluster_design(const std::vector<Index>& partition);

struct AnovaReport {
  double between_norm_sq = 0.0;
  double within_norm_sq = 0.0;
  Index df_between = 0;
  Index df_within = 0;
  double f_value = 0.0;
};

/// One-way ANOVA F = (||U2'v||^2 / (k-1)) / (||U3'v||^2 / (p-k)).
/// A vector with no between-cluster component reports F = 0; otherwise a
/// vanishing within-cluster component raises ZeroWithin.
AnovaReport anova_f(const ClusterDesign& design, const Vector& v);

enum class Attribution { ADominant, Mixed, BDominant };

std::string_view to_string(Attribution a) noexcept;

inline constexpr double kDefaultThetaLo = std::numbers::pi / 8;
inline constexpr double kDefaultThetaHi = 3 * std::numbers::pi / 8;

struct Apportionment {
  std::vector<double> angles;           // atan2(s_i, c_i), nondecreasing
  std::vector<Attribution> labels;
  Matrix rows;                          // rows of H, optionally unit length
  double theta_lo = kDefaultThetaLo;
  double theta_hi = kDefaultThetaHi;
  double h_condition = 0.0;             // sigma_max / sigma_min of H
};

Apportionment apportion(const GsvdFactors& f, double theta_lo = kDefaultThetaLo,
                        double theta_hi = kDefaultThetaHi, bool normalize_rows = false);

/// Partial sum of the first k outer-product terms [u_i c_i; v_i s_i] h_i'.
RankReduced reconstruct_terms(const GsvdFactors& f, Index k);

struct DiscriminantReduction {
  Matrix g;   // n x (k-1)
  Matrix mg;  // p x (k-1)
  GsvdFactors anova_factors;  // gsvd(U2' M, U3' M)
};

/// Reduces the data matrix M (rows = items) to k-1 discriminant columns via
/// G = H^+ I_{r,k-1}. With `q_fast_path` the orthonormal columns of the RQ
/// factor of H spanning the same subspace are used instead.
DiscriminantReduction discriminant_reduce(const Matrix& m, const ClusterDesign& design,
                                          const Tolerance& tol = {}, bool q_fast_path = false);

}  // namespace gsvdkit
