#include "gsvdkit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gsvdkit {

std::string_view to_string(Attribution a) noexcept {
  switch (a) {
    case Attribution::ADominant: return "A";
    case Attribution::Mixed: return "mixed";
    case Attribution::BDominant: return "B";
  }
  return "mixed";
}

ClusterDesign cluster_design(const std::vector<Index>& partition) {
  if (partition.size() < 2) {
    throw Error(ErrorCode::InvalidPartition, "need at least two clusters");
  }
  ClusterDesign d;
  d.partition = partition;
  d.k = static_cast<Index>(partition.size());
  for (Index pi : partition) {
    if (pi < 1) throw Error(ErrorCode::InvalidPartition, "cluster sizes must be positive");
    d.p += pi;
  }

  d.indicator = Matrix::Zero(d.p, d.k);
  d.y1 = Matrix::Zero(d.p, d.k);
  Index row = 0;
  for (Index j = 0; j < d.k; ++j) {
    const Index pj = partition[static_cast<std::size_t>(j)];
    d.indicator.block(row, j, pj, 1).setOnes();
    d.y1.block(row, j, pj, 1).setConstant(1.0 / std::sqrt(static_cast<double>(pj)));
    row += pj;
  }

  d.constraint = Matrix::Zero(d.k - 1, d.k);
  d.constraint.leftCols(d.k - 1).setIdentity();
  d.constraint.col(d.k - 1).setConstant(-1.0);

  const GsvdFactors f = gsvd_decompose(d.indicator, d.constraint);
  if (f.r != d.k || f.r_a != d.k || f.r_b != d.k - 1) {
    throw Error(ErrorCode::NumericFailure, "unexpected rank structure for the cluster design");
  }
  d.u_split = f.u;
  if (d.u_split.col(0).sum() < 0.0) d.u_split.col(0) = -d.u_split.col(0);
  return d;
}

AnovaReport anova_f(const ClusterDesign& design, const Vector& v) {
  if (v.size() != design.p) {
    throw Error(ErrorCode::DimensionMismatch, "data vector has length " + std::to_string(v.size()) +
                                                  " but the partition sums to " +
                                                  std::to_string(design.p));
  }
  if (!v.allFinite()) throw Error(ErrorCode::NonFinite, "data vector contains NaN or Inf");
  AnovaReport rep;
  rep.df_between = design.k - 1;
  rep.df_within = design.p - design.k;
  rep.between_norm_sq = (design.u2().transpose() * v).squaredNorm();
  rep.within_norm_sq = (design.u3().transpose() * v).squaredNorm();

  const double noise = 1e3 * static_cast<double>(design.p) * std::numeric_limits<double>::epsilon();
  const double floor = noise * noise * v.squaredNorm();
  if (!(rep.between_norm_sq > floor)) {
    rep.between_norm_sq = 0.0;
    rep.f_value = 0.0;
    return rep;
  }
  if (rep.df_within == 0 || !(rep.within_norm_sq > floor)) {
    throw Error(ErrorCode::ZeroWithin, "data has no within-cluster variation");
  }
  rep.f_value = (rep.between_norm_sq / static_cast<double>(rep.df_between)) /
                (rep.within_norm_sq / static_cast<double>(rep.df_within));
  return rep;
}

Apportionment apportion(const GsvdFactors& f, double theta_lo, double theta_hi,
                        bool normalize_rows) {
  if (!(0.0 <= theta_lo && theta_lo <= theta_hi && theta_hi <= std::numbers::pi / 2)) {
    throw Error(ErrorCode::DomainError, "thresholds must satisfy 0 <= lo <= hi <= pi/2");
  }
  Apportionment ap;
  ap.theta_lo = theta_lo;
  ap.theta_hi = theta_hi;
  ap.angles = angles(f);
  for (double th : ap.angles) {
    ap.labels.push_back(th < theta_lo   ? Attribution::ADominant
                        : th > theta_hi ? Attribution::BDominant
                                        : Attribution::Mixed);
  }
  ap.rows = f.h;
  if (normalize_rows) {
    for (Index i = 0; i < ap.rows.rows(); ++i) {
      const double nrm = ap.rows.row(i).norm();
      if (nrm > 0.0) ap.rows.row(i) /= nrm;
    }
  }
  if (f.r > 0) {
    const Vector sv = Eigen::JacobiSVD<Matrix>(f.h).singularValues();
    ap.h_condition = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                             : std::numeric_limits<double>::infinity();
  }
  return ap;
}

RankReduced reconstruct_terms(const GsvdFactors& f, Index k) {
  if (k < 0 || k > f.r) {
    throw Error(ErrorCode::RankOutOfRange,
                "k = " + std::to_string(k) + " outside [0, " + std::to_string(f.r) + "]");
  }
  RankReduced out{Matrix::Zero(f.m1, f.n), Matrix::Zero(f.m2, f.n)};
  for (Index i = 0; i < k; ++i) {
    const auto ki = static_cast<std::size_t>(i);
    if (f.c[ki] > 0.0) out.a.noalias() += (f.c[ki] * f.u.col(i)) * f.h.row(i);
    if (f.v_col_of[ki] >= 0) out.b.noalias() += (f.s[ki] * f.v.col(f.v_col_of[ki])) * f.h.row(i);
  }
  return out;
}

DiscriminantReduction discriminant_reduce(const Matrix& m, const ClusterDesign& design,
                                          const Tolerance& tol, bool q_fast_path) {
  require_finite(m, "M");
  if (m.rows() != design.p) {
    throw Error(ErrorCode::DimensionMismatch, "M has " + std::to_string(m.rows()) +
                                                  " rows but the partition sums to " +
                                                  std::to_string(design.p));
  }
  DiscriminantReduction out;
  const Matrix between = design.u2().transpose() * m;
  const Matrix within = design.u3().transpose() * m;
  out.anova_factors = gsvd_decompose(between, within, tol);
  const GsvdFactors& f = out.anova_factors;
  if (f.r == 0) throw Error(ErrorCode::DegenerateData, "data has no variation beyond the mean");

  const Index keep = std::min(f.r, design.k - 1);
  out.g = Matrix::Zero(m.cols(), design.k - 1);
  if (q_fast_path) {
    const RqFactors rq = rq_drilldown(f);
    out.g.leftCols(keep) = rq.q.middleCols(f.n - f.r, keep);
  } else {
    out.g.leftCols(keep) = pinv(f.h).leftCols(keep);
  }
  out.mg = m * out.g;
  return out;
}

}  // namespace gsvdkit
