#include "gsvdkit/gsvd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gsvdkit {

namespace {

constexpr double kSqrtHalf = 0.70710678118654752440;

Index count_above(const Vector& sigma, double thr) {
  Index k = 0;
  for (Index i = 0; i < sigma.size(); ++i)
    if (sigma(i) > thr) ++k;
  return k;
}

Vector singular_values(const Matrix& m) {
  if (m.size() == 0) return Vector(0);
  return Eigen::JacobiSVD<Matrix>(m).singularValues();
}

// Flip u_i, v_i and h_i together so that the first non-negligible entry
// of the column [c_i u_i; s_i v_i] of G is positive.
void fix_column_signs(GsvdFactors& f) {
  for (Index i = 0; i < f.r; ++i) {
    const auto ci = static_cast<std::size_t>(i);
    Vector g = Vector::Zero(f.u.rows() + f.v.rows());
    if (f.c[ci] > 0.0 && i < f.u.cols()) g.head(f.u.rows()) = f.c[ci] * f.u.col(i);
    if (f.v_col_of[ci] >= 0) g.tail(f.v.rows()) = f.s[ci] * f.v.col(f.v_col_of[ci]);
    const double scale = g.cwiseAbs().maxCoeff();
    if (scale == 0.0) continue;
    for (Index k = 0; k < g.size(); ++k) {
      if (std::abs(g(k)) > 1e-10 * scale) {
        if (g(k) < 0.0) {
          if (i < f.u.cols()) f.u.col(i) = -f.u.col(i);
          if (f.v_col_of[ci] >= 0) f.v.col(f.v_col_of[ci]) = -f.v.col(f.v_col_of[ci]);
          f.h.row(i) = -f.h.row(i);
        }
        break;
      }
    }
  }
}

}  // namespace

std::string_view to_string(SineLayout layout) noexcept {
  return layout == SineLayout::Bottom ? "bottom" : "top";
}

Matrix GsvdFactors::cosine_matrix() const {
  Matrix cm = Matrix::Zero(u.cols(), r);
  for (Index i = 0; i < std::min(u.cols(), r); ++i) cm(i, i) = c[static_cast<std::size_t>(i)];
  return cm;
}

Matrix GsvdFactors::sine_matrix() const {
  Matrix sm = Matrix::Zero(v.cols(), r);
  for (Index i = 0; i < r; ++i) {
    const Index col = v_col_of[static_cast<std::size_t>(i)];
    if (col >= 0) sm(col, i) = s[static_cast<std::size_t>(i)];
  }
  return sm;
}

Matrix GsvdFactors::g() const { return vstack(u * cosine_matrix(), v * sine_matrix()); }

Matrix GsvdFactors::stacked() const { return g() * h; }

Matrix GsvdFactors::a() const { return u * cosine_matrix() * h; }

Matrix GsvdFactors::b() const { return v * sine_matrix() * h; }

GsvdFactors gsvd_decompose(const Matrix& a, const Matrix& b, const Tolerance& tol) {
  tol.validate();
  require_finite(a, "A");
  require_finite(b, "B");
  if (a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "A has " + std::to_string(a.cols()) +
                                                  " columns but B has " +
                                                  std::to_string(b.cols()));
  }

  GsvdFactors f;
  f.m1 = a.rows();
  f.m2 = b.rows();
  f.n = a.cols();
  const Index m = f.m1 + f.m2;
  const Matrix stacked = vstack(a, b);
  f.rank_rel_tol = tol.rel_for(m, f.n);

  // All three ranks are judged against the scale of the stacked matrix so a
  // block that is negligible next to the other counts as zero.
  const Vector sigma = singular_values(stacked);
  const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
  const double thr = tol.threshold(sigma_max, m, f.n);
  if (sigma_max > 0.0) {
    f.r = count_above(sigma, thr);
    f.r_a = count_above(singular_values(a), thr);
    f.r_b = count_above(singular_values(b), thr);
  }
  if (f.r_a + f.r_b < f.r) {
    throw Error(ErrorCode::NumericFailure,
                "rank(A) + rank(B) < rank([A;B]) at the chosen tolerance; the pair is too "
                "close to a rank boundary");
  }
  f.r_a = std::min(f.r_a, f.r);
  f.r_b = std::min(f.r_b, f.r);

  const Index r = f.r;
  if (r == 0) {
    f.u = Matrix::Identity(f.m1, f.m1);
    f.v = Matrix::Identity(f.m2, f.m2);
    f.h = Matrix(0, f.n);
    return f;
  }

  const QrFactors qr = thin_qr_truncated(stacked, r);
  Matrix r_factor(r, f.n);
  for (Index j = 0; j < f.n; ++j) r_factor.col(qr.perm[static_cast<std::size_t>(j)]) = qr.r.col(j);
  const Matrix qa = qr.q.topRows(f.m1);
  const Matrix qb = qr.q.bottomRows(f.m2);

  // Cosines from the top block.
  Matrix u = Matrix::Identity(f.m1, f.m1);
  Matrix w = Matrix::Identity(r, r);
  Vector c_raw = Vector::Zero(r);
  if (f.m1 > 0) {
    Eigen::JacobiSVD<Matrix> svd_a(qa, Eigen::ComputeFullU | Eigen::ComputeFullV);
    u = svd_a.matrixU();
    w = svd_a.matrixV();
    const Vector& sv = svd_a.singularValues();
    for (Index i = 0; i < sv.size(); ++i) c_raw(i) = std::min(sv(i), 1.0);
  }

  Index big = 0;
  while (big < r && c_raw(big) > kSqrtHalf) ++big;

  Vector c = c_raw;
  Vector s = Vector::Zero(r);
  Matrix t = qb * w;
  // Candidate v_i (unnormalized directions); zero columns mean "none".
  Matrix v_dir = Matrix::Zero(f.m2, r);

  // Large cosines / small sines: resolve the sine side with its own SVD so
  // small sines keep relative accuracy, then re-diagonalize the cosine side.
  if (big > 0) {
    Matrix z = Matrix::Identity(big, big);
    Vector sig_b = Vector::Zero(big);
    Matrix y = Matrix::Zero(f.m2, big);
    if (f.m2 > 0) {
      Eigen::JacobiSVD<Matrix> svd_b(t.leftCols(big), Eigen::ComputeFullU | Eigen::ComputeFullV);
      z = svd_b.matrixV();
      const Vector& sv = svd_b.singularValues();
      for (Index i = 0; i < sv.size(); ++i) sig_b(i) = sv(i);
      y.leftCols(std::min(f.m2, big)) = svd_b.matrixU().leftCols(std::min(f.m2, big));
    }
    Matrix z_rev(big, big);
    for (Index j = 0; j < big; ++j) {
      const Index src = big - 1 - j;
      z_rev.col(j) = z.col(src);
      s(j) = std::min(sig_b(src), 1.0);
      c(j) = std::sqrt(std::max(0.0, 1.0 - s(j) * s(j)));
      v_dir.col(j) = y.col(src);
    }
    w.leftCols(big) = (w.leftCols(big) * z_rev).eval();

    const Matrix x = c_raw.head(big).asDiagonal() * z_rev;
    Eigen::HouseholderQR<Matrix> qx(x);
    Matrix o = qx.householderQ() * Matrix::Identity(big, big);
    const Matrix rx = qx.matrixQR();
    for (Index j = 0; j < big; ++j)
      if (rx(j, j) < 0.0) o.col(j) = -o.col(j);
    u.leftCols(big) = (u.leftCols(big) * o).eval();
  }

  for (Index j = big; j < r; ++j) {
    s(j) = std::sqrt(std::max(0.0, 1.0 - c(j) * c(j)));
    v_dir.col(j) = t.col(j);
  }

  // Snap the structural blocks from the ranks.
  const Index n_inf = r - f.r_b;
  const Index n_zero = r - f.r_a;
  for (Index i = 0; i < n_inf; ++i) {
    c(i) = 1.0;
    s(i) = 0.0;
  }
  for (Index i = r - n_zero; i < r; ++i) {
    c(i) = 0.0;
    s(i) = 1.0;
  }
  for (Index i = n_inf; i < r - n_zero; ++i) {
    if (s(i) <= 0.0) {
      s(i) = std::numeric_limits<double>::min();
      c(i) = 1.0;
    } else if (c(i) <= 0.0) {
      c(i) = std::numeric_limits<double>::min();
      s(i) = 1.0;
    }
  }

  // V: orthonormalize the candidate directions in order of decreasing sine,
  // then complete with a basis for the left nullspace of B.
  const Index rb = f.r_b;
  Matrix cand(f.m2, rb);
  for (Index k = 0; k < rb; ++k) {
    const Index i = r - 1 - k;
    const double nrm = v_dir.col(i).norm();
    cand.col(k) = nrm > 0.0 ? Vector(v_dir.col(i) / nrm) : Vector::Zero(f.m2);
  }
  const Matrix v_full = complete_orthonormal(cand);

  f.v = Matrix(f.m2, f.m2);
  f.v_col_of.assign(static_cast<std::size_t>(r), -1);
  for (Index k = 0; k < rb; ++k) {
    const Index i = r - 1 - k;
    const Index pos = f.m2 - r + i;
    f.v.col(pos) = v_full.col(k);
    f.v_col_of[static_cast<std::size_t>(i)] = pos;
  }
  for (Index k = rb; k < f.m2; ++k) f.v.col(k - rb) = v_full.col(k);

  f.u = std::move(u);
  f.c.assign(c.data(), c.data() + r);
  f.s.assign(s.data(), s.data() + r);
  f.h = w.transpose() * r_factor;
  fix_column_signs(f);
  return f;
}

CsStructure structure_counts(const GsvdFactors& f) {
  CsStructure cs;
  cs.n_infinite = f.r - f.r_b;
  cs.n_finite = f.r_a + f.r_b - f.r;
  cs.n_zero = f.r - f.r_a;
  cs.zero_rows_c = f.m1 - f.r_a;
  cs.zero_rows_s = f.m2 - f.r_b;
  return cs;
}

RqFactors rq_drilldown(const GsvdFactors& f) {
  const Index r = f.r;
  const Index n = f.n;
  RqFactors out;
  if (r == 0) {
    out.r = Matrix(0, 0);
    out.q = Matrix::Identity(n, n);
    return out;
  }
  // QR of the row-reversed H transposed, then undo the reversals.
  Matrix ht_rev(n, r);
  for (Index j = 0; j < r; ++j) ht_rev.col(j) = f.h.row(r - 1 - j).transpose();
  Eigen::HouseholderQR<Matrix> qr(ht_rev);
  Matrix qt = qr.householderQ() * Matrix::Identity(n, n);
  Matrix rt = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  out.q = Matrix(n, n);
  for (Index j = 0; j < n; ++j) out.q.col(j) = qt.col(n - 1 - j);
  // H = J_r Rt' J_n' ... → upper-triangular R in the trailing r columns.
  out.r = Matrix(r, r);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < r; ++j) out.r(i, j) = rt(r - 1 - j, r - 1 - i);
  // Nonnegative diagonal: flip the matching column of Q.
  for (Index j = 0; j < r; ++j) {
    if (out.r(j, j) < 0.0) {
      out.r.col(j) = -out.r.col(j);
      out.q.col(n - r + j) = -out.q.col(n - r + j);
    }
  }
  return out;
}

FundamentalBases fundamental_subspaces(const GsvdFactors& f, const Matrix& a, const Matrix& b) {
  if (a.rows() != f.m1 || b.rows() != f.m2 || a.cols() != f.n || b.cols() != f.n) {
    throw Error(ErrorCode::DimensionMismatch, "factors do not match the given pair");
  }
  FundamentalBases fb;
  const Index n_inf = f.r - f.r_b;
  fb.col_a = f.u.leftCols(f.r_a);
  fb.left_null_a = f.u.rightCols(f.u.cols() - f.r_a);

  fb.col_b = Matrix(f.v.rows(), f.r_b);
  std::vector<bool> used(static_cast<std::size_t>(f.v.cols()), false);
  for (Index i = n_inf; i < f.r; ++i) {
    const Index col = f.v_col_of[static_cast<std::size_t>(i)];
    fb.col_b.col(i - n_inf) = f.v.col(col);
    used[static_cast<std::size_t>(col)] = true;
  }
  fb.left_null_b = Matrix(f.v.rows(), f.v.cols() - f.r_b);
  for (Index k = 0, j = 0; k < f.v.cols(); ++k)
    if (!used[static_cast<std::size_t>(k)]) fb.left_null_b.col(j++) = f.v.col(k);

  fb.row_ab = f.h;
  fb.row_a = f.h.topRows(f.r_a);
  fb.row_b = f.h.bottomRows(f.r_b);

  const RqFactors rq = rq_drilldown(f);
  fb.common_null = rq.q.leftCols(f.n - f.r);

  const Matrix h_pinv = f.r > 0 ? pinv(f.h) : Matrix(f.n, 0);
  const Index n_zero = f.r - f.r_a;
  const Index nc = fb.common_null.cols();
  fb.null_a = Matrix(f.n, n_zero + nc);
  fb.null_a.leftCols(n_zero) = h_pinv.rightCols(n_zero);
  fb.null_a.rightCols(nc) = fb.common_null;
  fb.null_b = Matrix(f.n, n_inf + nc);
  fb.null_b.leftCols(n_inf) = h_pinv.leftCols(n_inf);
  fb.null_b.rightCols(nc) = fb.common_null;
  return fb;
}

GsvdFactors compact(const GsvdFactors& f) {
  GsvdFactors out = f;
  out.u = f.u.leftCols(f.r_a);
  const Index n_inf = f.r - f.r_b;
  out.v = Matrix(f.v.rows(), f.r_b);
  for (Index i = 0; i < f.r; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    if (f.v_col_of[ui] >= 0) {
      out.v.col(i - n_inf) = f.v.col(f.v_col_of[ui]);
      out.v_col_of[ui] = i - n_inf;
    }
  }
  out.compact = true;
  return out;
}

GsvdFactors with_layout(const GsvdFactors& f, SineLayout layout) {
  if (f.compact || f.layout == layout) {
    GsvdFactors out = f;
    out.layout = layout;
    return out;
  }
  const FundamentalBases fb = fundamental_subspaces(f, f.a(), f.b());
  GsvdFactors out = f;
  out.layout = layout;
  const Index n_inf = f.r - f.r_b;
  const Index nulls = fb.left_null_b.cols();
  for (Index i = n_inf; i < f.r; ++i) {
    const Index pos = layout == SineLayout::Top ? i - n_inf : f.m2 - f.r + i;
    out.v.col(pos) = fb.col_b.col(i - n_inf);
    out.v_col_of[static_cast<std::size_t>(i)] = pos;
  }
  const Index null_start = layout == SineLayout::Top ? f.r_b : 0;
  for (Index k = 0; k < nulls; ++k) out.v.col(null_start + k) = fb.left_null_b.col(k);
  return out;
}

ExpandedFactors expand(const GsvdFactors& f) {
  ExpandedFactors ex;
  const Index extra = f.n - f.r;
  ex.c_exp = Matrix::Zero(f.u.cols(), f.n);
  ex.c_exp.leftCols(f.r) = f.cosine_matrix();
  ex.s_exp = Matrix::Zero(f.v.cols(), f.n);
  ex.s_exp.leftCols(f.r) = f.sine_matrix();
  ex.h_exp = Matrix(f.n, f.n);
  ex.h_exp.topRows(f.r) = f.h;
  if (extra > 0) {
    const RqFactors rq = rq_drilldown(f);
    ex.h_exp.bottomRows(extra) = rq.q.leftCols(extra).transpose();
  }
  return ex;
}

RankReduced rank_reduce(const GsvdFactors& f, const Matrix& a, const Matrix& b, Index k) {
  if (k < 0 || k > f.r) {
    throw Error(ErrorCode::RankOutOfRange,
                "k = " + std::to_string(k) + " outside [0, " + std::to_string(f.r) + "]");
  }
  if (a.rows() != f.m1 || b.rows() != f.m2 || a.cols() != f.n || b.cols() != f.n) {
    throw Error(ErrorCode::DimensionMismatch, "factors do not match the given pair");
  }
  RankReduced out;
  if (k == 0) {
    out.a = Matrix::Zero(a.rows(), a.cols());
    out.b = Matrix::Zero(b.rows(), b.cols());
    return out;
  }
  const Matrix h_pinv = pinv(f.h);
  const Matrix proj = h_pinv.leftCols(k) * f.h.topRows(k);
  out.a = a * proj;
  out.b = b * proj;
  return out;
}

ParameterCount parameter_count(Index m1, Index m2, Index n, Index r) {
  if (m1 < 1 || m2 < 1 || n < 1 || r < 1 || r > std::min(m1 + m2, n)) {
    throw Error(ErrorCode::InvalidDimensions,
                "need 0 < r <= min(m1 + m2, n) with positive m1, m2, n");
  }
  ParameterCount pc;
  long long lo = m1;
  long long hi = m2;
  if (lo > hi) {
    std::swap(lo, hi);
    pc.swapped = true;
  }
  const long long m = lo + hi;
  const long long nn = n;
  const long long rr = r;
  pc.rank_codim = (m - rr) * (nn - rr);
  pc.h_params = rr * nn;
  if (rr <= lo) {
    pc.regime = ParameterCount::Regime::RankBelowBoth;
    pc.angle_count = rr;
    pc.u_stiefel = (lo - rr) * rr + rr * (rr - 1) / 2;
    pc.v_stiefel = (hi - rr) * rr + rr * (rr - 1) / 2;
    pc.r_a = rr;
    pc.r_b = rr;
  } else if (rr <= hi) {
    pc.regime = ParameterCount::Regime::RankBetween;
    pc.angle_count = lo;
    pc.u_stiefel = lo * (lo - 1) / 2;
    pc.v_stiefel = (hi - lo) * lo + lo * (lo - 1) / 2;
    pc.v_grassmann = (rr - lo) * (hi - rr);
    pc.r_a = lo;
    pc.r_b = rr;
  } else {
    pc.regime = ParameterCount::Regime::RankAboveBoth;
    pc.angle_count = m - rr;
    pc.u_stiefel = (rr - hi) * (m - rr) + (m - rr) * (m - rr - 1) / 2;
    pc.v_stiefel = (rr - lo) * (m - rr) + (m - rr) * (m - rr - 1) / 2;
    pc.r_a = lo;
    pc.r_b = hi;
  }
  if (pc.swapped) std::swap(pc.r_a, pc.r_b);
  pc.total = pc.rank_codim + pc.h_params + pc.angle_count + pc.u_stiefel + pc.v_stiefel +
             pc.v_grassmann;
  return pc;
}

std::vector<double> angles(const GsvdFactors& f) {
  std::vector<double> th(f.c.size());
  for (std::size_t i = 0; i < f.c.size(); ++i) th[i] = std::atan2(f.s[i], f.c[i]);
  return th;
}

std::vector<double> cotangents(const GsvdFactors& f) {
  std::vector<double> out(f.c.size());
  for (std::size_t i = 0; i < f.c.size(); ++i)
    out[i] = f.s[i] == 0.0 ? std::numeric_limits<double>::infinity() : f.c[i] / f.s[i];
  return out;
}

std::vector<double> finite_cotangents(const GsvdFactors& f) {
  std::vector<double> out;
  for (std::size_t i = 0; i < f.c.size(); ++i)
    if (f.c[i] > 0.0 && f.s[i] > 0.0) out.push_back(f.c[i] / f.s[i]);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

}  // namespace gsvdkit
