#include "gsvdkit/quotient.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace gsvdkit {

namespace {

std::vector<double> singular_list(const Matrix& m) {
  if (m.size() == 0) return {};
  const Vector sv = Eigen::JacobiSVD<Matrix>(m).singularValues();
  return {sv.data(), sv.data() + sv.size()};
}

double norm2(const Matrix& m) {
  const std::vector<double> sv = singular_list(m);
  return sv.empty() ? 0.0 : sv.front();
}

// Singular values of a product X Y above rel * ||X|| ||Y||. Scaling by the
// factors rather than by the product keeps an all-roundoff product at zero.
std::vector<double> nonzero_part(std::vector<double> sv, double rel, double scale) {
  if (sv.empty()) return sv;
  std::sort(sv.begin(), sv.end(), std::greater<>());
  const double cut = rel * scale;
  std::erase_if(sv, [cut](double x) { return !(x > cut); });
  return sv;
}

// Pads the shorter list with zeros, then compares sorted sequences.
double padded_gap(std::vector<double> expected, std::vector<double> observed) {
  const std::size_t len = std::max(expected.size(), observed.size());
  expected.resize(len, 0.0);
  observed.resize(len, 0.0);
  return max_relative_gap(std::move(expected), std::move(observed));
}

}  // namespace

double max_relative_gap(std::vector<double> x, std::vector<double> y) {
  if (x.size() != y.size()) return std::numeric_limits<double>::infinity();
  if (x.empty()) return 0.0;
  std::sort(x.begin(), x.end(), std::greater<>());
  std::sort(y.begin(), y.end(), std::greater<>());
  const double scale = std::max({std::abs(x.front()), std::abs(y.front()), std::abs(x.back()),
                                 std::abs(y.back()), std::numeric_limits<double>::min()});
  double gap = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) gap = std::max(gap, std::abs(x[i] - y[i]) / scale);
  return gap;
}

TrigReport trig_table(const GsvdFactors& f, const Matrix& a, const Matrix& b) {
  TrigReport rep;
  const Matrix h_pinv = f.r > 0 ? pinv(f.h) : Matrix(f.n, 0);

  TrigRow cos_row{"cos", "svd(A H^+)", true, f.c, singular_list(a * h_pinv), 0.0};
  std::sort(cos_row.expected.begin(), cos_row.expected.end(), std::greater<>());
  cos_row.max_deviation = padded_gap(cos_row.expected, cos_row.observed);
  rep.rows.push_back(std::move(cos_row));

  TrigRow sin_row{"sin", "svd(B H^+)", true, f.s, singular_list(b * h_pinv), 0.0};
  std::sort(sin_row.expected.begin(), sin_row.expected.end(), std::greater<>());
  sin_row.max_deviation = padded_gap(sin_row.expected, sin_row.observed);
  rep.rows.push_back(std::move(sin_row));

  TrigRow cot_row{"cot", "svd(A B^+) if r = r_b", f.r == f.r_b, {}, {}, 0.0};
  if (cot_row.applicable) {
    for (std::size_t i = 0; i < f.c.size(); ++i)
      if (f.c[i] > 0.0) cot_row.expected.push_back(f.c[i] / f.s[i]);
    const Matrix b_pinv = pinv(b);
    cot_row.observed =
        nonzero_part(singular_list(a * b_pinv), kQuotientZeroRel, norm2(a) * norm2(b_pinv));
    cot_row.max_deviation = max_relative_gap(cot_row.expected, cot_row.observed);
  }
  rep.rows.push_back(std::move(cot_row));

  TrigRow tan_row{"tan", "svd(B A^+) if r = r_a", f.r == f.r_a, {}, {}, 0.0};
  if (tan_row.applicable) {
    for (std::size_t i = 0; i < f.s.size(); ++i)
      if (f.s[i] > 0.0) tan_row.expected.push_back(f.s[i] / f.c[i]);
    const Matrix a_pinv = pinv(a);
    tan_row.observed =
        nonzero_part(singular_list(b * a_pinv), kQuotientZeroRel, norm2(b) * norm2(a_pinv));
    tan_row.max_deviation = max_relative_gap(tan_row.expected, tan_row.observed);
  }
  rep.rows.push_back(std::move(tan_row));
  return rep;
}

Matrix horizontal_projector_from_factors(const GsvdFactors& f) {
  Matrix p = Matrix::Identity(f.m1, f.m1);
  for (Index i = 0; i < f.r - f.r_b; ++i) p -= f.u.col(i) * f.u.col(i).transpose();
  return p;
}

HorizontalProjector horizontal_projector(const GsvdFactors& f, const Matrix& a, const Matrix& b,
                                         const Tolerance& tol) {
  if (a.rows() != f.m1 || b.rows() != f.m2 || a.cols() != f.n || b.cols() != f.n) {
    throw Error(ErrorCode::DimensionMismatch, "factors do not match the given pair");
  }
  HorizontalProjector hp;
  // Rank decisions for B and A N are made on the scale of the pair.
  const Matrix stacked = vstack(a, b);
  const double scale = stacked.size() > 0 ? Eigen::JacobiSVD<Matrix>(stacked).singularValues()(0) : 0.0;
  const double thr = tol.threshold(scale, stacked.rows(), stacked.cols());
  const Tolerance pair_tol{0.0, thr};

  hp.null_b = null_space(b, pair_tol);
  const Matrix an = a * hp.null_b;
  const Matrix basis = orth(an, pair_tol);
  hp.p = Matrix::Identity(f.m1, f.m1) - basis * basis.transpose();
  hp.kept_dim = f.m1 - basis.cols();
  hp.route_gap = (hp.p - horizontal_projector_from_factors(f)).norm();
  return hp;
}

QuotientCheck quotient_check(const Matrix& a, const Matrix& b, const Tolerance& tol) {
  const GsvdFactors f = gsvd_decompose(a, b, tol);
  QuotientCheck qc;
  qc.gsv_finite = finite_cotangents(f);
  const HorizontalProjector hp = horizontal_projector(f, a, b, tol);
  const Matrix b_pinv = pinv(b);
  const double scale = norm2(a) * norm2(b_pinv);
  qc.sv_ab_dag = nonzero_part(singular_list(a * b_pinv), kQuotientZeroRel, scale);
  qc.sv_pab_dag = nonzero_part(singular_list(hp.p * a * b_pinv), kQuotientZeroRel, scale);
  qc.max_rel_gap = max_relative_gap(qc.gsv_finite, qc.sv_pab_dag);
  qc.agrees = qc.max_rel_gap <= kQuotientAgreeRel;
  return qc;
}

LimitCurve limit_curve(const GsvdFactors& f, double epsilon) {
  if (f.compact) {
    throw Error(ErrorCode::InvalidDimensions, "limit_curve needs full-format factors");
  }
  if (f.m2 < f.r) {
    throw Error(ErrorCode::NeedsAugmentation,
                "B has " + std::to_string(f.m2) + " rows but rank([A;B]) = " +
                    std::to_string(f.r) + "; augment B first");
  }
  if (!(epsilon > 0.0 && epsilon < std::numbers::pi / 4)) {
    throw Error(ErrorCode::DomainError, "epsilon must lie in (0, pi/4)");
  }
  Matrix cm = f.cosine_matrix();
  Matrix sm = f.sine_matrix();
  for (Index i = 0; i < f.r; ++i) {
    if (f.s[static_cast<std::size_t>(i)] > 0.0) continue;
    // The zero-sine slots take the bottom-aligned row that would hold v_i.
    const Index row = f.layout == SineLayout::Bottom ? f.m2 - f.r + i : f.r_b + i;
    if (i < cm.rows()) cm(i, i) = std::cos(epsilon);
    sm(row, i) = std::sin(epsilon);
  }
  LimitCurve lc;
  lc.epsilon = epsilon;
  lc.a_eps = f.u * cm * f.h;
  lc.b_eps = f.v * sm * f.h;
  return lc;
}

Matrix augment_rows(const Matrix& b, Index r) {
  if (r <= b.rows()) {
    throw Error(ErrorCode::NoAugmentationNeeded,
                "B already has " + std::to_string(b.rows()) + " >= " + std::to_string(r) + " rows");
  }
  Matrix out = Matrix::Zero(r, b.cols());
  out.topRows(b.rows()) = b;
  return out;
}

}  // namespace gsvdkit
