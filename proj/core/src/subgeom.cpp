#include "gsvdkit/subgeom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace gsvdkit {

namespace {

void require_unit(const Vector& e, Index n) {
  if (e.size() != n) {
    throw Error(ErrorCode::DimensionMismatch,
                "direction has length " + std::to_string(e.size()) + ", expected " + std::to_string(n));
  }
  if (!e.allFinite() || std::abs(e.norm() - 1.0) > 1e-12) {
    throw Error(ErrorCode::DomainError, "direction must be a unit vector");
  }
}

}  // namespace

PrincipalAngles principal_angles(const Matrix& a1, const Matrix& a2, const Tolerance& tol) {
  require_finite(a1, "A1");
  require_finite(a2, "A2");
  if (a1.rows() != a2.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "A1 has " + std::to_string(a1.rows()) +
                                                  " rows but A2 has " + std::to_string(a2.rows()));
  }
  const Index m = a1.rows();
  PrincipalAngles pa;

  // Reference route: orthonormal bases, then svd(Q1' Q2).
  const Matrix q1 = thin_qr(a1, true, tol).q;
  const Matrix q2 = thin_qr(a2, true, tol).q;
  const Index k = std::min(q1.cols(), q2.cols());
  if (k > 0) {
    const Vector sv = Eigen::JacobiSVD<Matrix>(q1.transpose() * q2).singularValues();
    for (Index i = 0; i < k; ++i) pa.reference.push_back(std::min(sv(i), 1.0));
  }

  // GSVD route: rotate so that col(A2) is the leading coordinate block.
  const Index r2 = q2.cols();
  Matrix q_full = Matrix::Identity(m, m);
  if (a2.size() > 0) {
    Eigen::ColPivHouseholderQR<Matrix> qr(a2);
    q_full = qr.householderQ() * Matrix::Identity(m, m);
  }
  const Matrix y = q_full.leftCols(r2);
  const Matrix y_perp = q_full.rightCols(m - r2);
  const GsvdFactors f = gsvd_decompose(y.transpose() * a1, y_perp.transpose() * a1, tol);
  const Index kk = std::min(f.r, r2);
  pa.cosines.assign(f.c.begin(), f.c.begin() + kk);

  const Matrix g = f.g();
  pa.vectors1 = Matrix(m, kk);
  pa.vectors2 = Matrix::Zero(m, kk);
  for (Index i = 0; i < kk; ++i) {
    pa.vectors1.col(i) = y * g.col(i).head(r2) + y_perp * g.col(i).tail(m - r2);
    if (f.c[static_cast<std::size_t>(i)] > 0.0) pa.vectors2.col(i) = y * f.u.col(i);
  }

  pa.route_gap = pa.cosines.size() == pa.reference.size()
                     ? 0.0
                     : std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < std::min(pa.cosines.size(), pa.reference.size()); ++i)
    pa.route_gap = std::max(pa.route_gap, std::abs(pa.cosines[i] - pa.reference[i]));
  if (!(pa.route_gap <= kPrincipalAngleAgree)) {
    throw Error(ErrorCode::NumericFailure,
                "principal-angle routes disagree by " + std::to_string(pa.route_gap));
  }
  return pa;
}

AdditiveSplit additive_split(const Matrix& m, const Matrix& y1, const Tolerance& tol) {
  require_finite(m, "M");
  require_finite(y1, "Y1");
  if (y1.rows() != m.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "Y1 has " + std::to_string(y1.rows()) +
                                                  " rows but M has " + std::to_string(m.rows()));
  }
  const Index k = y1.cols();
  if ((y1.transpose() * y1 - Matrix::Identity(k, k)).norm() > 1e-10) {
    throw Error(ErrorCode::NotOrthonormal, "Y1 does not have orthonormal columns");
  }
  AdditiveSplit out;
  out.y1 = y1;
  out.y2 = complete_orthonormal(y1).rightCols(m.rows() - k);
  out.factors = gsvd_decompose(y1.transpose() * m, out.y2.transpose() * m, tol);
  out.p_part = y1 * out.factors.a();
  out.q_part = out.y2 * out.factors.b();
  return out;
}

EllipseData ellipse_data(const GsvdFactors& f) {
  EllipseData ed;
  ed.sphere_points = Matrix::Zero(f.u.rows() + f.v.rows(), f.r);
  for (Index i = 0; i < f.r; ++i) {
    const auto k = static_cast<std::size_t>(i);
    SemiAxis cu{f.c[k], Vector::Zero(f.u.rows())};
    if (f.c[k] > 0.0) cu.direction = f.u.col(i);
    SemiAxis sv{f.s[k], Vector::Zero(f.v.rows())};
    if (f.v_col_of[k] >= 0) sv.direction = f.v.col(f.v_col_of[k]);
    ed.sphere_points.col(i).head(f.u.rows()) = cu.length * cu.direction;
    ed.sphere_points.col(i).tail(f.v.rows()) = sv.length * sv.direction;
    ed.cosine_semiaxes.push_back(std::move(cu));
    ed.sine_semiaxes.push_back(std::move(sv));
  }
  ed.angles = angles(f);
  return ed;
}

Matrix ellipse_section(const std::vector<SemiAxis>& axes, std::size_t i, std::size_t j,
                       int samples) {
  if (i >= axes.size() || j >= axes.size() || samples < 1) {
    throw Error(ErrorCode::InvalidDimensions, "semi-axis index out of range");
  }
  const Index dim = axes[i].direction.size();
  Matrix pts(dim, samples);
  for (int k = 0; k < samples; ++k) {
    const double t = 2.0 * std::numbers::pi * k / samples;
    pts.col(k) = axes[i].length * std::cos(t) * axes[i].direction +
                 axes[j].length * std::sin(t) * axes[j].direction;
  }
  return pts;
}

Vector energy_point(const Matrix& a, const Vector& e) {
  require_unit(e, a.cols());
  return e * (a * e).squaredNorm();
}

Vector energy_point2(const Matrix& a, const Matrix& b, const Vector& e, const Tolerance& tol) {
  if (a.cols() != b.cols()) throw Error(ErrorCode::DimensionMismatch, "A and B column counts differ");
  require_unit(e, a.cols());
  const double be = (b * e).norm();
  const double scale = b.size() > 0 ? Eigen::JacobiSVD<Matrix>(b).singularValues()(0) : 0.0;
  if (!(be > tol.threshold(scale, b.rows(), b.cols())) || be == 0.0) {
    throw Error(ErrorCode::ZeroDenominator, "||B e|| vanishes for this direction");
  }
  return e * ((a * e).squaredNorm() / (be * be));
}

double lemniscate_residual(const Matrix& a, const Vector& x) {
  if (x.size() != a.cols()) throw Error(ErrorCode::DimensionMismatch, "x length must equal cols(A)");
  const Vector sigma = a.size() > 0 ? Vector(Eigen::JacobiSVD<Matrix>(a).singularValues()) : Vector(0);
  double sx = 0.0;
  for (Index i = 0; i < sigma.size(); ++i) sx += sigma(i) * sigma(i) * x(i) * x(i);
  const double nx = x.squaredNorm();
  return nx * nx * nx - sx * sx;
}

double lemniscate_residual_point(const Matrix& a, const Vector& point) {
  const SvdFactors svd = full_svd(a);
  return lemniscate_residual(a, svd.v.transpose() * point);
}

double lemniscate_residual2(const GsvdFactors& f, const Vector& x) {
  if (x.size() != f.n) throw Error(ErrorCode::DimensionMismatch, "x length must equal n");
  const Vector hx = f.h * x;
  double ch = 0.0;
  double sh = 0.0;
  for (Index i = 0; i < f.r; ++i) {
    const auto k = static_cast<std::size_t>(i);
    ch += f.c[k] * f.c[k] * hx(i) * hx(i);
    sh += f.s[k] * f.s[k] * hx(i) * hx(i);
  }
  return x.squaredNorm() * sh * sh - ch * ch;
}

}  // namespace gsvdkit
