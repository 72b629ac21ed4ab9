#pragma once

// Subspace geometry built on the GSVD: principal angles, the one-matrix
// additive split, ellipse plot data and the energy-set identities.

#include <vector>

#include "gsvdkit/gsvd.hpp"

namespace gsvdkit {

struct PrincipalAngles {
  std::vector<double> cosines;    // descending, length min(rank A1, rank A2)
  std::vector<double> reference;  // svd(Q1' Q2), descending
  Matrix vectors1;                // principal vectors in col(A1)
  Matrix vectors2;                // principal vectors in col(A2); zero where cosine = 0
  double route_gap = 0.0;
};

/// Agreement required between the GSVD route and the svd(Q1'Q2) route.
inline constexpr double kPrincipalAngleAgree = 1e-9;

/// Principal angles between col(A1) and col(A2). The returned cosines come
/// from gsvd(Y' A1, Yperp' A1) with [Y | Yperp] the Householder basis of
/// col(A2); the classical svd(Q1' Q2) is computed alongside and the two must
/// agree (NumericFailure otherwise).
PrincipalAngles principal_angles(const Matrix& a1, const Matrix& a2, const Tolerance& tol = {});

struct AdditiveSplit {
  Matrix p_part;  // Y1 U C H
  Matrix q_part;  // Y2 V S H
  Matrix y1;
  Matrix y2;
  GsvdFactors factors;  // gsvd(Y1' M, Y2' M)
};

/// M = P + Q with P in span(Y1), Q in span(Y1)^perp and P'Q = 0.
AdditiveSplit additive_split(const Matrix& m, const Matrix& y1, const Tolerance& tol = {});

struct SemiAxis {
  double length = 0.0;
  Vector direction;  // unit, or zero when length == 0
};

struct EllipseData {
  std::vector<SemiAxis> cosine_semiaxes;  // (c_i, u_i) in R^{m1}
  std::vector<SemiAxis> sine_semiaxes;    // (s_i, v_i) in R^{m2}
  Matrix sphere_points;                   // (m1 + m2) x r, columns [c_i u_i; s_i v_i]
  std::vector<double> angles;             // atan2(s_i, c_i)
};

EllipseData ellipse_data(const GsvdFactors& f);

/// Points on the planar section of the cosine (or sine) ellipse spanned by
/// semi-axes i and j: len_i d_i cos(t) + len_j d_j sin(t) on a uniform grid.
Matrix ellipse_section(const std::vector<SemiAxis>& axes, std::size_t i, std::size_t j,
                       int samples);

/// e * ||A e||^2 for a unit vector e.
Vector energy_point(const Matrix& a, const Vector& e);

/// e * ||A e||^2 / ||B e||^2 for a unit vector e.
Vector energy_point2(const Matrix& a, const Matrix& b, const Vector& e, const Tolerance& tol = {});

/// (sum x_i^2)^3 - (sum sigma_i^2 x_i^2)^2 with x in the right singular
/// basis of A (x = V' * point).
double lemniscate_residual(const Matrix& a, const Vector& x);

/// Same identity for a point given in standard coordinates.
double lemniscate_residual_point(const Matrix& a, const Vector& point);

/// ||x||^2 ||S H x||^4 - ||C H x||^4 for [A; B] = [UC; VS] H.
double lemniscate_residual2(const GsvdFactors& f, const Vector& x);

}  // namespace gsvdkit
