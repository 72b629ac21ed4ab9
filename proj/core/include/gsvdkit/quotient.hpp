#pragma once

// Matrix trigonometry of the GSVD and the projector-corrected relation
// between gsvd(A, B) and svd(A B^+).

#include <string>
#include <vector>

#include "gsvdkit/gsvd.hpp"

namespace gsvdkit {

struct TrigRow {
  std::string name;      // "cos", "sin", "cot", "tan"
  std::string source;    // e.g. "svd(A H^+)"
  bool applicable = true;
  std::vector<double> expected;  // from the GSVD, descending
  std::vector<double> observed;  // singular values, descending
  double max_deviation = 0.0;
};

struct TrigReport {
  std::vector<TrigRow> rows;
};

/// Checks the rows of the trigonometry table: svd(A H^+) = cosines,
/// svd(B H^+) = sines, svd(A B^+) = cotangents when r = r_b and
/// svd(B A^+) = tangents when r = r_a.
TrigReport trig_table(const GsvdFactors& f, const Matrix& a, const Matrix& b);

/// Orthogonal projector on R^{m1} that kills the horizontal directions
/// {u_i : c_i = 1} and fixes every other u_i.
struct HorizontalProjector {
  Matrix p;
  Index kept_dim = 0;          // rank of p
  Matrix null_b;               // N, orthonormal basis of null(B)
  double route_gap = 0.0;      // ||P_nullspace - P_factors||_F
};

/// Builds P as the projector onto the left nullspace of A N, and cross
/// checks it against the construction from the u_i with c_i = 1.
HorizontalProjector horizontal_projector(const GsvdFactors& f, const Matrix& a, const Matrix& b,
                                         const Tolerance& tol = {});

/// Projector built directly from the factors: I - sum_{c_i = 1} u_i u_i'.
Matrix horizontal_projector_from_factors(const GsvdFactors& f);

struct QuotientCheck {
  std::vector<double> gsv_finite;   // finite nonzero cotangents, descending
  std::vector<double> sv_pab_dag;   // nonzero singular values of P A B^+
  std::vector<double> sv_ab_dag;    // nonzero singular values of A B^+
  double max_rel_gap = 0.0;         // between gsv_finite and sv_pab_dag
  bool agrees = false;
};

/// Singular values of a quotient product X Y at or below
/// kQuotientZeroRel * ||X|| ||Y|| count as zero.
inline constexpr double kQuotientZeroRel = 1e-10;

/// Agreement threshold between the GSVD route and svd(P A B^+).
inline constexpr double kQuotientAgreeRel = 1e-9;

QuotientCheck quotient_check(const Matrix& a, const Matrix& b, const Tolerance& tol = {});

struct LimitCurve {
  double epsilon = 0.0;
  Matrix a_eps;
  Matrix b_eps;
};

/// Curve [A_e; B_e] = [U C(e); V S(e)] H where every zero sine is replaced
/// by sin(e) (and its cosine by cos(e)). Needs m2 >= r.
LimitCurve limit_curve(const GsvdFactors& f, double epsilon);

/// Appends r - rows(B) zero rows to B.
Matrix augment_rows(const Matrix& b, Index r);

/// Sorted-set comparison used throughout: both lists sorted descending,
/// gap relative to the largest magnitude present. Returns +inf on a size
/// mismatch.
double max_relative_gap(std::vector<double> x, std::vector<double> y);

}  // namespace gsvdkit
