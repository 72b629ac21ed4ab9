#pragma once

// Tikhonov regularization, min ||Ax - b||^2 + lambda^2 ||Lx||^2, explained
// through the GSVD of (A, L). With the compact decomposition taken once at
// lambda = 1,
//
//   C_l = C_1 / sqrt(C_1^2 + l^2 S_1^2),   S_l = l S_1 / sqrt(C_1^2 + l^2 S_1^2),
//   H_0 = C_l H_l  for every l >= 0,
//
// and the regularized solution is x_l = H_0^{-1} C_l^2 H_0 x_0.

#include <vector>

#include "gsvdkit/gsvd.hpp"

namespace gsvdkit {

struct TikhonovProblem {
  Matrix a;
  Matrix l;
  Vector b;

  /// Checks shapes, finiteness, and that A has full column rank.
  void validate(const Tolerance& tol = {}) const;
};

struct LambdaFactors {
  double lambda = 0.0;
  std::vector<double> c_lambda;
  std::vector<double> s_lambda;
  Matrix h_lambda;  // n x n
  Matrix h0;        // C_l H_l, independent of lambda
};

/// The lambda = 1 decomposition every lambda is derived from.
class TikhonovModel {
 public:
  explicit TikhonovModel(TikhonovProblem problem, const Tolerance& tol = {});

  const TikhonovProblem& problem() const { return problem_; }
  const GsvdFactors& base() const { return base_; }
  const Matrix& h0() const { return h0_; }
  /// Least-squares solution of A x = b.
  const Vector& x0() const { return x0_; }

  LambdaFactors lambda_factors(double lambda) const;

  /// Per-direction damping cos^2(theta_l) = 1 / (1 + l^2 tan^2(theta_1)).
  std::vector<double> damping(double lambda) const;

  /// x_l = H_0^{-1} C_l^2 H_0 x_0.
  Vector solve(double lambda) const;

  /// Largest deviation between the closed-form cosines and those of a fresh
  /// decomposition of (A, lambda L).
  double recompute_gap(double lambda) const;

 private:
  TikhonovProblem problem_;
  Tolerance tol_;
  GsvdFactors base_;
  Matrix h0_;
  Eigen::PartialPivLU<Matrix> h0_lu_;
  Vector x0_;
};

struct PathPoint {
  double lambda = 0.0;
  Vector x;
  std::vector<double> damping;
};

LambdaFactors lambda_factors(const TikhonovProblem& p, double lambda, const Tolerance& tol = {});

/// Solves along a lambda grid; grid points are evaluated concurrently.
std::vector<PathPoint> solve_path(const TikhonovProblem& p, const std::vector<double>& lambdas,
                                  const Tolerance& tol = {});

/// Least-squares solution of [A; lambda L] x = [b; 0].
Vector direct_solve(const TikhonovProblem& p, double lambda);

}  // namespace gsvdkit
