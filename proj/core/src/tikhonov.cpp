#include "gsvdkit/tikhonov.hpp"

#include <cmath>
#include <future>
#include <limits>
#include <string>

namespace gsvdkit {

namespace {

void require_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::DomainError, "lambda must be a finite nonnegative number");
  }
}

}  // namespace

void TikhonovProblem::validate(const Tolerance& tol) const {
  require_finite(a, "A");
  require_finite(l, "L");
  if (!b.allFinite()) throw Error(ErrorCode::NonFinite, "b contains NaN or Inf");
  if (a.cols() != l.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "A has " + std::to_string(a.cols()) +
                                                  " columns but L has " +
                                                  std::to_string(l.cols()));
  }
  if (a.rows() != b.size()) {
    throw Error(ErrorCode::DimensionMismatch, "A has " + std::to_string(a.rows()) +
                                                  " rows but b has length " +
                                                  std::to_string(b.size()));
  }
  if (a.cols() == 0) throw Error(ErrorCode::InvalidDimensions, "A has no columns");
  const Index rank = numerical_rank(a, tol);
  if (rank < a.cols()) {
    throw Error(ErrorCode::RankDeficient, "A has numerical rank " + std::to_string(rank) +
                                              " < " + std::to_string(a.cols()) +
                                              " columns; full column rank is required");
  }
}

TikhonovModel::TikhonovModel(TikhonovProblem problem, const Tolerance& tol)
    : problem_(std::move(problem)), tol_(tol) {
  problem_.validate(tol_);
  base_ = compact(gsvd_decompose(problem_.a, problem_.l, tol_));
  const Index n = problem_.a.cols();
  if (base_.r != n || base_.r_a != n) {
    throw Error(ErrorCode::RankDeficient, "A is not of full column rank relative to [A; L]");
  }
  Vector c(n);
  for (Index i = 0; i < n; ++i) c(i) = base_.c[static_cast<std::size_t>(i)];
  h0_ = c.asDiagonal() * base_.h;

  const Vector sv = Eigen::JacobiSVD<Matrix>(h0_).singularValues();
  if (sv(n - 1) <= static_cast<double>(n) * std::numeric_limits<double>::epsilon() * sv(0)) {
    throw Error(ErrorCode::SingularH, "H_0 is numerically singular");
  }
  h0_lu_.compute(h0_);
  x0_ = problem_.a.colPivHouseholderQr().solve(problem_.b);
}

LambdaFactors TikhonovModel::lambda_factors(double lambda) const {
  require_lambda(lambda);
  const Index n = base_.r;
  LambdaFactors lf;
  lf.lambda = lambda;
  lf.c_lambda.resize(static_cast<std::size_t>(n));
  lf.s_lambda.resize(static_cast<std::size_t>(n));
  Vector inv_c(n);
  for (Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double c1 = base_.c[k];
    const double s1 = base_.s[k];
    const double hyp = std::hypot(c1, lambda * s1);
    lf.c_lambda[k] = c1 / hyp;
    lf.s_lambda[k] = lambda * s1 / hyp;
    inv_c(i) = hyp / c1;
  }
  lf.h0 = h0_;
  lf.h_lambda = inv_c.asDiagonal() * h0_;
  return lf;
}

std::vector<double> TikhonovModel::damping(double lambda) const {
  require_lambda(lambda);
  std::vector<double> d(base_.c.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double tan1 = base_.s[i] / base_.c[i];
    d[i] = 1.0 / (1.0 + lambda * lambda * tan1 * tan1);
  }
  return d;
}

Vector TikhonovModel::solve(double lambda) const {
  const std::vector<double> d = damping(lambda);
  Vector y = h0_ * x0_;
  for (Index i = 0; i < y.size(); ++i) y(i) *= d[static_cast<std::size_t>(i)];
  return h0_lu_.solve(y);
}

double TikhonovModel::recompute_gap(double lambda) const {
  require_lambda(lambda);
  const GsvdFactors fresh = gsvd_decompose(problem_.a, lambda * problem_.l, tol_);
  const LambdaFactors lf = lambda_factors(lambda);
  if (fresh.c.size() != lf.c_lambda.size()) return std::numeric_limits<double>::infinity();
  double gap = 0.0;
  for (std::size_t i = 0; i < fresh.c.size(); ++i)
    gap = std::max(gap, std::abs(fresh.c[i] - lf.c_lambda[i]));
  return gap;
}

LambdaFactors lambda_factors(const TikhonovProblem& p, double lambda, const Tolerance& tol) {
  return TikhonovModel(p, tol).lambda_factors(lambda);
}

std::vector<PathPoint> solve_path(const TikhonovProblem& p, const std::vector<double>& lambdas,
                                  const Tolerance& tol) {
  for (double lambda : lambdas) require_lambda(lambda);
  const TikhonovModel model(p, tol);
  std::vector<std::future<PathPoint>> pending;
  pending.reserve(lambdas.size());
  for (double lambda : lambdas) {
    pending.push_back(std::async(std::launch::async, [&model, lambda] {
      return PathPoint{lambda, model.solve(lambda), model.damping(lambda)};
    }));
  }
  std::vector<PathPoint> out;
  out.reserve(lambdas.size());
  for (auto& fut : pending) out.push_back(fut.get());
  return out;
}

Vector direct_solve(const TikhonovProblem& p, double lambda) {
  require_lambda(lambda);
  if (p.a.cols() != p.l.cols() || p.a.rows() != p.b.size()) {
    throw Error(ErrorCode::DimensionMismatch, "inconsistent Tikhonov problem dimensions");
  }
  const Matrix stacked = vstack(p.a, lambda * p.l);
  Vector rhs = Vector::Zero(stacked.rows());
  rhs.head(p.b.size()) = p.b;
  return stacked.completeOrthogonalDecomposition().solve(rhs);
}

}  // namespace gsvdkit
