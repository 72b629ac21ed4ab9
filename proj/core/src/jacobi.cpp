#include "gsvdkit/jacobi.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <thread>

namespace gsvdkit {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ManovaSample finish(std::vector<double> ev) {
  ManovaSample out;
  std::sort(ev.begin(), ev.end());
  for (double& x : ev) {
    if (x < -kManovaSlack || x > 1.0 + kManovaSlack || !std::isfinite(x)) out.quality_warning = true;
    x = std::clamp(x, 0.0, 1.0);
  }
  out.eigenvalues = std::move(ev);
  return out;
}

template <typename Mat>
std::vector<double> symmetric_form(const Mat& a, const Mat& b) {
  const Mat ata = a.adjoint() * a;
  const Mat s = ata + b.adjoint() * b;
  Eigen::SelfAdjointEigenSolver<Mat> es(s);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0) {
    throw Error(ErrorCode::NumericFailure, "A'A + B'B is not positive definite");
  }
  const Mat s_inv_half =
      es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
      es.eigenvectors().adjoint();
  const Mat m = s_inv_half * ata * s_inv_half;
  Eigen::SelfAdjointEigenSolver<Mat> em(Mat((m + m.adjoint()) * 0.5), Eigen::EigenvaluesOnly);
  const Vector lam = em.eigenvalues();
  return {lam.data(), lam.data() + lam.size()};
}

void require_pair(const Matrix& a, const Matrix& b) {
  require_finite(a, "A");
  require_finite(b, "B");
  if (a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "A has " + std::to_string(a.cols()) +
                                                  " columns but B has " + std::to_string(b.cols()));
  }
}

}  // namespace

void JacobiParams::validate(bool for_sampling) const {
  if (m1 < 1 || m2 < 1 || n < 1) {
    throw Error(ErrorCode::InvalidDimensions, "m1, m2 and n must be positive");
  }
  if (m1 < n || m2 < n) {
    throw Error(ErrorCode::InvalidDimensions, "need m1 >= n and m2 >= n");
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw Error(ErrorCode::DomainError, "beta must be a positive number");
  }
  if (for_sampling && beta != 1.0 && beta != 2.0) {
    throw Error(ErrorCode::UnsupportedBeta,
                "sampling supports beta = 1 or 2, got " + std::to_string(beta));
  }
  if (!(a1() - p() > -1.0) || !(a2() - p() > -1.0)) {
    throw Error(ErrorCode::DomainError, "density is not integrable for these parameters");
  }
}

SeededRng::SeededRng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), key_(mix64(seed ^ mix64(stream + kGolden))) {}

SeededRng SeededRng::substream(std::uint64_t index) const {
  return SeededRng(seed_, mix64(stream_ + kGolden) ^ index);
}

std::uint64_t SeededRng::next_u64() { return mix64(key_ + (++counter_) * kGolden); }

double SeededRng::uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double SeededRng::gaussian() {
  for (;;) {
    const double u = uniform();
    const double v = 1.7156 * (uniform() - 0.5);
    const double x = u - 0.449871;
    const double y = std::abs(v) + 0.386595;
    const double q = x * x + y * (0.19600 * y - 0.25472 * x);
    if (q < 0.27597) return v / u;
    if (q <= 0.27846 && v * v <= -4.0 * std::log(u) * u * u) return v / u;
  }
}

GaussianPair draw_gaussian_pair(Index m1, Index m2, Index n, SeededRng& rng) {
  GaussianPair g{Matrix(m1, n), Matrix(m2, n)};
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < m1; ++i) g.a(i, j) = rng.gaussian();
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < m2; ++i) g.b(i, j) = rng.gaussian();
  return g;
}

ManovaSample sample_manova(const JacobiParams& params, SeededRng& rng) {
  params.validate(true);
  if (params.beta == 1.0) {
    const GaussianPair g = draw_gaussian_pair(params.m1, params.m2, params.n, rng);
    return finish(symmetric_form(g.a, g.b));
  }
  using CMatrix = Eigen::MatrixXcd;
  const double scale = std::sqrt(0.5);
  auto draw = [&](Index rows) {
    CMatrix m(rows, params.n);
    for (Index j = 0; j < params.n; ++j)
      for (Index i = 0; i < rows; ++i) {
        const double re = rng.gaussian();
        const double im = rng.gaussian();
        m(i, j) = std::complex<double>(scale * re, scale * im);
      }
    return m;
  };
  const CMatrix a = draw(params.m1);
  const CMatrix b = draw(params.m2);
  return finish(symmetric_form(a, b));
}

ManovaSample manova_eigenvalues(const Matrix& a, const Matrix& b) {
  require_pair(a, b);
  return finish(symmetric_form(a, b));
}

std::vector<double> manova_eigenvalues_nonsymmetric(const Matrix& a, const Matrix& b) {
  require_pair(a, b);
  const Matrix ata = a.transpose() * a;
  const Matrix s = ata + b.transpose() * b;
  Eigen::LLT<Matrix> llt(s);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::NumericFailure, "A'A + B'B is not positive definite");
  }
  Eigen::EigenSolver<Matrix> es(llt.solve(ata), false);
  std::vector<double> ev;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) ev.push_back(es.eigenvalues()(i).real());
  std::sort(ev.begin(), ev.end());
  return ev;
}

double jacobi_log_constant(const JacobiParams& params) {
  params.validate(false);
  const double beta = params.beta;
  const double a1 = params.a1();
  const double a2 = params.a2();
  double log_c = 0.0;
  for (Index j = 1; j <= params.n; ++j) {
    const double shift = 0.5 * beta * static_cast<double>(params.n - j);
    log_c += std::lgamma(1.0 + 0.5 * beta) + std::lgamma(a1 + a2 - shift) -
             std::lgamma(1.0 + 0.5 * beta * static_cast<double>(j)) - std::lgamma(a1 - shift) -
             std::lgamma(a2 - shift);
  }
  return log_c;
}

double jacobi_log_density(const JacobiParams& params, std::vector<double> lambdas) {
  params.validate(false);
  if (static_cast<Index>(lambdas.size()) != params.n) {
    throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(params.n) +
                                                  " eigenvalues, got " +
                                                  std::to_string(lambdas.size()));
  }
  // Sorted so that every permutation sums in the same order.
  std::sort(lambdas.begin(), lambdas.end());
  const double ea = params.a1() - params.p();
  const double eb = params.a2() - params.p();
  double logd = jacobi_log_constant(params);
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const double li = lambdas[i];
    if (!(li > 0.0 && li < 1.0)) {
      throw Error(ErrorCode::DomainError, "eigenvalues must lie strictly inside (0, 1)");
    }
    logd += ea * std::log(li) + eb * std::log1p(-li);
    for (std::size_t j = i + 1; j < lambdas.size(); ++j) {
      const double gap = std::abs(li - lambdas[j]);
      if (gap == 0.0) throw Error(ErrorCode::DomainError, "eigenvalues must be distinct");
      logd += params.beta * std::log(gap);
    }
  }
  return logd;
}

EmpiricalReport empirical_check(const JacobiParams& params, Index n_samples, const SeededRng& rng,
                                unsigned threads) {
  params.validate(true);
  if (n_samples < 1000) {
    throw Error(ErrorCode::DomainError, "empirical check needs at least 1000 samples");
  }
  EmpiricalReport rep;
  rep.params = params;
  rep.n_samples = n_samples;
  rep.seed = rng.seed();
  rep.samples.resize(n_samples, params.n);
  std::vector<char> warned(static_cast<std::size_t>(n_samples), 0);

  auto work = [&](Index begin, Index end) {
    for (Index i = begin; i < end; ++i) {
      SeededRng sub = rng.substream(static_cast<std::uint64_t>(i));
      const ManovaSample s = sample_manova(params, sub);
      for (Index j = 0; j < params.n; ++j) rep.samples(i, j) = s.eigenvalues[static_cast<std::size_t>(j)];
      warned[static_cast<std::size_t>(i)] = s.quality_warning ? 1 : 0;
    }
  };
  const unsigned t = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n_samples)));
  if (t == 1) {
    work(0, n_samples);
  } else {
    std::vector<std::thread> pool;
    const Index chunk = (n_samples + t - 1) / t;
    for (unsigned w = 0; w < t; ++w) {
      const Index begin = std::min<Index>(n_samples, w * chunk);
      const Index end = std::min<Index>(n_samples, begin + chunk);
      pool.emplace_back(work, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  rep.quality_warnings = std::count(warned.begin(), warned.end(), 1);

  const Vector traces = rep.samples.rowwise().sum();
  const double nd = static_cast<double>(n_samples);
  rep.mean_trace = traces.mean();
  const double var = (traces.array() - rep.mean_trace).square().sum() / (nd - 1.0);
  rep.trace_se = std::sqrt(var / nd);
  rep.expected_trace = static_cast<double>(params.n * params.m1) /
                       static_cast<double>(params.m1 + params.m2);
  rep.trace_z = rep.trace_se > 0.0 ? (rep.mean_trace - rep.expected_trace) / rep.trace_se : 0.0;

  if (params.n == 1) {
    rep.ks_applicable = true;
    rep.beta_a = params.a1() - params.p() + 1.0;
    rep.beta_b = params.a2() - params.p() + 1.0;
    std::vector<double> x(rep.samples.data(), rep.samples.data() + n_samples);
    std::sort(x.begin(), x.end());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double f = boost::math::ibeta(rep.beta_a, rep.beta_b, x[i]);
      d = std::max({d, static_cast<double>(i + 1) / nd - f, f - static_cast<double>(i) / nd});
    }
    rep.ks_distance = d;
  }
  return rep;
}

}  // namespace gsvdkit
