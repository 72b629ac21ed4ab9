#pragma once

// MANOVA sampling and the Jacobi-ensemble joint density.
//
// For Gaussian A (m1 x n) and B (m2 x n) the eigenvalues of
// (A'A + B'B)^{-1} A'A are the squared GSVD cosines of (A, B) and follow
//
//   c * prod_{i<j} |l_i - l_j|^beta * prod_i l_i^(a1 - p) (1 - l_i)^(a2 - p)
//
// with a1 = beta m1 / 2, a2 = beta m2 / 2, p = 1 + beta (n - 1) / 2.

#include <cstdint>
#include <string_view>
#include <vector>

#include "gsvdkit/matcore.hpp"

namespace gsvdkit {

struct JacobiParams {
  Index m1 = 1;
  Index m2 = 1;
  Index n = 1;
  double beta = 1.0;

  double a1() const { return 0.5 * beta * static_cast<double>(m1); }
  double a2() const { return 0.5 * beta * static_cast<double>(m2); }
  double p() const { return 1.0 + 0.5 * beta * static_cast<double>(n - 1); }

  /// Shape and integrability checks; with `for_sampling` beta must be 1 or 2.
  void validate(bool for_sampling) const;
};

/// Counter-based generator: output k of stream (seed, stream) is the
/// SplitMix64 finalizer applied to key(seed, stream) + k * 0x9E3779B97F4A7C15.
/// Gaussians use Leva's ratio-of-uniforms method, so sequences are bitwise
/// reproducible across platforms.
class SeededRng {
 public:
  static constexpr std::string_view kAlgorithm = "splitmix64-counter+leva-gaussian";

  explicit SeededRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  /// Independent stream for (seed, index); does not disturb this generator.
  SeededRng substream(std::uint64_t index) const;

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  double gaussian();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Eigenvalues outside [-kManovaSlack, 1 + kManovaSlack] flag a quality
/// warning before clamping.
inline constexpr double kManovaSlack = 1e-10;

struct ManovaSample {
  std::vector<double> eigenvalues;  // ascending, clamped to [0, 1]
  bool quality_warning = false;
};

/// Draws A and B with i.i.d. standard Gaussian entries (complex for beta = 2)
/// and returns the eigenvalues of the symmetric MANOVA form.
ManovaSample sample_manova(const JacobiParams& params, SeededRng& rng);

/// Real Gaussian pair of the given shapes.
struct GaussianPair {
  Matrix a;
  Matrix b;
};
GaussianPair draw_gaussian_pair(Index m1, Index m2, Index n, SeededRng& rng);

/// Eigenvalues of S^{-1/2} A'A S^{-1/2}, S = A'A + B'B.
ManovaSample manova_eigenvalues(const Matrix& a, const Matrix& b);

/// Eigenvalues of S^{-1} A'A (real parts, ascending, unclamped).
std::vector<double> manova_eigenvalues_nonsymmetric(const Matrix& a, const Matrix& b);

/// Log of the joint density of the unordered eigenvalues at distinct points
/// of (0, 1). The result does not depend on the order of `lambdas`.
double jacobi_log_density(const JacobiParams& params, std::vector<double> lambdas);

/// Log of the normalizing constant c.
double jacobi_log_constant(const JacobiParams& params);

struct EmpiricalReport {
  JacobiParams params;
  Index n_samples = 0;
  std::uint64_t seed = 0;
  Matrix samples;                // n_samples x n, row i from substream i
  bool ks_applicable = false;    // n == 1
  double beta_a = 0.0;           // Beta(a, b) law of the single eigenvalue
  double beta_b = 0.0;
  double ks_distance = 0.0;
  double mean_trace = 0.0;
  double trace_se = 0.0;
  double expected_trace = 0.0;   // n m1 / (m1 + m2)
  double trace_z = 0.0;
  Index quality_warnings = 0;
};

/// Monte Carlo check of the sampler. Sample i always comes from
/// rng.substream(i), so the report does not depend on `threads`.
EmpiricalReport empirical_check(const JacobiParams& params, Index n_samples, const SeededRng& rng,
                                unsigned threads = 1);

}  // namespace gsvdkit
