#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "gsvdkit/stats.hpp"
#include "support/gen.hpp"

namespace {

using namespace gsvdkit;
using gsvdkit::testing::gaussian;
using gsvdkit::testing::uniform_int;

template <typename F>
void expect_code(ErrorCode code, F&& fn) {
  try {
    fn();
    FAIL() << "no exception";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code);
  }
}

std::vector<Index> random_partition(SeededRng& rng) {
  std::vector<Index> part(static_cast<std::size_t>(uniform_int(rng, 2, 5)));
  for (Index& x : part) x = uniform_int(rng, 1, 6);
  return part;
}

// Textbook sums of squares from the group means.
struct Textbook {
  double between = 0.0;
  double within = 0.0;
};

Textbook textbook_ss(const std::vector<Index>& part, const Vector& v) {
  Textbook t;
  const double grand = v.mean();
  Index row = 0;
  for (Index size : part) {
    const double mean = v.segment(row, size).mean();
    t.between += static_cast<double>(size) * (mean - grand) * (mean - grand);
    t.within += (v.segment(row, size).array() - mean).square().sum();
    row += size;
  }
  return t;
}

TEST(ClusterDesign, ShapesAndSplit) {
  const ClusterDesign d = cluster_design({2, 3, 1});
  EXPECT_EQ(d.p, 6);
  EXPECT_EQ(d.k, 3);
  EXPECT_EQ(d.indicator.rows(), 6);
  EXPECT_EQ(d.indicator.col(1).sum(), 3.0);
  EXPECT_EQ(d.constraint.rows(), 2);
  EXPECT_NEAR(d.y1(2, 1), 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_TRUE((d.u_split.transpose() * d.u_split).isIdentity(1e-12));
  EXPECT_LE((d.u1() - Vector::Constant(6, 1.0 / std::sqrt(6.0))).norm(), 1e-13);
}

// U2 U2' is the between-cluster (Helmert-type contrast) projector and U3 U3'
// the within-cluster one.
TEST(ClusterDesign, ProjectorOracle) {
  SeededRng rng(61);
  for (int t = 0; t < 50; ++t) {
    const ClusterDesign d = cluster_design(random_partition(rng));
    const Matrix pc = d.y1 * d.y1.transpose();
    const Matrix ones = Matrix::Constant(d.p, d.p, 1.0 / static_cast<double>(d.p));
    const Matrix u2 = d.u2();
    const Matrix u3 = d.u3();
    EXPECT_LE((u2 * u2.transpose() - (pc - ones)).norm(), 1e-12);
    EXPECT_LE((u3 * u3.transpose() - (Matrix::Identity(d.p, d.p) - pc)).norm(), 1e-12);
  }
}

TEST(ClusterDesign, RejectsBadPartitions) {
  expect_code(ErrorCode::InvalidPartition, [] { cluster_design({3}); });
  expect_code(ErrorCode::InvalidPartition, [] { cluster_design({2, 0}); });
}

TEST(Anova, TextbookOracle) {
  SeededRng rng(62);
  for (int t = 0; t < 100; ++t) {
    std::vector<Index> part = random_partition(rng);
    part[0] += 1;  // at least one within-cluster degree of freedom
    const ClusterDesign d = cluster_design(part);
    const Vector v = gaussian(d.p, 1, rng);
    const AnovaReport rep = anova_f(d, v);
    const Textbook tb = textbook_ss(part, v);
    EXPECT_NEAR(rep.between_norm_sq, tb.between, 1e-12 * v.squaredNorm());
    EXPECT_NEAR(rep.within_norm_sq, tb.within, 1e-12 * v.squaredNorm());
    EXPECT_EQ(rep.df_between, d.k - 1);
    EXPECT_EQ(rep.df_within, d.p - d.k);
    const double f = (tb.between / static_cast<double>(d.k - 1)) / (tb.within / static_cast<double>(d.p - d.k));
    EXPECT_NEAR(rep.f_value, f, 1e-9 * std::max(1.0, f));
  }
}

TEST(Anova, DegenerateVectors) {
  const ClusterDesign d = cluster_design({2, 3});
  EXPECT_EQ(anova_f(d, Vector::Constant(5, 7.0)).f_value, 0.0);
  Vector pattern(5);
  pattern << 1, 1, 4, 4, 4;
  expect_code(ErrorCode::ZeroWithin, [&] { anova_f(d, pattern); });
  expect_code(ErrorCode::ZeroWithin, [] { anova_f(cluster_design({1, 1}), Vector::Ones(2) + Vector::Unit(2, 0)); });
  expect_code(ErrorCode::DimensionMismatch, [&] { anova_f(d, Vector::Ones(4)); });
}

TEST(Apportion, AnglesAndLabels) {
  Matrix a = Matrix::Zero(3, 3);
  Matrix b = Matrix::Zero(3, 3);
  a(0, 0) = 1.0;                       // A only
  a(1, 1) = 1.0, b(1, 1) = 1.0;        // balanced
  b(2, 2) = 1.0;                       // B only
  const Apportionment ap = apportion(gsvd_decompose(a, b));
  ASSERT_EQ(ap.labels.size(), 3u);
  EXPECT_EQ(ap.labels[0], Attribution::ADominant);
  EXPECT_EQ(ap.labels[1], Attribution::Mixed);
  EXPECT_EQ(ap.labels[2], Attribution::BDominant);
  EXPECT_NEAR(ap.angles[1], std::numbers::pi / 4, 1e-15);
  EXPECT_EQ(to_string(ap.labels[1]), "mixed");
  EXPECT_GE(ap.h_condition, 1.0);

  const Apportionment all_mixed = apportion(gsvd_decompose(a, b), 0.0, std::numbers::pi / 2);
  for (Attribution l : all_mixed.labels) EXPECT_EQ(l, Attribution::Mixed);
  expect_code(ErrorCode::DomainError, [&] { apportion(gsvd_decompose(a, b), 1.0, 0.5); });

  SeededRng rng(63);
  const Apportionment unit = apportion(gsvd_decompose(gaussian(4, 3, rng), gaussian(5, 3, rng)),
                                       kDefaultThetaLo, kDefaultThetaHi, true);
  for (Index i = 0; i < unit.rows.rows(); ++i) EXPECT_NEAR(unit.rows.row(i).norm(), 1.0, 1e-14);
}

TEST(ReconstructTerms, MatchesRankReduce) {
  SeededRng rng(64);
  for (int t = 0; t < 30; ++t) {
    const Matrix a = gaussian(uniform_int(rng, 1, 6), 4, rng);
    const Matrix b = gaussian(uniform_int(rng, 1, 6), 4, rng);
    const GsvdFactors f = gsvd_decompose(a, b);
    for (Index k = 0; k <= f.r; ++k) {
      const RankReduced x = reconstruct_terms(f, k);
      const RankReduced y = rank_reduce(f, a, b, k);
      EXPECT_LE((x.a - y.a).norm(), 1e-12 * std::max(1.0, a.norm()));
      EXPECT_LE((x.b - y.b).norm(), 1e-12 * std::max(1.0, b.norm()));
    }
    expect_code(ErrorCode::RankOutOfRange, [&] { reconstruct_terms(f, f.r + 1); });
  }
}

Matrix projector(const Matrix& m) {
  const Matrix q = orth(m);
  return q * q.transpose();
}

TEST(Discriminant, ShapesAndRoutes) {
  SeededRng rng(65);
  for (int t = 0; t < 30; ++t) {
    const std::vector<Index> part{4, 5, 3};
    const ClusterDesign d = cluster_design(part);
    const Matrix m = gaussian(d.p, uniform_int(rng, 3, 6), rng);
    const DiscriminantReduction slow = discriminant_reduce(m, d);
    const DiscriminantReduction fast = discriminant_reduce(m, d, {}, true);
    EXPECT_EQ(slow.g.cols(), d.k - 1);
    EXPECT_EQ(slow.mg.rows(), d.p);
    EXPECT_LE((slow.mg - m * slow.g).norm(), 1e-12 * slow.mg.norm());
    EXPECT_LE((projector(slow.g) - projector(fast.g)).norm(), 1e-8);
    EXPECT_TRUE((fast.g.transpose() * fast.g).isIdentity(1e-12));
  }
}

TEST(Discriminant, ClusterConstantRows) {
  SeededRng rng(66);
  const std::vector<Index> part{2, 3, 2};
  const ClusterDesign d = cluster_design(part);
  const Matrix centers = gaussian(3, 4, rng);
  const Matrix m = d.indicator * centers;
  const DiscriminantReduction red = discriminant_reduce(m, d);
  EXPECT_EQ(red.mg.cols(), 2);
  Index row = 0;
  for (Index size : part) {
    for (Index i = 1; i < size; ++i)
      EXPECT_LE((red.mg.row(row + i) - red.mg.row(row)).norm(), 1e-12 * red.mg.norm());
    row += size;
  }
}

TEST(Discriminant, Errors) {
  const ClusterDesign d = cluster_design({2, 2});
  expect_code(ErrorCode::DimensionMismatch, [&] { discriminant_reduce(Matrix::Ones(5, 2), d); });
  expect_code(ErrorCode::DegenerateData, [&] { discriminant_reduce(Matrix::Zero(4, 2), d); });
}

}  // namespace
