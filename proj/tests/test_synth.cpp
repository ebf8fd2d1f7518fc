#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "spca/error.hpp"
#include "spca/linalg.hpp"
#include "spca/synth.hpp"

using namespace spca;

TEST(GroundTruth, ExperimentOneShape) {
  const GroundTruth gt = generate_ground_truth(100, 10, 20.0, 7);
  EXPECT_EQ(gt.support.size(), 10u);
  EXPECT_EQ(gt.eigenvalues[0] - gt.eigenvalues[1], 20.0);
  const auto u = gt.u1();
  const double floor = 1.0 / (2.0 * std::sqrt(10.0));
  for (std::size_t i = 0; i < 100; ++i) {
    const bool in = std::binary_search(gt.support.begin(), gt.support.end(), i);
    if (in) EXPECT_GE(std::abs(u[i]), floor);
    else EXPECT_EQ(u[i], 0.0);
  }
  EXPECT_NEAR(norm2(u), 1.0, 1e-14);
}

TEST(GroundTruth, EigenvectorsOrthonormalAndReconstruct) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const GroundTruth gt = generate_ground_truth(30, 1 + seed % 30, 5.0, seed);
    const Matrix utu = gt.eigenvectors.transposed() * gt.eigenvectors;
    for (std::size_t i = 0; i < 30; ++i)
      for (std::size_t j = 0; j < 30; ++j) EXPECT_NEAR(utu(i, j), i == j ? 1.0 : 0.0, 1e-10);
    SymMatrix rec(30);
    for (std::size_t k = 0; k < 30; ++k) {
      const auto v = gt.eigenvectors.column(k);
      rec += SymMatrix::outer(v) * gt.eigenvalues[k];
    }
    EXPECT_LE(frobenius_distance(rec, gt.m_star), 1e-9);
    EXPECT_TRUE(std::is_sorted(gt.eigenvalues.rbegin(), gt.eigenvalues.rend()));
  }
}

TEST(GroundTruth, DenseSupportWhenSEqualsD) {
  const GroundTruth gt = generate_ground_truth(8, 8, 3.0, 1);
  EXPECT_EQ(gt.support, (IndexSet{0, 1, 2, 3, 4, 5, 6, 7}));
}

TEST(GroundTruth, LeadingEigenpairOfMStarIsPlanted) {
  const GroundTruth gt = generate_ground_truth(40, 6, 20.0, 11);
  const auto e = oracle::jacobi(oracle::to_dense(gt.m_star));
  EXPECT_NEAR(e.values[0], gt.eigenvalues[0], 1e-10);
  const auto u = gt.u1();
  double ip = 0.0;
  for (std::size_t i = 0; i < 40; ++i) ip += e.vectors[i][0] * u[i];
  EXPECT_NEAR(std::abs(ip), 1.0, 1e-12);
}

TEST(GroundTruth, DeterministicInSeed) {
  const GroundTruth a = generate_ground_truth(25, 5, 20.0, 99);
  const GroundTruth b = generate_ground_truth(25, 5, 20.0, 99);
  const GroundTruth c = generate_ground_truth(25, 5, 20.0, 100);
  EXPECT_EQ(a.m_star, b.m_star);
  EXPECT_EQ(a.support, b.support);
  EXPECT_NE(a.m_star, c.m_star);
}

TEST(GroundTruth, RejectsInvalidShapes) {
  EXPECT_THROW(generate_ground_truth(5, 6, 1.0, 0), InvalidInput);
  EXPECT_THROW(generate_ground_truth(5, 0, 1.0, 0), InvalidInput);
  EXPECT_THROW(generate_ground_truth(5, 2, 0.0, 0), InvalidInput);
}

TEST(GroundTruth, FromMatrixReadsSupport) {
  std::vector<double> u{0.0, 0.6, 0.0, -0.8};
  const SymMatrix m = SymMatrix::outer(u) * 3.0;
  const GroundTruth gt = ground_truth_from_matrix(m);
  EXPECT_EQ(gt.support, (IndexSet{1, 3}));
  EXPECT_NEAR(gt.eigenvalues[0], 3.0, 1e-14);
  const auto signs = gt.u1_signs();
  EXPECT_EQ(signs.size(), 2u);
  EXPECT_EQ(signs[0] * signs[1], -1.0);
}

TEST(Noise, TruncatedVarianceClosedForm) {
  EXPECT_NEAR((NoiseSpec{5.0, 0.1}.variance()), 0.01, 1e-15);
  EXPECT_EQ((NoiseSpec{0.0, 1.0}.variance()), 0.0);
  // B = sigma: 1 - 2 phi(1) / erf(1/sqrt2) = 0.29112509...
  EXPECT_NEAR((NoiseSpec{1.0, 1.0}.variance()), 0.2911250947, 1e-9);
}

TEST(Observation, CompleteNoiselessEqualsTruth) {
  const GroundTruth gt = generate_ground_truth(20, 4, 10.0, 2);
  const Observation obs = sample_observation(gt, 1.0, NoiseSpec{0.0, 0.1}, 3);
  EXPECT_EQ(obs.m, gt.m_star);
  EXPECT_DOUBLE_EQ(obs.mask.observed_fraction(), 1.0);
  const auto e = sym_eig(obs.m);
  EXPECT_NEAR(e.values[0], gt.eigenvalues[0], 1e-8);
  const auto u = gt.u1();
  EXPECT_NEAR(std::abs(dot(e.vector(0), u)), 1.0, 1e-8);
}

TEST(Observation, VanishingPIsEmpty) {
  const GroundTruth gt = generate_ground_truth(20, 4, 10.0, 2);
  const Observation obs = sample_observation(gt, 1e-12, NoiseSpec{5.0, 0.1}, 3);
  EXPECT_EQ(obs.m, SymMatrix(20));
  EXPECT_EQ(obs.mask.observed_fraction(), 0.0);
}

TEST(Observation, BinomialConcentration) {
  const GroundTruth gt = generate_ground_truth(100, 10, 20.0, 5);
  const Observation obs = sample_observation(gt, 0.7, NoiseSpec{5.0, 0.1}, 6);
  const double n = 100.0 * 101.0 / 2.0;
  EXPECT_NEAR(obs.mask.observed_fraction_upper(), 0.7, 3.0 * std::sqrt(0.7 * 0.3 / n));
}

TEST(Observation, ZeroWhereUnobservedAndSymmetric) {
  const GroundTruth gt = generate_ground_truth(30, 5, 20.0, 8);
  const Observation obs = sample_observation(gt, 0.4, NoiseSpec{5.0, 0.5}, 9);
  for (std::size_t i = 0; i < 30; ++i)
    for (std::size_t j = 0; j < 30; ++j) {
      EXPECT_EQ(obs.mask(i, j), obs.mask(j, i));
      if (!obs.mask(i, j)) EXPECT_EQ(obs.m(i, j), 0.0);
      else EXPECT_LE(std::abs(obs.m(i, j) - gt.m_star(i, j)), 5.0);
    }
}

TEST(Observation, ReproducibleAndNestedInP) {
  const GroundTruth gt = generate_ground_truth(30, 5, 20.0, 8);
  const Observation a = sample_observation(gt, 0.5, NoiseSpec{5.0, 0.1}, 1);
  const Observation b = sample_observation(gt, 0.5, NoiseSpec{5.0, 0.1}, 1);
  EXPECT_EQ(a.m, b.m);
  EXPECT_EQ(a.mask, b.mask);
  const Observation c = sample_observation(gt, 0.8, NoiseSpec{5.0, 0.1}, 1);
  for (std::size_t i = 0; i < 30; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      if (a.mask(i, j)) {
        EXPECT_TRUE(c.mask(i, j));
        EXPECT_EQ(a.m(i, j), c.m(i, j));
      }
}

TEST(Observation, RejectsPOutsideUnitInterval) {
  const GroundTruth gt = generate_ground_truth(5, 2, 1.0, 0);
  EXPECT_THROW(sample_observation(gt, 0.0, NoiseSpec{}, 0), InvalidInput);
  EXPECT_THROW(sample_observation(gt, 1.5, NoiseSpec{}, 0), InvalidInput);
}

TEST(Observation, EmpiricalNoiseVarianceWithinOnePercent) {
  // Noise on a zero truth with p = 1: every entry of M is a noise draw.
  const std::size_t d = 1414;  // d(d+1)/2 ~ 1.0e6 draws
  const NoiseSpec noise{0.15, 0.1};
  const Observation obs = sample_observation(SymMatrix(d), 1.0, noise, 12345);
  double sum = 0.0, sq = 0.0;
  for (double v : obs.m.packed()) {
    ASSERT_LE(std::abs(v), noise.bound);
    sum += v;
    sq += v * v;
  }
  const double n = static_cast<double>(obs.m.packed().size());
  EXPECT_NEAR(sum / n, 0.0, 5e-4);
  EXPECT_NEAR(sq / n / noise.variance(), 1.0, 0.01);
}

TEST(DeriveSeed, DistinctKeysGiveDistinctStreams) {
  EXPECT_EQ(derive_seed(1, {2, 3}), derive_seed(1, {2, 3}));
  EXPECT_NE(derive_seed(1, {2, 3}), derive_seed(1, {3, 2}));
  EXPECT_NE(derive_seed(1, {2, 3}), derive_seed(2, {2, 3}));
  EXPECT_NE(derive_seed(1, {}), derive_seed(1, {0}));
}

TEST(Covariance, CompleteTableIsSampleCovariance) {
  DataTable t;
  t.column_names = {"a", "b", "c"};
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n01;
  for (int r = 0; r < 12; ++r) t.rows.push_back({n01(rng), n01(rng), n01(rng)});
  const auto cov = incomplete_covariance(t);
  EXPECT_EQ(cov.observed_fraction, 1.0);
  for (std::size_t j = 0; j < 3; ++j)
    for (std::size_t k = 0; k < 3; ++k) {
      double mj = 0, mk = 0;
      for (const auto& row : t.rows) mj += *row[j], mk += *row[k];
      mj /= 12, mk /= 12;
      double c = 0;
      for (const auto& row : t.rows) c += (*row[j] - mj) * (*row[k] - mk);
      EXPECT_NEAR(cov.cov(j, k), c / 11.0, 1e-13);
      EXPECT_TRUE(cov.mask(j, k));
    }
}

TEST(Covariance, DisjointColumnsAreMasked) {
  DataTable t;
  t.column_names = {"a", "b"};
  t.rows = {{1.0, std::nullopt}, {2.0, std::nullopt}, {std::nullopt, 3.0}, {std::nullopt, 5.0}};
  const auto cov = incomplete_covariance(t);
  EXPECT_FALSE(cov.mask(0, 1));
  EXPECT_EQ(cov.cov(0, 1), 0.0);
  EXPECT_TRUE(cov.mask(0, 0));
  EXPECT_DOUBLE_EQ(cov.cov(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(cov.cov(1, 1), 2.0);
  EXPECT_DOUBLE_EQ(cov.observed_fraction, 0.5);
}

TEST(Covariance, EmptyColumnReportedAndMasked) {
  DataTable t;
  t.column_names = {"a", "b", "c"};
  t.rows = {{1.0, std::nullopt, 2.0}, {2.0, std::nullopt, 1.0}, {4.0, std::nullopt, 0.0}};
  const auto cov = incomplete_covariance(t);
  EXPECT_EQ(cov.empty_columns, (std::vector<std::size_t>{1}));
  for (std::size_t k = 0; k < 3; ++k) EXPECT_FALSE(cov.mask(1, k));
}

TEST(Covariance, ShapeOfWideTable) {
  DataTable t;
  std::mt19937_64 rng(56);
  std::normal_distribution<double> n01;
  std::uniform_real_distribution<double> u01;
  for (int j = 0; j < 112; ++j) t.column_names.push_back("g" + std::to_string(j));
  for (int r = 0; r < 56; ++r) {
    std::vector<std::optional<double>> row(112);
    for (auto& c : row)
      if (u01(rng) > 0.07) c = n01(rng);
    t.rows.push_back(row);
  }
  const auto cov = incomplete_covariance(t);
  EXPECT_EQ(cov.cov.dim(), 112u);
  EXPECT_GT(cov.observed_fraction, 0.99);
  EXPECT_LE(cov.observed_fraction, 1.0);
}

TEST(Covariance, RejectsTooFewRows) {
  DataTable t;
  t.column_names = {"a"};
  t.rows = {{1.0}};
  EXPECT_THROW(incomplete_covariance(t), InvalidInput);
}
