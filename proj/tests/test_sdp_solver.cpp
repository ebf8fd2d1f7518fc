#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "spca/error.hpp"
#include "spca/linalg.hpp"
#include "spca/sdp_solver.hpp"
#include "spca/synth.hpp"
#include "spca/witness.hpp"

using namespace spca;

namespace {

SdpConfig config(double rho, double tol = 1e-6) {
  SdpConfig c;
  c.rho = rho;
  c.tol_primal = c.tol_dual = tol;
  return c;
}

SymMatrix random_sym(std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return oracle::to_sym(oracle::random_symmetric(d, rng));
}

}  // namespace

TEST(SdpConfig, ValidatesFields) {
  SdpConfig c;
  EXPECT_NO_THROW(c.validate());
  c.rho = -1.0;
  EXPECT_THROW(c.validate(), InvalidInput);
  c = SdpConfig{};
  c.tau = 0.0;
  EXPECT_THROW(c.validate(), InvalidInput);
  c = SdpConfig{};
  c.eta_support = 1.0;
  EXPECT_THROW(c.validate(), InvalidInput);
  c = SdpConfig{};
  c.tol_primal = 0.0;
  EXPECT_THROW(c.validate(), InvalidInput);
  c = SdpConfig{};
  c.max_iter = 0;
  EXPECT_THROW(c.validate(), InvalidInput);
}

TEST(Solve, UnpenalizedIsLeadingEigenprojector) {
  const GroundTruth gt = generate_ground_truth(30, 5, 5.0, 4);
  const SdpSolution sol = solve(gt.m_star, config(0.0));
  ASSERT_TRUE(sol.converged);
  EXPECT_LE(frobenius_distance(sol.x_hat, SymMatrix::outer(gt.u1())), 1e-4);
  EXPECT_NEAR(sol.objective, gt.eigenvalues[0], 1e-6);
  EXPECT_GE(inner(gt.m_star, sol.x_hat), lambda_max(gt.m_star) - 1e-6);
}

TEST(Solve, MatchesSaddleOracleOnSmallInstances) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const SymMatrix m = random_sym(4, 70 + seed);
    const SdpSolution sol = solve(m, config(0.2));
    ASSERT_TRUE(sol.converged);
    const auto o = oracle::saddle_sdp(oracle::to_dense(m), 0.2, 1000000, 1e-9);
    ASSERT_LE(o.upper - o.lower, 1e-6) << "oracle did not close its gap";
    EXPECT_GE(sol.objective, o.lower - 1e-5);
    EXPECT_LE(sol.objective, o.upper + 1e-5);
  }
}

TEST(Solve, FeasibilityAtConvergence) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const GroundTruth gt = generate_ground_truth(25, 5, 20.0, seed);
    const Observation obs = sample_observation(gt, 0.3 + 0.1 * static_cast<double>(seed), NoiseSpec{5.0, 0.1}, seed);
    const SdpConfig cfg = config(0.1);
    const SdpSolution sol = solve(obs.m, cfg);
    ASSERT_TRUE(sol.converged);
    EXPECT_GE(lambda_min(sol.x_hat), -1e-8);
    EXPECT_NEAR(sol.x_hat.trace(), 1.0, 1e-8);
    EXPECT_LE(sol.primal_residual, cfg.tol_primal);
    EXPECT_LE(sol.dual_residual, cfg.tol_dual);
    EXPECT_LE(sol.merit_drift, cfg.tol_primal);
    EXPECT_EQ(sol.support, extract_support(sol.x_hat, cfg.eta_support));
    EXPECT_NEAR(sol.objective, sdp_objective(obs.m, sol.x_hat, 0.1), 1e-12);
  }
}

TEST(Solve, ScalingCovariance) {
  const GroundTruth gt = generate_ground_truth(20, 4, 20.0, 5);
  const Observation obs = sample_observation(gt, 0.8, NoiseSpec{5.0, 0.1}, 5);
  const SdpSolution base = solve(obs.m, config(0.1, 1e-10));
  ASSERT_TRUE(base.converged);
  for (double c : {0.1, 3.7, 100.0}) {
    SdpConfig cfg = config(0.1 * c, 1e-10);
    cfg.max_iter = 100000;
    const SdpSolution sc = solve(obs.m * c, cfg);
    ASSERT_TRUE(sc.converged);
    EXPECT_LE(frobenius_distance(sc.x_hat, base.x_hat), 1e-6) << "c = " << c;
    EXPECT_EQ(sc.support, base.support);
  }
}

TEST(Solve, ExperimentOneConfigurationRecoversOnMajority) {
  int recovered = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const GroundTruth gt = generate_ground_truth(100, 10, 20.0, 1000 + seed);
    const Observation obs = sample_observation(gt, 0.9, NoiseSpec{5.0, 0.1}, 2000 + seed);
    const SdpSolution sol = solve(obs.m, config(0.1));
    recovered += sol.converged && sol.support == gt.support;
  }
  EXPECT_GT(recovered, 15);
}

TEST(Solve, IterationCapReportsUnconverged) {
  SdpConfig cfg = config(0.1);
  cfg.max_iter = 2;
  const SdpSolution sol = solve(random_sym(10, 1), cfg);
  EXPECT_FALSE(sol.converged);
  EXPECT_EQ(sol.iterations, 2u);
}

TEST(Solve, Deterministic) {
  const SymMatrix m = random_sym(15, 3);
  const SdpSolution a = solve(m, config(0.3));
  const SdpSolution b = solve(m, config(0.3));
  EXPECT_EQ(a.x_hat, b.x_hat);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(ExtractSupport, Examples) {
  std::vector<double> u(6, 0.0);
  u[1] = 0.3;
  u[2] = -0.5;
  u[4] = std::sqrt(1.0 - 0.09 - 0.25);
  EXPECT_EQ(extract_support(SymMatrix::outer(u), 1e-3), (IndexSet{1, 2, 4}));
  EXPECT_TRUE(extract_support(SymMatrix(4), 1e-3).empty());
  SymMatrix x(3);
  x.set(0, 0, 0.5);
  x.set(1, 1, 1e-5);
  x.set(2, 2, 0.4999);
  EXPECT_EQ(extract_support(x, 1e-3), (IndexSet{0, 2}));
}

TEST(ExtractSupport, MonotoneInEta) {
  const SymMatrix x = project_spectraplex(random_sym(12, 4));
  IndexSet prev = extract_support(x, 0.0);
  for (double eta : {1e-6, 1e-4, 1e-3, 1e-2, 0.1, 0.5}) {
    const IndexSet cur = extract_support(x, eta);
    EXPECT_TRUE(std::includes(prev.begin(), prev.end(), cur.begin(), cur.end()));
    prev = cur;
  }
}

class KktOnWitness : public ::testing::Test {
 protected:
  void SetUp() override {
    const GroundTruth base = generate_ground_truth(12, 4, 10.0, 3);
    m = SymMatrix::outer(base.u1()) * 10.0;
    gt = ground_truth_from_matrix(m);
    t = construct(m, gt.support, gt.u1_signs(), rho);
    ASSERT_TRUE(check(t, m, gt.support, gt.u1_signs()).certified);
    x = witness_primal(t, 12);
    z = witness_dual(t, 12);
  }
  double rho = 0.05;
  SymMatrix m;
  GroundTruth gt;
  WitnessTriple t;
  SymMatrix x, z;
};

TEST_F(KktOnWitness, AllConditionsPass) {
  const KktReport r = kkt_check(m, x, z, t.lambda_hat, gt.support, rho, 1e-9);
  ASSERT_EQ(r.conditions.size(), 7u);
  for (const auto& c : r.conditions) EXPECT_TRUE(c.pass) << c.name << " residual " << c.residual;
  EXPECT_TRUE(r.pass);
}

TEST_F(KktOnWitness, OffSupportUnitEntryFailsStrictFeasibility) {
  const IndexSet jc = complement(gt.support, 12);
  SymMatrix z2 = z;
  z2.set(jc[0], gt.support[0], 1.0);
  const KktReport r = kkt_check(m, x, z2, t.lambda_hat, gt.support, rho, 1e-9);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.conditions[4].name, "strict_dual_off_support");
  EXPECT_FALSE(r.conditions[4].pass);
}

TEST_F(KktOnWitness, LoweredMuFailsDualBound) {
  const KktReport r = kkt_check(m, x, z, t.lambda_hat - 1.0, gt.support, rho, 1e-9);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.conditions[2].name, "full_dual_bound");
  EXPECT_FALSE(r.conditions[2].pass);
  EXPECT_NEAR(r.conditions[2].residual, 1.0, 1e-9);
  EXPECT_FALSE(r.conditions[1].pass);
}

TEST(Kkt, SolverOutputSatisfiesConditionsOnCertifiedInstance) {
  const GroundTruth gt = generate_ground_truth(20, 4, 20.0, 17);
  const Observation obs = sample_observation(gt, 1.0, NoiseSpec{0.0, 0.0}, 1);
  const double rho = 0.1;
  const WitnessTriple t = construct(obs.m, gt.support, gt.u1_signs(), rho);
  const WitnessReport rep = check(t, obs.m, gt.support, gt.u1_signs());
  ASSERT_TRUE(rep.certified);
  const SdpSolution sol = solve(obs.m, config(rho, 1e-10));
  ASSERT_TRUE(sol.converged);
  const KktReport r = kkt_check(obs.m, sol.x_hat, witness_dual(t, 20), t.lambda_hat, gt.support, rho, 1e-6);
  for (const auto& c : r.conditions) EXPECT_TRUE(c.pass) << c.name << " residual " << c.residual;
}
