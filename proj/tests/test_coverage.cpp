#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "sirmeta/coverage.hpp"
#include "sirmeta/error.hpp"
#include "sirmeta/moments.hpp"
#include "sirmeta/simulator.hpp"

using namespace sirmeta;

namespace {

NetworkConfig base(double lambda = 1e-4, double h = 10.0) {
  NetworkConfig cfg;
  cfg.lambda = lambda;
  cfg.height = h;
  return cfg;
}

}  // namespace

TEST(Coverage, RateToSirThreshold) {
  EXPECT_EQ(rate_to_sir_threshold(20e6 / 4, 4, 20e6), 1.0);
  EXPECT_NEAR(rate_to_sir_threshold(5e6, 10, 2e7), std::pow(2.0, 2.5) - 1.0, 1e-12);
  EXPECT_NEAR(rate_to_sir_threshold(5e6, 10, 2e7), 4.657, 1e-3);
  EXPECT_LT(rate_to_sir_threshold(1e-6, 1, 2e7), 1e-13);
  EXPECT_THROW(rate_to_sir_threshold(2e7 * 1001, 1, 2e7), InputError);
  EXPECT_THROW(rate_to_sir_threshold(0.0, 1, 2e7), InputError);
}

TEST(Coverage, EtaExamples) {
  const auto env = env_preset(Deployment::umi);
  EXPECT_EQ(eta(0.0, 100.0, 10.0, env, 2.0), 1.0);
  EXPECT_LT(eta(1e30, 100.0, 10.0, env, 2.0), 1e-12);
  EXPECT_EQ(eta(std::numeric_limits<double>::infinity(), 100.0, 10.0, env, 2.0), 0.0);
  // Frozen direct evaluations.
  EXPECT_NEAR(eta(1.0, 100.0, 10.0, env, 2.0), 0.9999999993409777, 1e-15);
  EXPECT_NEAR(eta(1e8, 100.0, 10.0, env, 2.0), 0.9696521521624477, 1e-14);
  EXPECT_THROW(eta(1.0, 0.0, 10.0, env, 2.0), InputError);
  EXPECT_THROW(eta(-1.0, 10.0, 10.0, env, 2.0), InputError);
}

TEST(Coverage, EtaInUnitInterval) {
  const auto env = env_preset(Deployment::umi);
  for (double s : {1e2, 1e6, 1e10, 1e14}) {
    for (double r : {1.0, 30.0, 300.0, 3000.0}) {
      const double v = eta(s, r, 15.0, env, 2.0);
      EXPECT_GT(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(Coverage, LaplaceFactorLimits) {
  auto cfg = base();
  EXPECT_EQ(laplace_factor(50.0, 0.0, cfg), 1.0);
  cfg.lambda = 1e-12;
  EXPECT_GT(laplace_factor(50.0, 1e8, cfg), 0.999);
  cfg = base();
  for (double s : {1e4, 1e8, 1e12}) {
    const double v = laplace_factor(50.0, s, cfg);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(Coverage, LaplaceFactorMatchesMonteCarloPgfl) {
  auto cfg = base();
  cfg.field_radius = 1000.0;
  const double r1 = 50.0;
  const double s = 1.0 / oracle::gain(10.0, r1, oracle::kUmiLos, 2.0);
  const double analytic = laplace_factor(r1, s, cfg);
  const auto [mc, se] = oracle::pgfl_monte_carlo(1e-4, 10.0, s, r1, 1000.0, 100000, 42);
  EXPECT_NEAR(analytic, mc, 3.0 * se) << "se=" << se;
}

TEST(Coverage, MatchesFixedGridOracle) {
  for (double h : {5.0, 25.0}) {
    auto cfg = base(1e-4, h);
    cfg.field_radius = 2000.0;
    const double ref = oracle::moment(1e-4, h, 1.0, 1.0, 2000.0);
    EXPECT_NEAR(coverage_probability(cfg, 1.0), ref, 2e-5) << "h=" << h;
  }
}

TEST(Coverage, ThresholdLimitsAndMonotonicity) {
  const auto cfg = base();
  EXPECT_GT(coverage_probability(cfg, 1e-9), 0.999);
  double prev = 1.0;
  for (double theta_db = -10.0; theta_db <= 10.0; theta_db += 2.5) {
    const double p = coverage_probability(cfg, db_to_linear(theta_db));
    EXPECT_LT(p, prev);
    EXPECT_GE(p, 0.0);
    prev = p;
  }
  EXPECT_LT(coverage_probability(cfg, 2.0), coverage_probability(cfg, 1.0));
}

TEST(Coverage, DependsOnLoadOnlyThroughRatio) {
  auto a = base();
  a.n_a = 1;
  a.n_s = 2;
  auto b = base();
  b.n_a = 2;
  b.n_s = 4;
  EXPECT_NEAR(coverage_probability(a, 1.0), coverage_probability(b, 1.0), 1e-9);
  // Rate coverage depends on N_s through the threshold.
  EXPECT_GT(std::abs(rate_coverage_probability(a, 5e6) - rate_coverage_probability(b, 5e6)), 1e-3);
}

TEST(Coverage, NonincreasingInActiveDensity) {
  auto cfg = base();
  cfg.field_radius = 5000.0;
  double prev = 1.0;
  for (int n_a : {1, 2, 3, 4}) {
    cfg.n_a = n_a;
    cfg.n_s = 4;
    const double p = coverage_probability(cfg, 1.0);
    EXPECT_LT(p, prev);
    prev = p;
  }
}

TEST(Coverage, RateCoverageIsCoverageAtEquivalentThreshold) {
  auto cfg = base(1e-4, 25.0);
  cfg.n_s = 3;
  const double r_o = 8e6;
  EXPECT_EQ(rate_coverage_probability(cfg, r_o),
            coverage_probability(cfg, std::pow(2.0, r_o * 3 / cfg.bandwidth) - 1.0));
  EXPECT_GT(rate_coverage_probability(cfg, 1.0), 0.999);
  EXPECT_EQ(coverage(cfg, RateThreshold{r_o}), rate_coverage_probability(cfg, r_o));
}

TEST(Coverage, EqualsFirstMoment) {
  const auto cfg = base();
  EXPECT_NEAR(coverage_probability(cfg, 1.0), moment(cfg, SirThreshold{1.0}, RealOrder{1.0}), 1e-6);
}

TEST(Coverage, AgreesWithSimulator) {
  const auto cfg = base();
  SimulationOptions opts;
  opts.n = 20000;
  opts.seed = 11;
  const auto sim = empirical_meta(cfg, SirThreshold{1.0}, opts);
  EXPECT_NEAR(coverage_probability(cfg, 1.0), sim.coverage, std::max(0.01, 3.0 * sim.coverage_se));
}

TEST(Coverage, RateCoverageAgreesWithSimulatorNearOptimalHeight) {
  const auto cfg = base(1e-4, 25.0);
  SimulationOptions opts;
  opts.n = 20000;
  opts.seed = 12;
  const auto sim = empirical_meta(cfg, RateThreshold{8e6}, opts);
  EXPECT_NEAR(rate_coverage_probability(cfg, 8e6), sim.coverage, std::max(0.01, 3.0 * sim.coverage_se));
}

TEST(Coverage, FieldTruncationBiasIsBelowMonteCarloNoise) {
  // A 50 % larger field should move coverage by less than the standard error
  // of a 1e5-sample estimate, sqrt(var(P_s) / 1e5). The simulator is unbiased
  // for a given field, so the analytical difference is its expected change.
  auto cfg = base();
  const double r = field_radius(cfg);
  const double p1 = coverage_probability(cfg, 1.0);
  const double se = std::sqrt(variance(cfg, SirThreshold{1.0}) / 1e5);
  cfg.field_radius = 1.5 * r;
  const double p2 = coverage_probability(cfg, 1.0);
  EXPECT_GT(p1, p2);
  EXPECT_LT(p1 - p2, se);
}

TEST(Coverage, UnboundedFieldDoesNotConverge) {
  // LoS probability tends to a positive constant at grazing angles, so the
  // aggregate LoS interference (exponent 2) diverges logarithmically.
  auto cfg = base();
  cfg.field_radius = std::numeric_limits<double>::infinity();
  EXPECT_THROW(coverage_probability(cfg, 1.0), NumericalError);
  double prev = 1.0;
  for (double k : {50.0, 500.0, 5000.0}) {
    cfg.field_radius = k / std::sqrt(cfg.lambda);
    const double p = coverage_probability(cfg, 1.0);
    EXPECT_LT(p, prev);
    prev = p;
  }
}

TEST(Coverage, InvalidInputs) {
  auto cfg = base();
  EXPECT_THROW(coverage_probability(cfg, 0.0), InputError);
  cfg.n_a = 3;
  cfg.n_s = 2;
  EXPECT_THROW(coverage_probability(cfg, 1.0), InputError);
}
