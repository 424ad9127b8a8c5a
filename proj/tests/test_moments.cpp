#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <vector>

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

// No interferer falls inside a field this small, so P_s = 1 for every user.
NetworkConfig interference_free() {
  auto cfg = base();
  cfg.field_radius = 1e-6;
  return cfg;
}

}  // namespace

TEST(Moments, EtaMExamples) {
  const auto env = env_preset(Deployment::umi);
  for (double s : {1.0, 1e6, 1e10}) {
    for (double r : {5.0, 80.0, 900.0}) {
      const auto v = eta_m(s, r, RealOrder{1.0}, 10.0, env, 2.0);
      EXPECT_NEAR(v.real(), eta(s, r, 10.0, env, 2.0), 1e-15);
      EXPECT_EQ(v.imag(), 0.0);
      EXPECT_EQ(eta_m(s, r, RealOrder{0.0}, 10.0, env, 2.0), std::complex<double>(1.0, 0.0));
      EXPECT_EQ(eta_m(s, r, ImaginaryOrder{0.0}, 10.0, env, 2.0), std::complex<double>(1.0, 0.0));
    }
  }
}

TEST(Moments, EtaMImaginaryOrderClosedForm) {
  const auto env = env_preset(Deployment::umi);
  const double s = 1e9, r = 120.0, h = 20.0, t = 3.5;
  const double p = oracle::los(h, r);
  const double xl = s * oracle::gain(h, r, oracle::kUmiLos, 2.0);
  const double xn = s * oracle::gain(h, r, oracle::kUmiNlos, 2.0);
  const std::complex<double> j(0.0, 1.0);
  const auto expected = p * std::exp(-j * t * std::log(1.0 + xl)) + (1.0 - p) * std::exp(-j * t * std::log(1.0 + xn));
  const auto got = eta_m(s, r, ImaginaryOrder{t}, h, env, 2.0);
  EXPECT_NEAR(got.real(), expected.real(), 1e-12);
  EXPECT_NEAR(got.imag(), expected.imag(), 1e-12);
}

TEST(Moments, TrivialOrders) {
  const auto cfg = base();
  EXPECT_EQ(moment(cfg, SirThreshold{1.0}, RealOrder{0.0}), 1.0);
  EXPECT_EQ(moment(cfg, SirThreshold{1.0}, ImaginaryOrder{0.0}), std::complex<double>(1.0, 0.0));
  EXPECT_NEAR(moment(cfg, SirThreshold{1.0}, RealOrder{1.0}), coverage_probability(cfg, 1.0), 1e-6);
  EXPECT_THROW(moment(cfg, SirThreshold{1.0}, RealOrder{-1.0}), InputError);
}

TEST(Moments, SequenceOfLengthOne) {
  const auto cfg = base();
  const auto seq = moment_sequence(cfg, SirThreshold{1.0}, 1);
  ASSERT_EQ(seq.values.size(), 2u);
  EXPECT_EQ(seq.values[0], 1.0);
  EXPECT_NEAR(seq.values[1], coverage_probability(cfg, 1.0), 1e-6);
  EXPECT_THROW(moment_sequence(cfg, SirThreshold{1.0}, 0), InputError);
}

TEST(Moments, SequenceMatchesPointwiseMoments) {
  const auto cfg = base(1e-4, 20.0);
  const auto seq = moment_sequence(cfg, SirThreshold{2.0}, 6);
  for (int m = 1; m <= 6; ++m) {
    EXPECT_NEAR(seq.values[m], moment(cfg, SirThreshold{2.0}, RealOrder{static_cast<double>(m)}), 1e-6) << m;
  }
}

TEST(Moments, MatchesFixedGridOracle) {
  auto cfg = base(1e-4, 15.0);
  cfg.field_radius = 2000.0;
  for (double m : {2.0, 3.5}) {
    EXPECT_NEAR(moment(cfg, SirThreshold{1.0}, RealOrder{m}), oracle::moment(1e-4, 15.0, 1.0, m, 2000.0), 2e-5);
  }
}

TEST(Moments, SequenceProperties) {
  for (double h : {5.0, 30.0, 80.0}) {
    for (double lambda : {1e-5, 1e-4}) {
      const auto cfg = base(lambda, h);
      const auto seq = moment_sequence(cfg, SirThreshold{1.0}, 25);
      ASSERT_EQ(seq.values.size(), 26u);
      EXPECT_EQ(seq.values[0], 1.0);
      for (std::size_t m = 1; m < seq.values.size(); ++m) {
        EXPECT_LE(seq.values[m], seq.values[m - 1]);
        EXPECT_GE(seq.values[m], 0.0);
      }
      EXPECT_LE(seq.values[1] * seq.values[1], seq.values[2]);
      EXPECT_GE(hausdorff_min_difference(seq.values), -1e-9) << "h=" << h << " lambda=" << lambda;
    }
  }
}

TEST(Moments, HausdorffMinDifference) {
  // Uniform(0, 1): M_m = 1 / (m + 1) is completely monotone.
  std::vector<double> uniform;
  for (int m = 0; m <= 20; ++m) uniform.push_back(1.0 / (m + 1));
  EXPECT_GT(hausdorff_min_difference(uniform), 0.0);
  // M_2 > M_1 is impossible on [0, 1].
  const std::vector<double> bad{1.0, 0.3, 0.4};
  EXPECT_LT(hausdorff_min_difference(bad), -0.05);
}

TEST(Moments, ImaginaryOrderProperties) {
  const auto cfg = base(1e-4, 20.0);
  const std::vector<double> t{-7.0, -1.0, 0.0, 1.0, 7.0, 40.0};
  std::vector<std::complex<double>> out(t.size());
  complex_moments(cfg, SirThreshold{1.0}, t, out);
  EXPECT_EQ(out[2], std::complex<double>(1.0, 0.0));
  for (const auto& v : out) EXPECT_LE(std::abs(v), 1.0 + 1e-9);
  EXPECT_NEAR(out[0].real(), out[4].real(), 1e-9);
  EXPECT_NEAR(out[0].imag(), -out[4].imag(), 1e-9);
  EXPECT_NEAR(out[1].real(), out[3].real(), 1e-9);
  EXPECT_NEAR(out[1].imag(), -out[3].imag(), 1e-9);
  const auto single = moment(cfg, SirThreshold{1.0}, ImaginaryOrder{7.0});
  EXPECT_NEAR(std::abs(single - out[4]), 0.0, 1e-6);
}

TEST(Moments, InterferenceFreeLimit) {
  const auto cfg = interference_free();
  const auto seq = moment_sequence(cfg, SirThreshold{1.0}, 25);
  for (double v : seq.values) EXPECT_NEAR(v, 1.0, 1e-12);
  EXPECT_NEAR(variance(cfg, SirThreshold{1.0}), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(moment(cfg, SirThreshold{1.0}, ImaginaryOrder{5.0}) - 1.0), 0.0, 1e-12);
}

TEST(Moments, VarianceFromMoments) {
  EXPECT_NEAR(variance_from_moments(0.5, 0.3), 0.05, 1e-15);
  EXPECT_EQ(variance_from_moments(0.5, 0.25 - 1e-12), 0.0);
  EXPECT_THROW(variance_from_moments(0.5, 0.2), NumericalError);
}

TEST(Moments, VarianceAtRateTarget) {
  auto cfg = base(1e-4, 25.0);
  cfg.bandwidth = 2e7;
  const double v = variance(cfg, RateThreshold{8e6});
  EXPECT_NEAR(v, 0.13, 0.03);
  const double m1 = moment(cfg, RateThreshold{8e6}, RealOrder{1.0});
  const double m2 = moment(cfg, RateThreshold{8e6}, RealOrder{2.0});
  EXPECT_NEAR(v, m2 - m1 * m1, 1e-6);
}

TEST(Moments, AgreeWithSimulator) {
  const auto cfg = base();
  SimulationOptions opts;
  opts.n = 100000;
  opts.seed = 2024;
  opts.moments = 3;
  const auto sim = empirical_meta(cfg, SirThreshold{1.0}, opts);
  const auto seq = moment_sequence(cfg, SirThreshold{1.0}, 3);
  for (int m = 1; m <= 3; ++m) {
    EXPECT_NEAR(seq.values[m], sim.moments[m - 1], 3.0 * sim.moments_se[m - 1]) << "m=" << m;
  }
}
