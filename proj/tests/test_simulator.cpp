#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
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

// A 1 km field keeps the interferer count near 300 per snapshot.
NetworkConfig small_field(double h = 10.0) {
  auto cfg = base(1e-4, h);
  cfg.field_radius = 1000.0;
  return cfg;
}

}  // namespace

TEST(Simulator, ServingDistanceMedian) {
  const auto cfg = base();
  std::vector<double> r1;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    auto rng = realization_stream(7, i);
    r1.push_back(sample_realization(cfg, rng, 1.0).serving_distance);
  }
  std::nth_element(r1.begin(), r1.begin() + 5000, r1.end());
  const double median = std::sqrt(std::log(2.0) / (std::numbers::pi * 1e-4));
  EXPECT_NEAR(median, 46.97, 0.01);
  // Standard error of the sample median: 1 / (2 f(m) sqrt(n)) with f(m) = pi lambda m.
  const double se = 1.0 / (2.0 * std::numbers::pi * 1e-4 * median * 100.0);
  EXPECT_NEAR(r1[5000], median, 3.0 * se);
}

TEST(Simulator, InterfererCountMean) {
  const auto cfg = base();
  const double window = 300.0;
  double sum = 0.0;
  std::vector<double> counts;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    auto rng = realization_stream(8, i);
    const auto real = sample_realization(cfg, rng, window);
    counts.push_back(static_cast<double>(real.interferers.size()));
    sum += counts.back();
    for (const auto& it : real.interferers) {
      ASSERT_GE(it.r, real.serving_distance);
      ASSERT_LE(it.r, window);
    }
  }
  const double mean = sum / 10000.0;
  // E[N] = lambda pi (W^2 - E[R1^2]) with E[R1^2] = 1 / (pi lambda).
  const double expected = 1e-4 * std::numbers::pi * window * window - 1.0;
  double ss = 0.0;
  for (double c : counts) ss += (c - mean) * (c - mean);
  const double se = std::sqrt(ss / 9999.0 / 10000.0);
  EXPECT_NEAR(mean, expected, 3.0 * se);
}

TEST(Simulator, ThinningScalesInterfererCount) {
  auto cfg = base();
  cfg.n_a = 1;
  cfg.n_s = 4;
  double sum = 0.0;
  for (std::uint64_t i = 0; i < 4000; ++i) {
    auto rng = realization_stream(9, i);
    sum += static_cast<double>(sample_realization(cfg, rng, 300.0).interferers.size());
  }
  const double expected = (1e-4 * std::numbers::pi * 300.0 * 300.0 - 1.0) / 4.0;
  EXPECT_NEAR(sum / 4000.0, expected, 0.15);
}

TEST(Simulator, LosFractionNearFortyFiveDegrees) {
  const auto cfg = base(1e-4, 100.0);
  std::size_t total = 0;
  std::size_t los = 0;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    auto rng = realization_stream(10, i);
    for (const auto& it : sample_realization(cfg, rng, 105.0).interferers) {
      if (it.r < 95.0) continue;
      ++total;
      los += it.link == LinkType::los;
    }
  }
  ASSERT_GT(total, 3000u);
  // Area-weighted mean of the LoS probability over the annulus.
  const double num = oracle::simpson([](double r) { return oracle::los(100.0, r) * r; }, 95.0, 105.0, 200);
  const double p = num / (0.5 * (105.0 * 105.0 - 95.0 * 95.0));
  EXPECT_NEAR(p, 0.9995, 1e-4);
  const double frac = static_cast<double>(los) / static_cast<double>(total);
  EXPECT_NEAR(frac, p, 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(total)) + 1e-4);
}

TEST(Simulator, ConditionalSuccessCases) {
  const auto cfg = base();
  Realization real;
  real.serving_distance = 40.0;
  real.serving_link = LinkType::nlos;
  EXPECT_EQ(conditional_success(real, cfg, SirThreshold{5.0}), 1.0);
  real.interferers.push_back({40.0, LinkType::nlos});
  EXPECT_NEAR(conditional_success(real, cfg, SirThreshold{1.0}), 0.5, 1e-15);
  EXPECT_NEAR(conditional_success(real, cfg, SirThreshold{1e-15}), 1.0, 1e-12);
  real.interferers.push_back({120.0, LinkType::los});
  const double g_serv = oracle::gain(10.0, 40.0, oracle::kUmiNlos, 2.0);
  const double g_los = oracle::gain(10.0, 120.0, oracle::kUmiLos, 2.0);
  const double s = 2.0 / g_serv;
  EXPECT_NEAR(conditional_success(real, cfg, SirThreshold{2.0}), 1.0 / (1.0 + 2.0) / (1.0 + s * g_los), 1e-12);
}

TEST(Simulator, InterferenceFreeLimit) {
  auto cfg = base();
  cfg.field_radius = 1e-6;
  SimulationOptions opts;
  opts.n = 2000;
  opts.x_grid = {0.1, 0.5, 0.99};
  const auto s = empirical_meta(cfg, SirThreshold{1.0}, opts);
  for (double v : s.ccdf) EXPECT_EQ(v, 1.0);
  EXPECT_EQ(s.coverage, 1.0);
}

TEST(Simulator, SameSeedSameSummaryAcrossThreads) {
  const auto cfg = small_field();
  SimulationOptions opts;
  opts.n = 3000;
  opts.seed = 99;
  opts.x_grid = {0.2, 0.5, 0.8};
  const auto a = empirical_meta(cfg, SirThreshold{1.0}, opts);
  const auto b = empirical_meta(cfg, SirThreshold{1.0}, opts);
  opts.threads = 3;
  const auto c = empirical_meta(cfg, SirThreshold{1.0}, opts);
  for (const auto* o : {&b, &c}) {
    EXPECT_EQ(a.coverage, o->coverage);
    EXPECT_EQ(a.coverage_se, o->coverage_se);
    EXPECT_EQ(a.moments, o->moments);
    EXPECT_EQ(a.ccdf, o->ccdf);
  }
  opts.seed = 100;
  EXPECT_NE(empirical_meta(cfg, SirThreshold{1.0}, opts).coverage, a.coverage);
}

TEST(Simulator, SummaryShape) {
  const auto cfg = small_field();
  SimulationOptions opts;
  opts.n = 4000;
  opts.moments = 6;
  for (int i = 1; i <= 19; ++i) opts.x_grid.push_back(i / 20.0);
  const auto s = empirical_meta(cfg, SirThreshold{1.0}, opts);
  EXPECT_EQ(s.window, 1000.0);
  EXPECT_GT(s.coverage_se, 0.0);
  EXPECT_NEAR(s.moments[0], s.coverage, 1e-15);
  EXPECT_NEAR(s.ks95, 1.358 / std::sqrt(4000.0), 1e-12);
  for (std::size_t i = 0; i < s.ccdf.size(); ++i) {
    EXPECT_GE(s.ccdf[i], 0.0);
    EXPECT_LE(s.ccdf[i], 1.0);
    if (i > 0) {
      EXPECT_LE(s.ccdf[i], s.ccdf[i - 1]);
    }
  }
  std::vector<double> m{1.0};
  m.insert(m.end(), s.moments.begin(), s.moments.end());
  EXPECT_GE(hausdorff_min_difference(m), -1e-9);
}

TEST(Simulator, SamplesMatchSummary) {
  const auto cfg = small_field();
  SimulationOptions opts;
  opts.n = 1500;
  opts.seed = 5;
  const auto samples = conditional_success_samples(cfg, SirThreshold{1.0}, opts);
  double sum = 0.0;
  for (double v : samples) sum += v;
  EXPECT_NEAR(sum / 1500.0, empirical_meta(cfg, SirThreshold{1.0}, opts).coverage, 1e-14);
}

TEST(Simulator, SeveralMetricsShareRealizations) {
  const auto cfg = small_field();
  SimulationOptions opts;
  opts.n = 1500;
  const auto both = empirical_meta(cfg, {SirThreshold{1.0}, SirThreshold{2.0}}, opts);
  ASSERT_EQ(both.size(), 2u);
  EXPECT_EQ(both[0].coverage, empirical_meta(cfg, SirThreshold{1.0}, opts).coverage);
  EXPECT_GT(both[0].coverage, both[1].coverage);
}

TEST(Simulator, MatchesAnalyticalWithSameField) {
  for (double h : {10.0, 40.0}) {
    const auto cfg = small_field(h);
    SimulationOptions opts;
    opts.n = 20000;
    opts.seed = 3;
    opts.moments = 3;
    const auto s = empirical_meta(cfg, SirThreshold{1.0}, opts);
    const auto seq = moment_sequence(cfg, SirThreshold{1.0}, 3);
    for (int m = 1; m <= 3; ++m) EXPECT_NEAR(seq.values[m], s.moments[m - 1], 3.0 * s.moments_se[m - 1]);
  }
}

TEST(Simulator, FadingEstimatorAgreesWithClosedForm) {
  const auto cfg = small_field();
  SimulationOptions opts;
  opts.n = 20000;
  opts.seed = 21;
  const auto fading = empirical_coverage_fading(cfg, SirThreshold{1.0}, opts);
  const auto meta = empirical_meta(cfg, SirThreshold{1.0}, opts);
  EXPECT_EQ(fading.n, 20000u);
  EXPECT_GT(fading.se, 0.0);
  const double joint = std::hypot(fading.se, meta.coverage_se);
  EXPECT_NEAR(fading.value, meta.coverage, 3.0 * joint);
  EXPECT_NEAR(fading.value, coverage_probability(cfg, 1.0), 3.0 * fading.se);
}

TEST(Simulator, FadingWithoutInterferersAlwaysCovers) {
  auto cfg = base();
  cfg.field_radius = 1e-6;
  SimulationOptions opts;
  opts.n = 1000;
  EXPECT_EQ(empirical_coverage_fading(cfg, SirThreshold{1e6}, opts).value, 1.0);
}

TEST(Simulator, RejectsUnboundedField) {
  auto cfg = base();
  cfg.field_radius = std::numeric_limits<double>::infinity();
  EXPECT_THROW(simulation_window(cfg), InputError);
  EXPECT_THROW(simulation_window(base(), 0.0), InputError);
  EXPECT_DOUBLE_EQ(simulation_window(base(), 1.5), 1.5 * field_radius(base()));
  SimulationOptions opts;
  opts.x_grid = {1.5};
  EXPECT_THROW(empirical_meta(base(), SirThreshold{1.0}, opts), InputError);
}
