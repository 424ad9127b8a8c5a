#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "sirmeta/coverage.hpp"
#include "sirmeta/error.hpp"
#include "sirmeta/metadist.hpp"
#include "sirmeta/moments.hpp"
#include "sirmeta/numerics.hpp"

using namespace sirmeta;

namespace {

NetworkConfig reference(double h = 30.0) {
  NetworkConfig cfg;
  cfg.lambda = 1e-5;
  cfg.height = h;
  return cfg;
}

double binom(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

// Direct double sum with long double accumulation, for cross-checking.
double brute_force_cdf(const std::vector<double>& m, double x) {
  const int mu = static_cast<int>(m.size()) - 1;
  long double s = 0.0L;
  for (int k = 0; k <= static_cast<int>(std::floor(mu * x)); ++k) {
    for (int j = k; j <= mu; ++j) {
      s += static_cast<long double>(binom(mu, j)) * binom(j, k) * (((j - k) % 2) ? -1.0L : 1.0L) * m[j];
    }
  }
  return static_cast<double>(s);
}

double point_mass_ccdf(double location, double x) {
  auto moments = [&](std::span<const double> t, std::span<std::complex<double>> out) {
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = std::polar(1.0, t[i] * std::log(location));
  };
  const auto r = gil_pelaez_integral(moments, std::log(x), QuadratureSpec{}, GilPelaezOptions{});
  return 0.5 + r.integral / std::numbers::pi;
}

}  // namespace

TEST(MetaMethod, Names) {
  EXPECT_EQ(to_string(MetaMethod::gil_pelaez), "gil-pelaez");
  EXPECT_EQ(parse_meta_method("mnatsakanov"), MetaMethod::mnatsakanov);
  EXPECT_THROW(parse_meta_method("beta"), InputError);
}

TEST(GilPelaez, PointMass) {
  EXPECT_NEAR(point_mass_ccdf(0.7, 0.5), 1.0, 5e-3);
  EXPECT_NEAR(point_mass_ccdf(0.7, 0.9), 0.0, 5e-3);
}

TEST(Mnatsakanov, PointMassAtOne) {
  for (int mu : {5, 25, 50}) {
    const std::vector<double> m(mu + 1, 1.0);
    for (double x : {0.0, 0.3, 0.5, 0.99}) EXPECT_EQ(mnatsakanov_cdf(m, x).cdf, 0.0) << mu << " " << x;
    EXPECT_EQ(mnatsakanov_cdf(m, 1.0).cdf, 1.0);
  }
}

TEST(Mnatsakanov, PointMassAtZero) {
  for (int mu : {5, 25, 50}) {
    std::vector<double> m(mu + 1, 0.0);
    m[0] = 1.0;
    for (double x : {0.0, 0.3, 0.5, 0.99}) EXPECT_EQ(mnatsakanov_cdf(m, x).cdf, 1.0) << mu << " " << x;
  }
}

TEST(Mnatsakanov, FairBernoulli) {
  std::vector<double> m(26, 0.5);
  m[0] = 1.0;
  const auto v = mnatsakanov_cdf(m, 0.5);
  EXPECT_NEAR(v.cdf, brute_force_cdf(m, 0.5), 1e-9);
  EXPECT_NEAR(v.cdf, 0.5, 1e-9);
  EXPECT_LT(v.roundoff, 1e-9);
}

TEST(Mnatsakanov, MatchesBruteForceOnBetaMoments) {
  // Beta(2, 3): M_j = prod_{i<j} (2 + i) / (5 + i).
  std::vector<double> m{1.0};
  for (int j = 1; j <= 25; ++j) m.push_back(m.back() * (1.0 + j) / (4.0 + j));
  for (double x : {0.1, 0.35, 0.6, 0.85}) {
    EXPECT_NEAR(mnatsakanov_cdf(m, x).cdf, brute_force_cdf(m, x), 1e-9);
  }
  // Close to the Beta(2, 3) CDF at 0.5, 0.6875.
  EXPECT_NEAR(mnatsakanov_cdf(m, 0.5).cdf, 0.6875, 0.06);
}

TEST(Mnatsakanov, RejectsBadInput) {
  EXPECT_THROW(mnatsakanov_cdf(std::vector<double>(62, 1.0), 0.5), InputError);
  EXPECT_THROW(mnatsakanov_cdf(std::vector<double>(1, 1.0), 0.5), InputError);
  EXPECT_THROW(meta_ccdf_mnatsakanov(reference(), SirThreshold{1.0}, 0.5, 61), InputError);
  EXPECT_THROW(meta_ccdf_mnatsakanov(reference(), SirThreshold{1.0}, 1.5), InputError);
}

TEST(Metadist, InterferenceFreeLimit) {
  auto cfg = reference();
  cfg.field_radius = 1e-6;
  EXPECT_NEAR(meta_ccdf_mnatsakanov(cfg, SirThreshold{1.0}, 0.5), 1.0, 1e-9);
  EXPECT_NEAR(meta_ccdf_gil_pelaez(cfg, SirThreshold{1.0}, 0.5), 1.0, 5e-3);
}

TEST(Metadist, MethodsAgreeAtOnePoint) {
  const auto cfg = reference();
  const auto gp = meta_ccdf_gil_pelaez_detail(cfg, SirThreshold{1.0}, 0.5);
  const double mn = meta_ccdf_mnatsakanov(cfg, SirThreshold{1.0}, 0.5);
  EXPECT_NEAR(gp.ccdf, mn, 0.02);
  EXPECT_LE(gp.inversion.tail_bound, 1e-3);
}

TEST(Metadist, IntegralOfCcdfIsCoverage) {
  const auto cfg = reference();
  std::vector<double> grid;
  for (int i = 1; i <= 99; ++i) grid.push_back(i / 100.0);
  const auto curve = meta_curve(cfg, SirThreshold{1.0}, grid, MetaMethod::mnatsakanov);
  // Trapezoid on [0, 1] with CCDF(0) = 1 - P(P_s = 0) ~ 1 and CCDF(1) = 0.
  double area = 0.5 * 0.01 * (curve.ccdf.front() + 1.0) + 0.5 * 0.01 * curve.ccdf.back();
  for (std::size_t i = 1; i < curve.ccdf.size(); ++i) area += 0.5 * 0.01 * (curve.ccdf[i - 1] + curve.ccdf[i]);
  EXPECT_NEAR(area, coverage_probability(cfg, 1.0), 0.01);
}

TEST(Metadist, CurveProperties) {
  for (double h : {10.0, 30.0}) {
    const auto cfg = reference(h);
    const std::vector<double> grid{0.05, 0.2, 0.4, 0.6, 0.8, 0.95};
    const auto curve = meta_curve(cfg, SirThreshold{1.0}, grid, MetaMethod::mnatsakanov, 25);
    EXPECT_EQ(curve.method, MetaMethod::mnatsakanov);
    EXPECT_EQ(curve.mu, 25);
    ASSERT_EQ(curve.ccdf.size(), grid.size());
    ASSERT_EQ(curve.diagnostics.size(), grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      EXPECT_GE(curve.ccdf[i], 0.0);
      EXPECT_LE(curve.ccdf[i], 1.0);
      if (i > 0) {
        EXPECT_LE(curve.ccdf[i], curve.ccdf[i - 1] + 1e-6);
      }
    }
    const std::vector<double> one{0.4};
    EXPECT_EQ(meta_curve(cfg, SirThreshold{1.0}, one, MetaMethod::mnatsakanov).ccdf[0],
              meta_ccdf_mnatsakanov(cfg, SirThreshold{1.0}, 0.4));
  }
}

TEST(Metadist, CurveRejectsUnsortedGrid) {
  const std::vector<double> grid{0.5, 0.4};
  EXPECT_THROW(meta_curve(reference(), SirThreshold{1.0}, grid, MetaMethod::mnatsakanov), InputError);
  const std::vector<double> edge{0.0, 0.4};
  EXPECT_THROW(meta_curve(reference(), SirThreshold{1.0}, edge, MetaMethod::mnatsakanov), InputError);
}

TEST(Metadist, HigherThresholdShiftsCurveDown) {
  const auto cfg = reference();
  const double a = meta_ccdf_mnatsakanov(cfg, SirThreshold{db_to_linear(-3.0)}, 0.8);
  const double b = meta_ccdf_mnatsakanov(cfg, SirThreshold{1.0}, 0.8);
  EXPECT_GT(a, b);
}
