#include "sirmeta/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sirmeta/error.hpp"
#include "sirmeta/kernels.hpp"
#include "sirmeta/parallel.hpp"

namespace sirmeta {

namespace {

double uniform(std::mt19937_64& rng) { return std::generate_canonical<double, 64>(rng); }

// Samples the snapshot and returns interferer gains instead of positions.
struct GainSample {
  double serving_gain = 0.0;
  std::vector<double> gains;
};

void sample_gains(const NetworkConfig& cfg, const LinkBudget& link, double window, std::mt19937_64& rng,
                  GainSample& out) {
  const auto real = sample_realization(cfg, rng, window);
  out.serving_gain = link.gain(real.serving_link, real.serving_distance);
  out.gains.resize(real.interferers.size());
  for (std::size_t i = 0; i < real.interferers.size(); ++i) {
    out.gains[i] = link.gain(real.interferers[i].link, real.interferers[i].r);
  }
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double standard_error(const std::vector<double>& v, double m) {
  if (v.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

}  // namespace

std::mt19937_64 realization_stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

double simulation_window(const NetworkConfig& cfg, double window_factor) {
  if (!(window_factor > 0.0) || !std::isfinite(window_factor)) throw InputError("window factor must be > 0");
  const double w = window_factor * field_radius(cfg);
  if (!std::isfinite(w)) throw InputError("simulation needs a finite field radius");
  return w;
}

Realization sample_realization(const NetworkConfig& cfg, std::mt19937_64& rng, double window) {
  const LinkBudget link(cfg.env, cfg.height, cfg.carrier_ghz);
  Realization real;
  // P(R1 > r) = exp(-pi lambda r^2)
  real.serving_distance = std::sqrt(-std::log1p(-uniform(rng)) / (std::numbers::pi * cfg.lambda));
  real.serving_link = uniform(rng) < link.los_probability(real.serving_distance) ? LinkType::los : LinkType::nlos;
  const double r1 = real.serving_distance;
  if (window <= r1) return real;
  const double area = std::numbers::pi * (window * window - r1 * r1);
  std::poisson_distribution<long> count(cfg.lambda * cfg.active_ratio() * area);
  const long n = count(rng);
  real.interferers.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    const double r = std::sqrt(r1 * r1 + uniform(rng) * (window * window - r1 * r1));
    const LinkType l = uniform(rng) < link.los_probability(r) ? LinkType::los : LinkType::nlos;
    real.interferers.push_back({r, l});
  }
  return real;
}

double conditional_success(const Realization& real, const NetworkConfig& cfg, const Metric& metric) {
  cfg.validate();
  const double theta = effective_threshold(metric, cfg);
  const LinkBudget link(cfg.env, cfg.height, cfg.carrier_ghz);
  const double s = theta / link.gain(real.serving_link, real.serving_distance);
  std::vector<double> gains(real.interferers.size());
  for (std::size_t i = 0; i < gains.size(); ++i) gains[i] = link.gain(real.interferers[i].link, real.interferers[i].r);
  return kernels::success_product(s, gains);
}

void SimulationOptions::validate() const {
  if (n < 1) throw InputError("simulation needs n >= 1");
  if (moments < 1) throw InputError("simulation needs at least one moment");
  if (!(window_factor > 0.0)) throw InputError("window factor must be > 0");
  for (double x : x_grid) {
    if (!(x >= 0.0 && x <= 1.0)) throw InputError("reliability grid values must lie in [0, 1]");
  }
}

std::vector<SimulationSummary> empirical_meta(const NetworkConfig& cfg, const std::vector<Metric>& metrics,
                                              const SimulationOptions& options) {
  options.validate();
  cfg.validate();
  if (metrics.empty()) throw InputError("no metric given");
  std::vector<double> theta;
  for (const auto& m : metrics) theta.push_back(effective_threshold(m, cfg));
  const double window = simulation_window(cfg, options.window_factor);
  const LinkBudget link(cfg.env, cfg.height, cfg.carrier_ghz);
  const std::size_t n = options.n;
  const std::size_t k = metrics.size();

  // success[i * k + j]: realization i, metric j
  std::vector<double> success(n * k);
  const unsigned workers = std::max(1u, options.threads);
  std::vector<GainSample> scratch(workers);
  parallel_for(workers, workers, [&](std::size_t w) {
    const std::size_t begin = n * w / workers;
    const std::size_t end = n * (w + 1) / workers;
    for (std::size_t i = begin; i < end; ++i) {
      auto rng = realization_stream(options.seed, i);
      sample_gains(cfg, link, window, rng, scratch[w]);
      for (std::size_t j = 0; j < k; ++j) {
        success[i * k + j] = kernels::success_product(theta[j] / scratch[w].serving_gain, scratch[w].gains);
      }
    }
  });

  std::vector<SimulationSummary> out(k);
  std::vector<double> ps(n);
  std::vector<double> powers(n);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < n; ++i) ps[i] = success[i * k + j];
    auto& s = out[j];
    s.n = n;
    s.seed = options.seed;
    s.window = window;
    s.coverage = mean(ps);
    s.coverage_se = standard_error(ps, s.coverage);
    for (int m = 1; m <= options.moments; ++m) {
      for (std::size_t i = 0; i < n; ++i) powers[i] = std::pow(ps[i], m);
      const double mm = mean(powers);
      s.moments.push_back(mm);
      s.moments_se.push_back(standard_error(powers, mm));
    }
    s.x_grid = options.x_grid;
    for (double x : options.x_grid) {
      const auto above = std::count_if(ps.begin(), ps.end(), [x](double v) { return v > x; });
      const double f = static_cast<double>(above) / static_cast<double>(n);
      s.ccdf.push_back(f);
      s.ccdf_se.push_back(std::sqrt(f * (1.0 - f) / static_cast<double>(n)));
    }
    s.ks95 = 1.358 / std::sqrt(static_cast<double>(n));
  }
  return out;
}

SimulationSummary empirical_meta(const NetworkConfig& cfg, const Metric& metric, const SimulationOptions& options) {
  return empirical_meta(cfg, std::vector<Metric>{metric}, options).front();
}

std::vector<double> conditional_success_samples(const NetworkConfig& cfg, const Metric& metric,
                                                const SimulationOptions& options) {
  options.validate();
  cfg.validate();
  const double theta = effective_threshold(metric, cfg);
  const double window = simulation_window(cfg, options.window_factor);
  const LinkBudget link(cfg.env, cfg.height, cfg.carrier_ghz);
  std::vector<double> out(options.n);
  const unsigned workers = std::max(1u, options.threads);
  std::vector<GainSample> scratch(workers);
  parallel_for(workers, workers, [&](std::size_t w) {
    for (std::size_t i = options.n * w / workers; i < options.n * (w + 1) / workers; ++i) {
      auto rng = realization_stream(options.seed, i);
      sample_gains(cfg, link, window, rng, scratch[w]);
      out[i] = kernels::success_product(theta / scratch[w].serving_gain, scratch[w].gains);
    }
  });
  return out;
}

CoverageEstimate empirical_coverage_fading(const NetworkConfig& cfg, const Metric& metric,
                                           const SimulationOptions& options) {
  options.validate();
  cfg.validate();
  const double theta = effective_threshold(metric, cfg);
  const double window = simulation_window(cfg, options.window_factor);
  const LinkBudget link(cfg.env, cfg.height, cfg.carrier_ghz);
  std::vector<double> covered(options.n);
  const unsigned workers = std::max(1u, options.threads);
  std::vector<GainSample> scratch(workers);
  parallel_for(workers, workers, [&](std::size_t w) {
    std::exponential_distribution<double> fading(1.0);
    for (std::size_t i = options.n * w / workers; i < options.n * (w + 1) / workers; ++i) {
      auto rng = realization_stream(options.seed, i);
      auto& g = scratch[w];
      sample_gains(cfg, link, window, rng, g);
      const double signal = fading(rng) * g.serving_gain;
      double interference = 0.0;
      for (double gi : g.gains) interference += fading(rng) * gi;
      covered[i] = (interference == 0.0 || signal >= theta * interference) ? 1.0 : 0.0;
    }
  });
  CoverageEstimate est;
  est.n = options.n;
  est.value = mean(covered);
  est.se = standard_error(covered, est.value);
  return est;
}

}  // namespace sirmeta
