#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "sirmeta/network.hpp"
#include "sirmeta/propagation.hpp"

namespace sirmeta {

struct Interferer {
  double r;  // ground distance, m
  LinkType link;
};

/// One network snapshot seen from the typical user. LoS states and channel
/// occupancy are frozen; fading is averaged out by conditional_success.
struct Realization {
  double serving_distance = 0.0;
  LinkType serving_link = LinkType::nlos;
  std::vector<Interferer> interferers;  // thinned field in (r1, window]
};

/// Independent generator for realization `index` of a run seeded with `seed`.
std::mt19937_64 realization_stream(std::uint64_t seed, std::uint64_t index);

/// Window radius used by the simulator: window_factor * field_radius(cfg).
/// Throws InputError when it is not finite.
double simulation_window(const NetworkConfig& cfg, double window_factor = 1.0);

Realization sample_realization(const NetworkConfig& cfg, std::mt19937_64& rng, double window);

/// prod_i 1 / (1 + s G_i) with s = theta_eff / G_serving(r1): the success
/// probability given the realization, averaged over Rayleigh fading.
double conditional_success(const Realization& real, const NetworkConfig& cfg, const Metric& metric);

struct SimulationOptions {
  std::size_t n = 100000;
  std::uint64_t seed = 1;
  std::vector<double> x_grid;  // reliabilities for the empirical CCDF
  int moments = 3;             // empirical M_1..M_moments
  double window_factor = 1.0;
  unsigned threads = 1;

  void validate() const;
};

struct SimulationSummary {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double window = 0.0;
  double coverage = 0.0;  // mean conditional success
  double coverage_se = 0.0;
  std::vector<double> moments;     // M_1..M_k
  std::vector<double> moments_se;
  std::vector<double> x_grid;
  std::vector<double> ccdf;  // fraction with P_s > x
  std::vector<double> ccdf_se;
  double ks95 = 0.0;  // 95 % Kolmogorov-Smirnov band for n samples
};

/// Empirical meta-distribution for several metrics evaluated on the same
/// realizations. Results do not depend on options.threads.
std::vector<SimulationSummary> empirical_meta(const NetworkConfig& cfg, const std::vector<Metric>& metrics,
                                              const SimulationOptions& options);
SimulationSummary empirical_meta(const NetworkConfig& cfg, const Metric& metric, const SimulationOptions& options);

/// Conditional success values themselves, one per realization.
std::vector<double> conditional_success_samples(const NetworkConfig& cfg, const Metric& metric,
                                                const SimulationOptions& options);

struct CoverageEstimate {
  double value = 0.0;
  double se = 0.0;
  std::size_t n = 0;
};

/// Coverage with explicit Exp(1) fading draws on every link: the fraction of
/// realizations with SIR >= theta_eff.
CoverageEstimate empirical_coverage_fading(const NetworkConfig& cfg, const Metric& metric,
                                           const SimulationOptions& options);

}  // namespace sirmeta
