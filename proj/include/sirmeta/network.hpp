#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sirmeta/propagation.hpp"

namespace sirmeta {

/// Deployment state of a single-tier downlink network.
struct NetworkConfig {
  double lambda = 1e-4;      // BS per m^2
  double height = 10.0;      // BS height above the user, m
  int n_a = 1;               // active users per cell
  int n_s = 1;               // channel partitions
  double bandwidth = 20e6;   // Hz
  double carrier_ghz = 2.0;  // GHz
  Environment env = env_preset(Deployment::umi);
  // Radius of the interfering field around the user, m. Unset selects
  // automatic_field_radius(); +inf integrates over the whole plane.
  std::optional<double> field_radius;

  /// Throws InputError naming the violated invariant.
  void validate() const;
  /// Soft problems (density outside the deployment's range).
  std::vector<std::string> warnings() const;

  double active_ratio() const noexcept { return static_cast<double>(n_a) / n_s; }

  /// Stable key=value rendering used for CSV metadata and digests.
  std::string canonical() const;
  std::string digest() const;
};

struct SirThreshold {
  double theta;  // linear
};

struct RateThreshold {
  double r_o;  // bit/s
};

using Metric = std::variant<SirThreshold, RateThreshold>;

void validate(const Metric& metric);
std::string describe(const Metric& metric);

/// 2^(r_o n_s / w) - 1. Throws InputError when the exponent exceeds 1000.
double rate_to_sir_threshold(double r_o, int n_s, double w);

/// Linear SIR threshold the metric imposes under cfg.
double effective_threshold(const Metric& metric, const NetworkConfig& cfg);

/// Radius beyond which the expected NLoS interference is below 0.1 % of the
/// total seen from the mean nearest-BS distance, and never less than
/// 10 / sqrt(pi lambda).
double automatic_field_radius(double lambda, const Environment& env);

/// Field radius in effect for cfg (may be +inf).
double field_radius(const NetworkConfig& cfg);

/// FNV-1a 64-bit hash in hex.
std::string fnv1a_hex(const std::string& text);

}  // namespace sirmeta
