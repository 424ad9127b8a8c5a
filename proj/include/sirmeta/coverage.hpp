#pragma once

#include "sirmeta/network.hpp"
#include "sirmeta/numerics.hpp"
#include "sirmeta/propagation.hpp"

namespace sirmeta {

/// Average success factor of one potential interferer at ground distance r:
/// P_L / (1 + s G_L) + P_NL / (1 + s G_NL), in (0, 1].
double eta(double s, double r, double h, const Environment& env, double f_ghz);

/// exp(-2 pi lambda N_a/N_s int_{r1}^{R} (1 - eta(s, r)) r dr) with R the
/// field radius of cfg.
double laplace_factor(double r1, double s, const NetworkConfig& cfg, const QuadratureSpec& spec = {});

/// P(SIR > theta) for a typical user, theta linear.
double coverage_probability(const NetworkConfig& cfg, double theta, const QuadratureSpec& spec = {});

/// P(rate > r_o): coverage at theta = 2^(r_o N_s / W) - 1.
double rate_coverage_probability(const NetworkConfig& cfg, double r_o, const QuadratureSpec& spec = {});

double coverage(const NetworkConfig& cfg, const Metric& metric, const QuadratureSpec& spec = {});

}  // namespace sirmeta
