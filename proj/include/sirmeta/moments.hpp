#pragma once

#include <complex>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sirmeta/network.hpp"
#include "sirmeta/numerics.hpp"
#include "sirmeta/propagation.hpp"

namespace sirmeta {

struct RealOrder {
  double m;  // >= 0
};

/// Order j t.
struct ImaginaryOrder {
  double t;
};

using MomentOrder = std::variant<RealOrder, ImaginaryOrder>;

/// M_0..M_mu of the conditional success probability.
struct MomentSequence {
  Metric metric;
  std::string cfg_digest;
  std::vector<double> values;  // values[0] = 1
  int mu = 0;
  double error = 0.0;  // quadrature error estimate, max over orders
};

/// P_L (1 + s G_L)^-m + P_NL (1 + s G_NL)^-m; for order j t the power is
/// exp(-j t log(1 + x)).
std::complex<double> eta_m(double s, double r, const MomentOrder& order, double h, const Environment& env,
                           double f_ghz);

double moment(const NetworkConfig& cfg, const Metric& metric, RealOrder order, const QuadratureSpec& spec = {});
std::complex<double> moment(const NetworkConfig& cfg, const Metric& metric, ImaginaryOrder order,
                            const QuadratureSpec& spec = {});
std::complex<double> moment(const NetworkConfig& cfg, const Metric& metric, const MomentOrder& order,
                            const QuadratureSpec& spec = {});

/// out[i] = M_{j t[i]}. All orders share one discretization.
void complex_moments(const NetworkConfig& cfg, const Metric& metric, std::span<const double> t,
                     std::span<std::complex<double>> out, const QuadratureSpec& spec = {});

/// [1, M_1, ..., M_mu] from one shared discretization, so the sequence is the
/// exact moment sequence of a positive discrete measure.
MomentSequence moment_sequence(const NetworkConfig& cfg, const Metric& metric, int mu,
                               const QuadratureSpec& spec = {});

/// M_2 - M_1^2. Throws NumericalError below -1e-9, clamps smaller negatives to 0.
double variance(const NetworkConfig& cfg, const Metric& metric, const QuadratureSpec& spec = {});
double variance_from_moments(double m1, double m2);

/// Smallest (-1)^k (Delta^k M)_m over k + m <= mu. Nonnegative for any
/// moment sequence of a [0, 1]-supported variable.
double hausdorff_min_difference(std::span<const double> moments);

}  // namespace sirmeta
