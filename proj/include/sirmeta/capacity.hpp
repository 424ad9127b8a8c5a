#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sirmeta/network.hpp"
#include "sirmeta/numerics.hpp"

namespace sirmeta {

/// Density of users per m^2 meeting the target with reliability at least x.
struct CapacityPoint {
  std::string cfg_digest;
  double x = 0.0;
  Metric metric = SirThreshold{1.0};
  double ccdf = 0.0;
  double value = 0.0;  // N_a lambda ccdf
};

/// Spatial coverage capacity, Mnatsakanov CCDF with mu moments.
CapacityPoint scc(const NetworkConfig& cfg, double x, double theta, int mu = 25, const QuadratureSpec& spec = {});
/// Spatial rate capacity.
CapacityPoint src(const NetworkConfig& cfg, double x, double r_o, int mu = 25, const QuadratureSpec& spec = {});
CapacityPoint capacity(const NetworkConfig& cfg, double x, const Metric& metric, int mu = 25,
                       const QuadratureSpec& spec = {});

struct OptimumReport {
  double lambda = 0.0;
  double height = 0.0;
  int n_s = 0;
  double objective = 0.0;
  // (lambda, height, n_s, objective) for every evaluation in order.
  std::vector<std::array<double, 4>> trace;
  std::vector<std::string> warnings;
};

/// Height maximizing coverage (SIR metric) or rate coverage (rate metric).
/// The bracket must lie within [1, 200] m.
OptimumReport optimize_height(const NetworkConfig& cfg, const Metric& metric, const OptimizerSpec& bracket,
                              const QuadratureSpec& spec = {});

struct CapacitySearch {
  double lambda_lo = 1e-5;
  double lambda_hi = 1e-3;
  int lambda_points = 5;  // log-spaced
  double height_lo = 10.0;
  double height_hi = 10.0;
  int height_points = 1;
  int n_s_lo = 1;
  int n_s_hi = 30;
  bool full_load = true;  // N_a = N_s
  bool refine = true;     // golden-section pass on lambda and height
  unsigned threads = 1;

  void validate() const;
};

/// Maximizes SCC (SIR metric) or SRC (rate metric) at reliability x over the
/// grid; ties go to the smallest lambda, then height, then N_s.
OptimumReport optimize_capacity(const NetworkConfig& cfg, const Metric& metric, double x,
                                const CapacitySearch& search, int mu = 25, const QuadratureSpec& spec = {});

enum class SweepAxis { lambda, h, n_s, theta, r_o, x };

std::string_view to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(std::string_view name);

struct SweepRow {
  double value = 0.0;     // axis value
  double coverage = 0.0;  // M_1
  double variance = 0.0;
  double ccdf = 0.0;      // at x
  double capacity = 0.0;  // N_a lambda ccdf
};

/// One row per grid point. theta / r_o axes replace the metric; the n_s axis
/// keeps N_a = N_s when full_load is set. Moments come from one Mnatsakanov
/// sequence per row.
std::vector<SweepRow> sweep(const NetworkConfig& cfg, const Metric& metric, SweepAxis axis,
                            std::span<const double> grid, double x, int mu = 25, bool full_load = true,
                            const QuadratureSpec& spec = {}, unsigned threads = 1);

}  // namespace sirmeta
