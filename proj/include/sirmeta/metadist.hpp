#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sirmeta/moments.hpp"
#include "sirmeta/network.hpp"
#include "sirmeta/numerics.hpp"

namespace sirmeta {

enum class MetaMethod { gil_pelaez, mnatsakanov };

std::string_view to_string(MetaMethod method);
MetaMethod parse_meta_method(std::string_view name);

inline constexpr int kDefaultMu = 25;
inline constexpr int kMaxMu = 60;

struct GilPelaezPoint {
  double ccdf = 0.0;
  GilPelaezResult inversion;
};

/// P(P_s > x) by inverting the imaginary moments. Throws NumericalError when
/// the truncated tail cannot be bounded below options.tail_tolerance.
GilPelaezPoint meta_ccdf_gil_pelaez_detail(const NetworkConfig& cfg, const Metric& metric, double x,
                                           const QuadratureSpec& spec = {}, const GilPelaezOptions& options = {});
double meta_ccdf_gil_pelaez(const NetworkConfig& cfg, const Metric& metric, double x,
                            const QuadratureSpec& spec = {}, const GilPelaezOptions& options = {});

struct MnatsakanovValue {
  double cdf = 0.0;
  double roundoff = 0.0;  // estimated floating-point error of cdf
};

/// Moment-based CDF approximation at x from [M_0, ..., M_mu]:
///   S(x) = sum_{k <= floor(mu x)} C(mu, k) ((-Delta)^{mu-k} M)_k.
/// Evaluated from a long double difference table with exact binomials. For
/// mu <= 30 the roundoff field is the gap to the direct double sum with exact
/// integer weights; above that it is an a priori bound.
MnatsakanovValue mnatsakanov_cdf(std::span<const double> moments, double x);
MnatsakanovValue mnatsakanov_cdf(const MomentSequence& moments, double x);

/// 1 - mnatsakanov_cdf(moment_sequence(cfg, metric, mu), x), clamped to [0, 1].
double meta_ccdf_mnatsakanov(const NetworkConfig& cfg, const Metric& metric, double x, int mu = kDefaultMu,
                             const QuadratureSpec& spec = {});

struct MetaCurve {
  std::vector<double> x_grid;
  std::vector<double> ccdf;
  MetaMethod method = MetaMethod::mnatsakanov;
  int mu = 0;                            // Mnatsakanov only
  std::vector<std::string> diagnostics;  // one per x
};

/// Tabulated CCDF. Mnatsakanov computes the moments once for the whole grid;
/// Gil-Pelaez inverts at each x.
MetaCurve meta_curve(const NetworkConfig& cfg, const Metric& metric, std::span<const double> x_grid,
                     MetaMethod method, int mu = kDefaultMu, const QuadratureSpec& spec = {},
                     const GilPelaezOptions& options = {});

}  // namespace sirmeta
