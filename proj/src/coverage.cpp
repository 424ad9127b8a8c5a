#include "sirmeta/coverage.hpp"

#include <cmath>
#include <numbers>

#include "radial.hpp"
#include "sirmeta/error.hpp"
#include "sirmeta/kernels.hpp"

namespace sirmeta {

namespace {

void eta_kernel(double s, std::span<const double> p, std::span<const double> gl, std::span<const double> gn,
                std::span<double> out) {
  kernels::eta_deficit_orders(s, p, gl, gn, 1, out);
}

}  // namespace

double eta(double s, double r, double h, const Environment& env, double f_ghz) {
  if (!(s >= 0.0)) throw InputError("eta needs s >= 0");
  if (!(r > 0.0)) throw InputError("eta needs r > 0");
  const double p = los_probability(h, r, env);
  if (std::isinf(s)) return 0.0;
  const double gl = path_gain(h, r, LinkType::los, env, f_ghz);
  const double gn = path_gain(h, r, LinkType::nlos, env, f_ghz);
  return p / (1.0 + s * gl) + (1.0 - p) / (1.0 + s * gn);
}

double laplace_factor(double r1, double s, const NetworkConfig& cfg, const QuadratureSpec& spec) {
  if (!(r1 > 0.0)) throw InputError("laplace_factor needs r1 > 0");
  if (!(s >= 0.0) || !std::isfinite(s)) throw InputError("laplace_factor needs finite s >= 0");
  const auto setup = detail::make_radial(cfg, 0.0, spec);
  auto kernel = eta_kernel;
  const auto integral = detail::inner_integral<double>(setup, s, r1, 1, kernel);
  return std::exp(-setup.c * integral[0]);
}

double coverage_probability(const NetworkConfig& cfg, double theta, const QuadratureSpec& spec) {
  validate(Metric{SirThreshold{theta}});
  const auto setup = detail::make_radial(cfg, theta, spec);
  const auto r = detail::radial_average<double>(setup, 1, eta_kernel);
  return std::clamp(r.value[0], 0.0, 1.0);
}

double rate_coverage_probability(const NetworkConfig& cfg, double r_o, const QuadratureSpec& spec) {
  cfg.validate();
  return coverage_probability(cfg, rate_to_sir_threshold(r_o, cfg.n_s, cfg.bandwidth), spec);
}

double coverage(const NetworkConfig& cfg, const Metric& metric, const QuadratureSpec& spec) {
  cfg.validate();
  return coverage_probability(cfg, effective_threshold(metric, cfg), spec);
}

}  // namespace sirmeta
