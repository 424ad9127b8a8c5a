#include "sirmeta/network.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>

#include "sirmeta/error.hpp"
#include "sirmeta/format.hpp"

namespace sirmeta {

void NetworkConfig::validate() const {
  env.validate();
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InputError("invariant violated: lambda > 0");
  if (!(height >= 0.0) || !std::isfinite(height)) throw InputError("invariant violated: height >= 0");
  if (!(n_a >= 1 && n_a <= n_s)) throw InputError("invariant violated: 1 <= N_a <= N_s");
  if (!(bandwidth > 0.0)) throw InputError("invariant violated: bandwidth > 0");
  if (!(carrier_ghz > 0.0)) throw InputError("invariant violated: carrier frequency > 0");
  if (field_radius && !(*field_radius > 0.0)) throw InputError("invariant violated: field radius > 0");
}

std::vector<std::string> NetworkConfig::warnings() const {
  std::vector<std::string> out;
  if (lambda < env.density_min || lambda > env.density_max) {
    out.push_back("lambda " + format_double(lambda) + " outside the " +
                  std::string(to_string(env.deployment)) + " density range [" +
                  format_double(env.density_min) + ", " + format_double(env.density_max) + "]");
  }
  return out;
}

std::string NetworkConfig::canonical() const {
  auto abg = [](const AbgParams& p) {
    return format_double(p.alpha) + "," + format_double(p.beta) + "," + format_double(p.gamma);
  };
  std::string s;
  s += "deployment=" + std::string(to_string(env.deployment));
  s += ";lambda=" + format_double(lambda);
  s += ";height=" + format_double(height);
  s += ";n_a=" + std::to_string(n_a);
  s += ";n_s=" + std::to_string(n_s);
  s += ";bandwidth=" + format_double(bandwidth);
  s += ";carrier=" + format_double(carrier_ghz);
  s += ";los=" + abg(env.los);
  s += ";nlos=" + abg(env.nlos);
  s += ";a=" + format_double(env.a);
  s += ";b=" + format_double(env.b);
  s += ";field_radius=" + (field_radius ? format_double(*field_radius) : std::string("auto"));
  return s;
}

std::string NetworkConfig::digest() const { return fnv1a_hex(canonical()); }

void validate(const Metric& metric) {
  if (const auto* sir = std::get_if<SirThreshold>(&metric)) {
    if (!(sir->theta > 0.0) || !std::isfinite(sir->theta)) throw InputError("invariant violated: theta > 0");
  } else {
    const auto& rate = std::get<RateThreshold>(metric);
    if (!(rate.r_o > 0.0) || !std::isfinite(rate.r_o)) throw InputError("invariant violated: R_o > 0");
  }
}

std::string describe(const Metric& metric) {
  if (const auto* sir = std::get_if<SirThreshold>(&metric)) return "theta=" + format_double(sir->theta);
  return "r_o=" + format_double(std::get<RateThreshold>(metric).r_o);
}

double rate_to_sir_threshold(double r_o, int n_s, double w) {
  if (!(r_o > 0.0) || n_s < 1 || !(w > 0.0)) {
    throw InputError("rate threshold needs r_o > 0, n_s >= 1, w > 0");
  }
  const double exponent = r_o * n_s / w;
  if (exponent > 1000.0) throw InputError("rate threshold exponent r_o n_s / w exceeds 1000");
  return std::expm1(exponent * std::numbers::ln2);
}

double effective_threshold(const Metric& metric, const NetworkConfig& cfg) {
  validate(metric);
  if (const auto* sir = std::get_if<SirThreshold>(&metric)) return sir->theta;
  return rate_to_sir_threshold(std::get<RateThreshold>(metric).r_o, cfg.n_s, cfg.bandwidth);
}

double automatic_field_radius(double lambda, const Environment& env) {
  if (!(env.nlos.alpha > 2.0)) {
    throw InputError("automatic field radius needs NLoS alpha > 2; set field_radius explicitly");
  }
  const double mean_nearest = 0.5 / std::sqrt(lambda);
  const double tail_rule = mean_nearest * std::pow(1e3, 1.0 / (env.nlos.alpha - 2.0));
  const double floor = 10.0 / std::sqrt(std::numbers::pi * lambda);
  return std::max(tail_rule, floor);
}

double field_radius(const NetworkConfig& cfg) {
  return cfg.field_radius ? *cfg.field_radius : automatic_field_radius(cfg.lambda, cfg.env);
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sirmeta
