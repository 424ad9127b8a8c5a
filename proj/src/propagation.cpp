#include "sirmeta/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sirmeta/error.hpp"

namespace sirmeta {

namespace {

constexpr double kDegreesPerRadian = 180.0 / std::numbers::pi;

// Default urban LoS constants; applied to both deployments.
constexpr double kUrbanA = 9.6;
constexpr double kUrbanB = 0.28;

void check_geometry(double h, double r) {
  if (!(h >= 0.0) || !(r >= 0.0)) {
    throw InputError("height and ground distance must be nonnegative");
  }
  if (h == 0.0 && r == 0.0) {
    throw InputError("LoS probability undefined for a co-located BS (h = 0, r = 0)");
  }
}

double los_from_elevation(double elevation_deg, double a, double b) {
  return 1.0 / (1.0 + a * std::exp(-b * (elevation_deg - a)));
}

}  // namespace

void Environment::validate() const {
  for (const AbgParams* p : {&los, &nlos}) {
    if (!(p->alpha > 0.0)) throw InputError("ABG alpha must be > 0");
    if (!(p->gamma >= 0.0)) throw InputError("ABG gamma must be >= 0");
    if (!std::isfinite(p->beta)) throw InputError("ABG beta must be finite");
  }
  if (!(a > 0.0) || !(b > 0.0)) throw InputError("LoS constants a, b must be > 0");
  if (!(density_min < density_max)) throw InputError("density range must satisfy min < max");
}

Environment env_preset(Deployment deployment) {
  switch (deployment) {
    case Deployment::umi:
      return {{2.0, 31.4, 2.1}, {3.5, 24.4, 1.9}, kUrbanA, kUrbanB, deployment, 1e-5, 1e-3};
    case Deployment::uma:
      return {{2.8, 11.4, 2.3}, {3.3, 17.6, 2.0}, kUrbanA, kUrbanB, deployment, 1e-7, 1e-5};
  }
  throw InputError("unknown deployment");
}

Deployment parse_deployment(std::string_view name) {
  if (name == "umi" || name == "UMi") return Deployment::umi;
  if (name == "uma" || name == "UMa") return Deployment::uma;
  throw InputError("unknown deployment '" + std::string(name) + "' (expected umi or uma)");
}

std::string_view to_string(Deployment deployment) {
  return deployment == Deployment::umi ? "umi" : "uma";
}

std::string_view to_string(LinkType link) { return link == LinkType::los ? "los" : "nlos"; }

double los_probability(double h, double r, const Environment& env) {
  check_geometry(h, r);
  return los_from_elevation(kDegreesPerRadian * std::atan2(h, r), env.a, env.b);
}

double nlos_probability(double h, double r, const Environment& env) {
  return 1.0 - los_probability(h, r, env);
}

PathLossDb pathloss_db(double h, double r, LinkType link, const Environment& env, double f_ghz) {
  if (!(f_ghz > 0.0)) throw InputError("carrier frequency must be > 0 GHz");
  if (!(h >= 0.0) || !(r >= 0.0)) throw InputError("height and ground distance must be nonnegative");
  double d = std::hypot(h, r);
  const bool clamped = d < kMinDistance;
  d = std::max(d, kMinDistance);
  const AbgParams& p = env.params(link);
  return {10.0 * p.alpha * std::log10(d) + p.beta + 10.0 * p.gamma * std::log10(f_ghz), clamped};
}

double path_gain(double h, double r, LinkType link, const Environment& env, double f_ghz) {
  return db_to_linear(-pathloss_db(h, r, link, env, f_ghz).value);
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) {
  if (!(linear > 0.0)) throw InputError("dB conversion requires a positive linear value");
  return 10.0 * std::log10(linear);
}

LinkBudget::LinkBudget(const Environment& env, double h, double f_ghz)
    : h_(h),
      a_(env.a),
      b_(env.b),
      half_alpha_los_(0.5 * env.los.alpha),
      half_alpha_nlos_(0.5 * env.nlos.alpha),
      log_k_los_(-(env.los.beta + 10.0 * env.los.gamma * std::log10(f_ghz)) * std::numbers::ln10 / 10.0),
      log_k_nlos_(-(env.nlos.beta + 10.0 * env.nlos.gamma * std::log10(f_ghz)) * std::numbers::ln10 / 10.0) {}

double LinkBudget::los_probability(double r) const noexcept {
  return los_from_elevation(kDegreesPerRadian * std::atan2(h_, r), a_, b_);
}

double LinkBudget::gain(LinkType link, double r) const noexcept {
  const double log_d2 = std::log(std::max(h_ * h_ + r * r, kMinDistance * kMinDistance));
  return link == LinkType::los ? std::exp(log_k_los_ - half_alpha_los_ * log_d2)
                               : std::exp(log_k_nlos_ - half_alpha_nlos_ * log_d2);
}

LinkBudget::Sample LinkBudget::at(double r) const noexcept {
  const double log_d2 = std::log(std::max(h_ * h_ + r * r, kMinDistance * kMinDistance));
  return {los_probability(r), std::exp(log_k_los_ - half_alpha_los_ * log_d2),
          std::exp(log_k_nlos_ - half_alpha_nlos_ * log_d2)};
}

}  // namespace sirmeta
