#pragma once

#include <string_view>

namespace sirmeta {

enum class LinkType { los, nlos };
enum class Deployment { umi, uma };

/// Alpha-beta-gamma large-scale path-loss coefficients of one link type.
struct AbgParams {
  double alpha;  // distance exponent
  double beta;   // offset, dB
  double gamma;  // frequency exponent
};

/// Path-loss coefficients for both link types plus the constants of the
/// elevation-angle LoS model. Densities are BS per square meter.
struct Environment {
  AbgParams los;
  AbgParams nlos;
  double a;
  double b;
  Deployment deployment;
  double density_min;
  double density_max;

  const AbgParams& params(LinkType link) const noexcept {
    return link == LinkType::los ? los : nlos;
  }

  /// Throws InputError when a coefficient is out of its domain.
  void validate() const;
};

/// Minimum 3-D link distance in meters; shorter distances are clamped.
inline constexpr double kMinDistance = 1.0;

Environment env_preset(Deployment deployment);
Deployment parse_deployment(std::string_view name);
std::string_view to_string(Deployment deployment);
std::string_view to_string(LinkType link);

/// Probability that a BS at height h (m) and ground distance r (m) is seen in LoS.
double los_probability(double h, double r, const Environment& env);
double nlos_probability(double h, double r, const Environment& env);

struct PathLossDb {
  double value;  // dB
  bool clamped;  // true when the 3-D distance was raised to kMinDistance
};

/// ABG path loss in dB; f in GHz. Shadowing is not modeled.
PathLossDb pathloss_db(double h, double r, LinkType link, const Environment& env, double f_ghz);

/// Linear gain 10^(-PL/10).
double path_gain(double h, double r, LinkType link, const Environment& env, double f_ghz);

double db_to_linear(double db);
double linear_to_db(double linear);

/// Link model with height and carrier bound. No argument checking; this is
/// what the integration and sampling loops call.
class LinkBudget {
 public:
  struct Sample {
    double p_los;
    double gain_los;
    double gain_nlos;
  };

  LinkBudget(const Environment& env, double h, double f_ghz);

  double los_probability(double r) const noexcept;
  double gain(LinkType link, double r) const noexcept;
  Sample at(double r) const noexcept;

  double height() const noexcept { return h_; }

 private:
  double h_;
  double a_;
  double b_;
  double half_alpha_los_;
  double half_alpha_nlos_;
  double log_k_los_;
  double log_k_nlos_;
};

}  // namespace sirmeta
