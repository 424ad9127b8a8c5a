#include "sirmeta/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "radial.hpp"
#include "sirmeta/error.hpp"
#include "sirmeta/kernels.hpp"

namespace sirmeta {

namespace {

// 1 - (1 + x)^-m
double real_deficit(double x, double m) { return -std::expm1(-m * std::log1p(x)); }

void validate_order(const MomentOrder& order) {
  if (const auto* r = std::get_if<RealOrder>(&order)) {
    if (!(r->m >= 0.0) || !std::isfinite(r->m)) throw InputError("moment order must be finite and >= 0");
  } else if (!std::isfinite(std::get<ImaginaryOrder>(order).t)) {
    throw InputError("imaginary moment order must be finite");
  }
}

}  // namespace

std::complex<double> eta_m(double s, double r, const MomentOrder& order, double h, const Environment& env,
                           double f_ghz) {
  validate_order(order);
  if (!(s >= 0.0)) throw InputError("eta_m needs s >= 0");
  if (!(r > 0.0)) throw InputError("eta_m needs r > 0");
  const double p = los_probability(h, r, env);
  const double xl = s * path_gain(h, r, LinkType::los, env, f_ghz);
  const double xn = s * path_gain(h, r, LinkType::nlos, env, f_ghz);
  if (const auto* real = std::get_if<RealOrder>(&order)) {
    if (real->m == 0.0) return 1.0;
    return p * std::pow(1.0 + xl, -real->m) + (1.0 - p) * std::pow(1.0 + xn, -real->m);
  }
  const double t = std::get<ImaginaryOrder>(order).t;
  if (t == 0.0) return 1.0;
  return p * std::polar(1.0, -t * std::log1p(xl)) + (1.0 - p) * std::polar(1.0, -t * std::log1p(xn));
}

double moment(const NetworkConfig& cfg, const Metric& metric, RealOrder order, const QuadratureSpec& spec) {
  validate_order(order);
  cfg.validate();
  const double theta = effective_threshold(metric, cfg);
  if (order.m == 0.0) return 1.0;
  const auto setup = detail::make_radial(cfg, theta, spec);
  const double m = order.m;
  auto kernel = [m](double s, std::span<const double> p, std::span<const double> gl, std::span<const double> gn,
                    std::span<double> out) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      out[i] = p[i] * real_deficit(s * gl[i], m) + (1.0 - p[i]) * real_deficit(s * gn[i], m);
    }
  };
  return std::clamp(detail::radial_average<double>(setup, 1, kernel).value[0], 0.0, 1.0);
}

void complex_moments(const NetworkConfig& cfg, const Metric& metric, std::span<const double> t,
                     std::span<std::complex<double>> out, const QuadratureSpec& spec) {
  if (out.size() != t.size()) throw InputError("complex_moments: output size mismatch");
  for (double v : t) validate_order(ImaginaryOrder{v});
  cfg.validate();
  const double theta = effective_threshold(metric, cfg);
  if (t.empty()) return;
  const auto setup = detail::make_radial(cfg, theta, spec);
  const std::size_t k_count = t.size();
  // 1 - e^{-j phi} = 2 sin^2(phi / 2) + j sin(phi), phi = t log(1 + x).
  auto kernel = [&](double s, std::span<const double> p, std::span<const double> gl, std::span<const double> gn,
                    std::span<std::complex<double>> res) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double ll = std::log1p(s * gl[i]);
      const double ln = std::log1p(s * gn[i]);
      const double pl = p[i];
      const double pn = 1.0 - p[i];
      for (std::size_t k = 0; k < k_count; ++k) {
        const double sl = std::sin(0.5 * t[k] * ll);
        const double cl = std::cos(0.5 * t[k] * ll);
        const double sn = std::sin(0.5 * t[k] * ln);
        const double cn = std::cos(0.5 * t[k] * ln);
        res[i * k_count + k] = {2.0 * (pl * sl * sl + pn * sn * sn), 2.0 * (pl * sl * cl + pn * sn * cn)};
      }
    }
  };
  const auto r = detail::radial_average<std::complex<double>>(setup, k_count, kernel);
  for (std::size_t k = 0; k < k_count; ++k) out[k] = t[k] == 0.0 ? std::complex<double>(1.0) : r.value[k];
}

std::complex<double> moment(const NetworkConfig& cfg, const Metric& metric, ImaginaryOrder order,
                            const QuadratureSpec& spec) {
  std::complex<double> out;
  complex_moments(cfg, metric, std::span<const double>(&order.t, 1), std::span<std::complex<double>>(&out, 1),
                  spec);
  return out;
}

std::complex<double> moment(const NetworkConfig& cfg, const Metric& metric, const MomentOrder& order,
                            const QuadratureSpec& spec) {
  return std::visit([&](const auto& o) { return std::complex<double>(moment(cfg, metric, o, spec)); }, order);
}

MomentSequence moment_sequence(const NetworkConfig& cfg, const Metric& metric, int mu, const QuadratureSpec& spec) {
  if (mu < 1) throw InputError("moment sequence needs mu >= 1");
  cfg.validate();
  const double theta = effective_threshold(metric, cfg);
  const auto setup = detail::make_radial(cfg, theta, spec);
  const auto orders = static_cast<std::size_t>(mu);
  auto kernel = [orders](double s, std::span<const double> p, std::span<const double> gl,
                         std::span<const double> gn, std::span<double> out) {
    kernels::eta_deficit_orders(s, p, gl, gn, orders, out);
  };
  const auto r = detail::radial_average<double>(setup, orders, kernel);
  MomentSequence seq{metric, cfg.digest(), {}, mu, r.error};
  seq.values.reserve(orders + 1);
  seq.values.push_back(1.0);
  for (double v : r.value) seq.values.push_back(v);
  return seq;
}

double variance_from_moments(double m1, double m2) {
  const double v = m2 - m1 * m1;
  if (v < -1e-9) {
    throw NumericalError("negative variance: moments are inconsistent", v, -v);
  }
  return std::max(v, 0.0);
}

double variance(const NetworkConfig& cfg, const Metric& metric, const QuadratureSpec& spec) {
  const auto seq = moment_sequence(cfg, metric, 2, spec);
  return variance_from_moments(seq.values[1], seq.values[2]);
}

double hausdorff_min_difference(std::span<const double> moments) {
  std::vector<double> row(moments.begin(), moments.end());
  double lowest = std::numeric_limits<double>::infinity();
  while (!row.empty()) {
    lowest = std::min(lowest, *std::min_element(row.begin(), row.end()));
    for (std::size_t j = 0; j + 1 < row.size(); ++j) row[j] = row[j] - row[j + 1];
    row.pop_back();
  }
  return lowest;
}

}  // namespace sirmeta
