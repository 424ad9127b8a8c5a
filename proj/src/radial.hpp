#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "sirmeta/error.hpp"
#include "sirmeta/network.hpp"
#include "sirmeta/numerics.hpp"
#include "sirmeta/propagation.hpp"

// Two-level radial integral shared by coverage and moments:
//
//   sum_k  E_{R1}[ P_L(R1) exp(-c I_k(s_L)) + P_NL(R1) exp(-c I_k(s_NL)) ]
//   I_k(s) = int_{r1}^{R} d_k(s, r) r dr,   s_link = theta / G_link(r1),
//
// where d_k = 1 - eta_k is supplied by a kernel and c = 2 pi lambda N_a/N_s.
// All components share one outer and one inner subdivision per outer node, so
// integer-order moments come out as exact moments of a positive discrete measure.
namespace sirmeta::detail {

// exp(-rho^2) < 1e-12 beyond this.
inline const double kRhoMax = std::sqrt(12.0 * std::numbers::ln10);

struct RadialSetup {
  LinkBudget link;
  double theta;
  double c;       // 2 pi lambda N_a / N_s
  double radius;  // field radius, may be +inf
  double scale;   // r1 = rho * scale
  QuadratureSpec outer;
  QuadratureSpec inner;
};

inline RadialSetup make_radial(const NetworkConfig& cfg, double theta, const QuadratureSpec& spec) {
  cfg.validate();
  spec.validate();
  const double c = 2.0 * std::numbers::pi * cfg.lambda * cfg.active_ratio();
  QuadratureSpec inner = spec;
  inner.rel_tol = spec.rel_tol / 10.0;
  inner.abs_tol = spec.abs_tol / c;
  return {LinkBudget(cfg.env, cfg.height, cfg.carrier_ghz),
          theta,
          c,
          field_radius(cfg),
          1.0 / std::sqrt(std::numbers::pi * cfg.lambda),
          spec,
          inner};
}

// Kernel: kernel(s, p, gl, gn, out) fills out[i * K + k] = d_k(s, r_i) given
// the link samples at the nodes r_i.
template <class T, class Kernel>
std::vector<T> inner_integral(const RadialSetup& setup, double s, double r1, std::size_t components,
                              Kernel& kernel) {
  std::vector<double> r;
  std::vector<double> p;
  std::vector<double> gl;
  std::vector<double> gn;
  auto sample = [&](std::size_t n) {
    p.resize(n);
    gl.resize(n);
    gn.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto v = setup.link.at(r[i]);
      p[i] = v.p_los;
      gl[i] = v.gain_los;
      gn[i] = v.gain_nlos;
    }
  };

  if (std::isinf(setup.radius)) {
    auto f = [&](std::span<const double> x, std::span<T> out) {
      r.assign(x.begin(), x.end());
      sample(x.size());
      kernel(s, std::span<const double>(p), std::span<const double>(gl), std::span<const double>(gn), out);
      for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t k = 0; k < components; ++k) out[i * components + k] *= r[i];
      }
    };
    auto res = integrate_semi_infinite_batch<T>(f, components, r1, setup.inner);
    double norm = 0.0;
    for (const auto& v : res.value) norm = std::max(norm, std::abs(v));
    if (res.error > std::max(setup.inner.abs_tol, setup.inner.rel_tol * norm)) {
      throw NumericalError("interference integral over the unbounded plane does not converge; set a finite field radius",
                           norm, res.error);
    }
    return std::move(res.value);
  }
  if (setup.radius <= r1) return std::vector<T>(components, T{});

  // r = r1 e^u, r dr = r^2 du.
  auto f = [&](std::span<const double> u, std::span<T> out) {
    r.resize(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) r[i] = r1 * std::exp(u[i]);
    sample(u.size());
    kernel(s, std::span<const double>(p), std::span<const double>(gl), std::span<const double>(gn), out);
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double w = r[i] * r[i];
      for (std::size_t k = 0; k < components; ++k) out[i * components + k] *= w;
    }
  };
  return integrate_batch<T>(f, components, 0.0, std::log(setup.radius / r1), setup.inner).value;
}

template <class T, class Kernel>
QuadratureResult<T> radial_average(const RadialSetup& setup, std::size_t components, Kernel&& kernel) {
  auto outer = [&](std::span<const double> rho, std::span<T> out) {
    for (std::size_t i = 0; i < rho.size(); ++i) {
      const double r1 = rho[i] * setup.scale;
      const double weight = 2.0 * rho[i] * std::exp(-rho[i] * rho[i]);
      const auto v = setup.link.at(r1);
      const auto a = inner_integral<T>(setup, setup.theta / v.gain_los, r1, components, kernel);
      const auto b = inner_integral<T>(setup, setup.theta / v.gain_nlos, r1, components, kernel);
      for (std::size_t k = 0; k < components; ++k) {
        out[i * components + k] =
            weight * (v.p_los * std::exp(-setup.c * a[k]) + (1.0 - v.p_los) * std::exp(-setup.c * b[k]));
      }
    }
  };
  return integrate_batch<T>(outer, components, 0.0, kRhoMax, setup.outer);
}

}  // namespace sirmeta::detail
