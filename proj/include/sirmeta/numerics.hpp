#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sirmeta/error.hpp"
#include "sirmeta/parallel.hpp"

namespace sirmeta {

/// Tolerances for the adaptive integrators.
struct QuadratureSpec {
  double rel_tol = 1e-6;
  double abs_tol = 1e-10;
  int max_subdivisions = 400;
  // Semi-infinite integrals are truncated once |f| drops below tail_cutoff * peak.
  double tail_cutoff = 1e-10;

  void validate() const;
};

template <class T>
struct QuadratureResult {
  std::vector<T> value;  // one entry per component
  double error = 0.0;    // estimated absolute error, max over components
  std::size_t evaluations = 0;
  std::size_t intervals = 0;
};

namespace detail {

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

// 15-point Kronrod rule with its embedded 7-point Gauss rule, on [-1, 1].
struct GaussKronrod15 {
  static constexpr std::size_t size = 15;
  std::array<double, size> nodes;
  std::array<double, size> kronrod;
  std::array<double, size> gauss;  // zero at Kronrod-only nodes
};

const GaussKronrod15& gauss_kronrod15();

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of a vector-valued integrand over [a, b].
///
/// The integrand is called with a batch of abscissae x and must fill
/// out[i * components + k] with component k at x[i]. All components share one
/// subdivision tree, so every component is integrated with the same set of
/// positive weights. The worst component drives refinement.
///
/// Throws NumericalError when max_subdivisions is reached before the error
/// estimate drops below max(abs_tol, rel_tol * |value|).
template <class T, class F>
QuadratureResult<T> integrate_batch(F&& f, std::size_t components, double a, double b,
                                    const QuadratureSpec& spec) {
  const auto& rule = detail::gauss_kronrod15();
  constexpr std::size_t n = detail::GaussKronrod15::size;

  struct Interval {
    double lo;
    double hi;
    double error;
    double magnitude;  // integral of |f|, for the roundoff floor
    std::vector<T> value;
  };

  QuadratureResult<T> result;
  result.value.assign(components, T{});
  if (a == b || components == 0) return result;

  std::array<double, n> x{};
  std::vector<T> fx(n * components);

  auto evaluate = [&](double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    for (std::size_t i = 0; i < n; ++i) x[i] = mid + half * rule.nodes[i];
    f(std::span<const double>(x.data(), n), std::span<T>(fx.data(), fx.size()));
    result.evaluations += n;
    Interval iv{lo, hi, 0.0, 0.0, std::vector<T>(components)};
    for (std::size_t k = 0; k < components; ++k) {
      T kronrod{};
      T gauss{};
      double mag = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const T v = fx[i * components + k];
        kronrod += rule.kronrod[i] * v;
        gauss += rule.gauss[i] * v;
        mag += rule.kronrod[i] * detail::magnitude(v);
      }
      iv.value[k] = half * kronrod;
      iv.error = std::max(iv.error, std::abs(half) * detail::magnitude(kronrod - gauss));
      iv.magnitude = std::max(iv.magnitude, std::abs(half) * mag);
    }
    return iv;
  };

  auto by_error = [](const Interval& l, const Interval& r) { return l.error < r.error; };
  std::vector<Interval> heap;
  heap.push_back(evaluate(a, b));

  auto totals = [&] {
    std::vector<T> sum(components, T{});
    double err = 0.0;
    double mag = 0.0;
    for (const auto& iv : heap) {
      for (std::size_t k = 0; k < components; ++k) sum[k] += iv.value[k];
      err += iv.error;
      mag += iv.magnitude;
    }
    return std::make_tuple(std::move(sum), err, mag);
  };

  for (;;) {
    auto [sum, err, mag] = totals();
    double norm = 0.0;
    for (const auto& v : sum) norm = std::max(norm, detail::magnitude(v));
    const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * mag;
    const double tol = std::max({spec.abs_tol, spec.rel_tol * norm, roundoff});
    if (err <= tol) break;
    if (static_cast<int>(heap.size()) >= spec.max_subdivisions) {
      throw NumericalError("adaptive quadrature did not converge within " +
                               std::to_string(spec.max_subdivisions) + " subintervals",
                           sum.empty() ? 0.0 : detail::magnitude(sum[0]), err);
    }
    std::pop_heap(heap.begin(), heap.end(), by_error);
    const Interval worst = std::move(heap.back());
    heap.pop_back();
    const double mid = 0.5 * (worst.lo + worst.hi);
    heap.push_back(evaluate(worst.lo, mid));
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back(evaluate(mid, worst.hi));
    std::push_heap(heap.begin(), heap.end(), by_error);
  }

  // Sum left to right so the result does not depend on heap order.
  std::sort(heap.begin(), heap.end(), [](const Interval& l, const Interval& r) { return l.lo < r.lo; });
  for (const auto& iv : heap) {
    for (std::size_t k = 0; k < components; ++k) result.value[k] += iv.value[k];
    result.error += iv.error;
  }
  result.intervals = heap.size();
  return result;
}

/// Scalar convenience wrapper around integrate_batch. f(x) returns double or
/// std::complex<double>.
template <class F>
auto integrate(F&& f, double a, double b, const QuadratureSpec& spec) {
  using T = std::decay_t<decltype(f(a))>;
  auto batch = [&](std::span<const double> x, std::span<T> out) {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = f(x[i]);
  };
  auto r = integrate_batch<T>(batch, 1, a, b, spec);
  return std::make_pair(r.value[0], r.error);
}

/// Integrates a batch integrand over [a, inf). The tail is truncated at the
/// first probe point a + 2^k - 1 beyond which |f| stays below
/// tail_cutoff * peak for three consecutive probes; the remaining interval is
/// mapped to (0, 1] with u = 1 / (1 + r - a). The reported error includes an
/// estimate of the dropped tail.
template <class T, class F>
QuadratureResult<T> integrate_semi_infinite_batch(F&& f, std::size_t components, double a,
                                                  const QuadratureSpec& spec) {
  std::vector<T> probe(components);
  std::array<double, 1> at{};
  auto probe_magnitude = [&](double r) {
    at[0] = r;
    f(std::span<const double>(at.data(), 1), std::span<T>(probe.data(), probe.size()));
    double m = 0.0;
    for (const auto& v : probe) m = std::max(m, detail::magnitude(v));
    return m;
  };

  double peak = 0.0;
  double cut = 0.0;
  int quiet = 0;
  for (int k = 0; k <= 100; ++k) {
    const double r = a + (std::ldexp(1.0, k) - 1.0);
    const double m = probe_magnitude(r);
    peak = std::max(peak, m);
    if (peak > 0.0 && m < spec.tail_cutoff * peak) {
      if (quiet++ == 0) cut = r;
      if (quiet == 3) break;
    } else {
      quiet = 0;
      cut = r;
    }
  }
  const double u_min = 1.0 / (1.0 + (cut - a));
  // The dropped tail is charged to the error estimate as |f(cut)| (cut - a + 1),
  // which bounds it for tails decaying at least like r^-2.
  const double tail = probe_magnitude(cut) * (cut - a + 1.0);

  std::vector<double> r;
  auto mapped = [&](std::span<const double> u, std::span<T> out) {
    r.resize(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) r[i] = a + 1.0 / u[i] - 1.0;
    f(std::span<const double>(r.data(), r.size()), out);
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double jac = 1.0 / (u[i] * u[i]);
      for (std::size_t k = 0; k < components; ++k) out[i * components + k] *= jac;
    }
  };
  auto result = integrate_batch<T>(mapped, components, u_min, 1.0, spec);
  result.error += tail;
  return result;
}

/// Scalar form of integrate_semi_infinite_batch.
template <class F>
auto integrate_semi_infinite(F&& f, double a, const QuadratureSpec& spec) {
  using T = std::decay_t<decltype(f(a))>;
  auto batch = [&](std::span<const double> x, std::span<T> out) {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = f(x[i]);
  };
  auto r = integrate_semi_infinite_batch<T>(batch, 1, a, spec);
  return std::make_pair(r.value[0], r.error);
}

struct GilPelaezOptions {
  double t_max = 200.0;
  // Extension stops once |M(t_max)| or the estimated tail bound fall below these.
  double modulus_threshold = 1e-4;
  double tail_tolerance = 1e-3;
  double t_cap = 12800.0;
  // Absolute tolerance for the integral over [0, t_max]; spread over panels.
  double abs_tol = 1e-6;
  double max_panel_width = 8.0;

  void validate() const;
};

struct GilPelaezResult {
  double integral = 0.0;  // of Im[exp(-j t log x) M(jt)] / t over [0, t_max]
  double error = 0.0;
  double t_max = 0.0;               // upper limit actually used
  double truncation_modulus = 0.0;  // |M(j t_max)|
  double tail_bound = 0.0;          // |M(j t_max)| / (pi |log x| t_max)
  std::size_t evaluations = 0;
};

/// Integrates the Gil-Pelaez kernel Im[exp(-j t log x) M(jt)] / t on [0, t_max].
///
/// `moments(t, out)` fills out[i] with the complex moment M(j t[i]). The range
/// is cut into panels no wider than half an oscillation period pi / |log x|,
/// each integrated adaptively. While |M(j t_max)| exceeds modulus_threshold and
/// the tail estimate exceeds tail_tolerance, t_max is doubled up to t_cap.
/// A larger panel_omega narrows the panels to pi / panel_omega, which lets
/// several x share one panel grid (and cached moments).
template <class F>
GilPelaezResult gil_pelaez_integral(F&& moments, double log_x, const QuadratureSpec& spec,
                                    const GilPelaezOptions& options, double panel_omega = 0.0) {
  options.validate();
  if (log_x == 0.0 || !std::isfinite(log_x)) {
    throw InputError("Gil-Pelaez inversion needs a finite nonzero log x");
  }
  const double omega = std::abs(log_x);
  const double width = std::min(std::numbers::pi / std::max(omega, panel_omega), options.max_panel_width);

  std::vector<std::complex<double>> m;
  auto integrand = [&](std::span<const double> t, std::span<double> out) {
    m.resize(t.size());
    moments(t, std::span<std::complex<double>>(m.data(), m.size()));
    for (std::size_t i = 0; i < t.size(); ++i) {
      out[i] = std::imag(std::polar(1.0, -t[i] * log_x) * m[i]) / t[i];
    }
  };

  GilPelaezResult result;
  auto integrate_range = [&](double lo, double hi) {
    const auto panels = static_cast<std::size_t>(std::ceil((hi - lo) / width));
    const double w = (hi - lo) / static_cast<double>(panels);
    QuadratureSpec panel_spec = spec;
    panel_spec.abs_tol = std::max(spec.abs_tol, options.abs_tol * w / options.t_max);
    for (std::size_t p = 0; p < panels; ++p) {
      const double a = lo + static_cast<double>(p) * w;
      const double b = (p + 1 == panels) ? hi : a + w;
      auto r = integrate_batch<double>(integrand, 1, a, b, panel_spec);
      result.integral += r.value[0];
      result.error += r.error;
      result.evaluations += r.evaluations;
    }
  };

  double t_max = options.t_max;
  integrate_range(0.0, t_max);
  for (;;) {
    std::array<double, 1> t{t_max};
    std::array<std::complex<double>, 1> mt{};
    moments(std::span<const double>(t), std::span<std::complex<double>>(mt));
    result.truncation_modulus = std::abs(mt[0]);
    result.tail_bound = result.truncation_modulus / (std::numbers::pi * omega * t_max);
    if (result.truncation_modulus <= options.modulus_threshold ||
        result.tail_bound <= options.tail_tolerance || 2.0 * t_max > options.t_cap) {
      break;
    }
    integrate_range(t_max, 2.0 * t_max);
    t_max *= 2.0;
  }
  result.t_max = t_max;
  return result;
}

/// Bracket and stopping rule for the scalar maximizer.
struct OptimizerSpec {
  double lo = 0.0;
  double hi = 1.0;
  double x_tol = 1e-3;
  int max_evals = 200;
  int grid_points = 17;  // coarse scan before golden section; at least 17

  void validate() const;
};

struct ScalarOptimum {
  double argmax = 0.0;
  double value = 0.0;
  int evaluations = 0;
  bool converged = true;      // false when max_evals ran out first
  bool at_boundary = false;   // best grid point was an end of the bracket
  int grid_local_maxima = 0;  // more than one hints at multimodality
  std::vector<std::pair<double, double>> trace;
};

/// Maximizes f on [lo, hi]: a uniform grid scan picks the best cell, then
/// golden-section search shrinks the cell around it to x_tol.
template <class F>
ScalarOptimum golden_section_max(F&& f, const OptimizerSpec& spec) {
  spec.validate();
  ScalarOptimum out;
  auto eval = [&](double x) {
    const double v = f(x);
    ++out.evaluations;
    out.trace.emplace_back(x, v);
    if (out.evaluations == 1 || v > out.value) {
      out.value = v;
      out.argmax = x;
    }
    return v;
  };

  const int n = std::max(spec.grid_points, 17);
  std::vector<double> xs(n);
  std::vector<double> fs(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = (i == n - 1) ? spec.hi : spec.lo + (spec.hi - spec.lo) * i / (n - 1);
    fs[i] = eval(xs[i]);
  }
  const auto best = static_cast<int>(std::max_element(fs.begin(), fs.end()) - fs.begin());
  for (int i = 0; i < n; ++i) {
    const bool left = i == 0 || fs[i] > fs[i - 1];
    const bool right = i == n - 1 || fs[i] >= fs[i + 1];
    if (left && right) ++out.grid_local_maxima;
  }
  out.at_boundary = best == 0 || best == n - 1;

  double a = xs[std::max(best - 1, 0)];
  double b = xs[std::min(best + 1, n - 1)];
  constexpr double inv_phi = 0.6180339887498949;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = eval(c);
  double fd = eval(d);
  while (b - a > spec.x_tol) {
    if (out.evaluations >= spec.max_evals) {
      out.converged = false;
      break;
    }
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = eval(d);
    }
  }
  return out;
}

struct GridAxis {
  std::vector<double> points;
  bool integer = false;  // integer axes are only enumerated, never refined
};

struct GridOptimum {
  std::vector<double> argmax;
  double value = 0.0;
  std::size_t evaluations = 0;
  std::vector<std::pair<std::vector<double>, double>> trace;
};

/// Exhaustive search over the tensor grid, then one golden-section pass on each
/// continuous axis between the neighbours of the best grid point. Ties go to
/// the lexicographically smallest point (axis 0 first). Grid points can be
/// evaluated on several threads; the result does not depend on the count.
template <class F>
GridOptimum grid_refine_max(F&& f, std::vector<GridAxis> axes, double refine_rel_tol = 1e-3,
                            unsigned threads = 1) {
  if (axes.empty()) throw InputError("grid search needs at least one axis");
  std::size_t total = 1;
  for (auto& axis : axes) {
    if (axis.points.empty()) throw InputError("grid search axis is empty");
    std::sort(axis.points.begin(), axis.points.end());
    axis.points.erase(std::unique(axis.points.begin(), axis.points.end()), axis.points.end());
    total *= axis.points.size();
  }

  auto point_at = [&](std::size_t index) {
    std::vector<double> p(axes.size());
    for (std::size_t d = axes.size(); d-- > 0;) {
      const std::size_t m = axes[d].points.size();
      p[d] = axes[d].points[index % m];
      index /= m;
    }
    return p;
  };

  std::vector<double> values(total);
  parallel_for(total, threads, [&](std::size_t i) {
    const auto p = point_at(i);
    values[i] = f(std::span<const double>(p));
  });

  GridOptimum out;
  out.evaluations = total;
  std::size_t best = 0;
  for (std::size_t i = 0; i < total; ++i) {
    out.trace.emplace_back(point_at(i), values[i]);
    if (values[i] > values[best]) best = i;
  }
  out.argmax = point_at(best);
  out.value = values[best];

  for (std::size_t d = 0; d < axes.size(); ++d) {
    const auto& pts = axes[d].points;
    if (axes[d].integer || pts.size() < 2) continue;
    const auto it = std::lower_bound(pts.begin(), pts.end(), out.argmax[d]);
    const std::size_t i = static_cast<std::size_t>(it - pts.begin());
    const double lo = pts[i == 0 ? 0 : i - 1];
    const double hi = pts[std::min(i + 1, pts.size() - 1)];
    std::vector<double> probe = out.argmax;
    auto along = [&](double x) {
      probe[d] = x;
      const double v = f(std::span<const double>(probe));
      out.trace.emplace_back(probe, v);
      ++out.evaluations;
      return v;
    };
    OptimizerSpec spec{lo, hi, refine_rel_tol * (hi - lo), 60, 17};
    const auto line = golden_section_max(along, spec);
    if (line.value > out.value) {
      out.value = line.value;
      out.argmax[d] = line.argmax;
    }
  }
  return out;
}

}  // namespace sirmeta
