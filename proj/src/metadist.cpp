#include "sirmeta/metadist.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>

#include "sirmeta/error.hpp"
#include "sirmeta/format.hpp"

namespace sirmeta {

namespace {

void check_reliability(double x) {
  if (!(x > 0.0 && x < 1.0)) throw InputError("reliability x must lie in (0, 1)");
}

// binomials[n][k] for n <= kMaxMu, exact.
const std::array<std::array<std::uint64_t, kMaxMu + 1>, kMaxMu + 1>& binomials() {
  static const auto table = [] {
    std::array<std::array<std::uint64_t, kMaxMu + 1>, kMaxMu + 1> c{};
    for (int n = 0; n <= kMaxMu; ++n) {
      c[n][0] = 1;
      for (int k = 1; k <= n; ++k) c[n][k] = c[n - 1][k - 1] + (k <= n - 1 ? c[n - 1][k] : 0);
    }
    return c;
  }();
  return table;
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 2) return v.empty() ? 0.0 : (v.size() == 1 ? v[0] : v[0] + v[1]);
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

double direct_double_sum(std::span<const double> m, int mu, int upper) {
  const auto& c = binomials();
  std::vector<double> terms;
  for (int k = 0; k <= upper; ++k) {
    for (int j = k; j <= mu; ++j) {
      const double w = static_cast<double>(c[mu][j] * c[j][k]);
      terms.push_back(((j - k) % 2 == 0 ? w : -w) * m[j]);
    }
  }
  return pairwise_sum(terms);
}

}  // namespace

std::string_view to_string(MetaMethod method) {
  return method == MetaMethod::gil_pelaez ? "gil-pelaez" : "mnatsakanov";
}

MetaMethod parse_meta_method(std::string_view name) {
  if (name == "gil-pelaez") return MetaMethod::gil_pelaez;
  if (name == "mnatsakanov") return MetaMethod::mnatsakanov;
  throw InputError("unknown method '" + std::string(name) + "' (valid: gil-pelaez, mnatsakanov)");
}

namespace {

// Imaginary moments memoized by order. Misses of one request are computed
// together in a single batch.
class MomentCache {
 public:
  MomentCache(const NetworkConfig& cfg, const Metric& metric, const QuadratureSpec& spec)
      : cfg_(cfg), metric_(metric), spec_(spec) {}

  void operator()(std::span<const double> t, std::span<std::complex<double>> out) {
    std::vector<double> missing;
    for (double v : t) {
      if (!values_.contains(v) && std::find(missing.begin(), missing.end(), v) == missing.end()) {
        missing.push_back(v);
      }
    }
    if (!missing.empty()) {
      std::vector<std::complex<double>> fresh(missing.size());
      complex_moments(cfg_, metric_, missing, fresh, spec_);
      for (std::size_t i = 0; i < missing.size(); ++i) values_.emplace(missing[i], fresh[i]);
    }
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = values_.at(t[i]);
  }

 private:
  const NetworkConfig& cfg_;
  const Metric& metric_;
  const QuadratureSpec& spec_;
  std::map<double, std::complex<double>> values_;
};

GilPelaezPoint invert(MomentCache& moments, double x, const QuadratureSpec& spec, const GilPelaezOptions& options,
                      double panel_omega) {
  GilPelaezPoint point;
  point.inversion = gil_pelaez_integral(moments, std::log(x), spec, options, panel_omega);
  const auto& inv = point.inversion;
  if (inv.truncation_modulus > options.modulus_threshold && inv.tail_bound > options.tail_tolerance) {
    throw NumericalError("Gil-Pelaez integral still truncated at t_max=" + format_double(inv.t_max) +
                             " (|M|=" + format_double(inv.truncation_modulus) + ")",
                         0.5 + inv.integral / std::numbers::pi, inv.tail_bound);
  }
  point.ccdf = std::clamp(0.5 + inv.integral / std::numbers::pi, 0.0, 1.0);
  return point;
}

}  // namespace

GilPelaezPoint meta_ccdf_gil_pelaez_detail(const NetworkConfig& cfg, const Metric& metric, double x,
                                           const QuadratureSpec& spec, const GilPelaezOptions& options) {
  check_reliability(x);
  cfg.validate();
  validate(metric);
  MomentCache moments(cfg, metric, spec);
  return invert(moments, x, spec, options, 0.0);
}

double meta_ccdf_gil_pelaez(const NetworkConfig& cfg, const Metric& metric, double x, const QuadratureSpec& spec,
                            const GilPelaezOptions& options) {
  return meta_ccdf_gil_pelaez_detail(cfg, metric, x, spec, options).ccdf;
}

MnatsakanovValue mnatsakanov_cdf(std::span<const double> moments, double x) {
  if (moments.size() < 2) throw InputError("Mnatsakanov reconstruction needs mu >= 1");
  const int mu = static_cast<int>(moments.size()) - 1;
  if (mu > kMaxMu) throw InputError("Mnatsakanov reconstruction supports mu <= 60");
  if (!(x >= 0.0 && x <= 1.0)) throw InputError("reliability x must lie in [0, 1]");
  const int upper = std::min(mu, static_cast<int>(std::floor(mu * x)));
  const auto& c = binomials();

  // diff[j] holds ((-Delta)^n M)_j after n passes.
  std::vector<long double> diff(moments.begin(), moments.end());
  std::vector<long double> top(mu + 1);  // top[n] = ((-Delta)^n M)_{mu - n}
  top[0] = diff[mu];
  for (int n = 1; n <= mu; ++n) {
    for (int j = 0; j + n <= mu; ++j) diff[j] = diff[j] - diff[j + 1];
    top[n] = diff[mu - n];
  }
  long double s = 0.0L;
  long double bound = 0.0L;
  for (int k = 0; k <= upper; ++k) {
    const auto w = static_cast<long double>(c[mu][k]);
    s += w * top[mu - k];
    bound += w * std::ldexp(1.0L, mu - k);
  }

  MnatsakanovValue out;
  out.cdf = static_cast<double>(s);
  if (mu <= 30) {
    out.roundoff = std::abs(out.cdf - direct_double_sum(moments, mu, upper));
  } else {
    double peak = 0.0;
    for (double m : moments) peak = std::max(peak, std::abs(m));
    out.roundoff = static_cast<double>(bound * peak * std::numeric_limits<long double>::epsilon());
  }
  return out;
}

MnatsakanovValue mnatsakanov_cdf(const MomentSequence& moments, double x) {
  return mnatsakanov_cdf(std::span<const double>(moments.values), x);
}

double meta_ccdf_mnatsakanov(const NetworkConfig& cfg, const Metric& metric, double x, int mu,
                             const QuadratureSpec& spec) {
  check_reliability(x);
  if (mu < 1 || mu > kMaxMu) throw InputError("mu must lie in [1, 60]");
  const auto seq = moment_sequence(cfg, metric, mu, spec);
  return std::clamp(1.0 - mnatsakanov_cdf(seq, x).cdf, 0.0, 1.0);
}

MetaCurve meta_curve(const NetworkConfig& cfg, const Metric& metric, std::span<const double> x_grid,
                     MetaMethod method, int mu, const QuadratureSpec& spec, const GilPelaezOptions& options) {
  if (x_grid.empty()) throw InputError("x grid is empty");
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    check_reliability(x_grid[i]);
    if (i > 0 && !(x_grid[i] > x_grid[i - 1])) throw InputError("x grid must be strictly increasing");
  }
  MetaCurve curve;
  curve.x_grid.assign(x_grid.begin(), x_grid.end());
  curve.method = method;
  if (method == MetaMethod::mnatsakanov) {
    if (mu < 1 || mu > kMaxMu) throw InputError("mu must lie in [1, 60]");
    curve.mu = mu;
    const auto seq = moment_sequence(cfg, metric, mu, spec);
    for (double x : x_grid) {
      const auto v = mnatsakanov_cdf(seq, x);
      curve.ccdf.push_back(std::clamp(1.0 - v.cdf, 0.0, 1.0));
      curve.diagnostics.push_back("roundoff=" + format_double(v.roundoff));
    }
  } else {
    // One panel grid for all x, sized by the fastest oscillation, so moments
    // are reused across the grid.
    cfg.validate();
    validate(metric);
    MomentCache moments(cfg, metric, spec);
    double omega = 0.0;
    for (double x : x_grid) omega = std::max(omega, std::abs(std::log(x)));
    for (double x : x_grid) {
      const auto p = invert(moments, x, spec, options, omega);
      curve.ccdf.push_back(p.ccdf);
      curve.diagnostics.push_back("t_max=" + format_double(p.inversion.t_max) +
                                  ";modulus=" + format_double(p.inversion.truncation_modulus) +
                                  ";tail=" + format_double(p.inversion.tail_bound));
    }
  }
  return curve;
}

}  // namespace sirmeta
