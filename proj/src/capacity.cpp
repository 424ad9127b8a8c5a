#include "sirmeta/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sirmeta/coverage.hpp"
#include "sirmeta/error.hpp"
#include "sirmeta/format.hpp"
#include "sirmeta/metadist.hpp"
#include "sirmeta/moments.hpp"
#include "sirmeta/parallel.hpp"

namespace sirmeta {

namespace {

void check_reliability(double x) {
  if (!(x > 0.0 && x < 1.0)) throw InputError("reliability x must lie in (0, 1)");
}

void check_mu(int mu) {
  if (mu < 1 || mu > kMaxMu) throw InputError("mu must lie in [1, 60]");
}

// Log-spaced values with exact end points.
std::vector<double> log_grid(double lo, double hi, int points) {
  if (points == 1 || lo == hi) return {lo};
  std::vector<double> g;
  for (int i = 0; i < points; ++i) {
    g.push_back(std::pow(10.0, std::log10(lo) + (std::log10(hi) - std::log10(lo)) * i / (points - 1)));
  }
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<double> lin_grid(double lo, double hi, int points) {
  std::vector<double> g;
  if (points == 1 || lo == hi) return {lo};
  for (int i = 0; i < points; ++i) g.push_back(lo + (hi - lo) * i / (points - 1));
  return g;
}

}  // namespace

CapacityPoint capacity(const NetworkConfig& cfg, double x, const Metric& metric, int mu, const QuadratureSpec& spec) {
  check_reliability(x);
  check_mu(mu);
  cfg.validate();
  validate(metric);
  const auto seq = moment_sequence(cfg, metric, mu, spec);
  CapacityPoint p;
  p.cfg_digest = cfg.digest();
  p.x = x;
  p.metric = metric;
  p.ccdf = std::clamp(1.0 - mnatsakanov_cdf(seq, x).cdf, 0.0, 1.0);
  p.value = cfg.n_a * cfg.lambda * p.ccdf;
  return p;
}

CapacityPoint scc(const NetworkConfig& cfg, double x, double theta, int mu, const QuadratureSpec& spec) {
  return capacity(cfg, x, SirThreshold{theta}, mu, spec);
}

CapacityPoint src(const NetworkConfig& cfg, double x, double r_o, int mu, const QuadratureSpec& spec) {
  return capacity(cfg, x, RateThreshold{r_o}, mu, spec);
}

OptimumReport optimize_height(const NetworkConfig& cfg, const Metric& metric, const OptimizerSpec& bracket,
                              const QuadratureSpec& spec) {
  bracket.validate();
  if (bracket.lo < 1.0 || bracket.hi > 200.0) throw InputError("height bracket must lie within [1, 200] m");
  cfg.validate();
  validate(metric);
  NetworkConfig probe = cfg;
  auto objective = [&](double h) {
    probe.height = h;
    return coverage(probe, metric, spec);
  };
  const auto opt = golden_section_max(objective, bracket);

  OptimumReport report;
  report.lambda = cfg.lambda;
  report.height = opt.argmax;
  report.n_s = cfg.n_s;
  report.objective = opt.value;
  for (const auto& [h, v] : opt.trace) report.trace.push_back({cfg.lambda, h, double(cfg.n_s), v});
  report.warnings = cfg.warnings();
  if (opt.at_boundary) report.warnings.push_back("optimum at the bracket boundary");
  if (!opt.converged) report.warnings.push_back("evaluation budget exhausted before x_tol was reached");
  if (opt.grid_local_maxima > 1) {
    report.warnings.push_back("objective has " + std::to_string(opt.grid_local_maxima) +
                              " local maxima on the scan grid");
  }
  return report;
}

void CapacitySearch::validate() const {
  if (!(lambda_lo > 0.0 && lambda_lo <= lambda_hi) || !std::isfinite(lambda_hi)) {
    throw InputError("lambda range must satisfy 0 < lo <= hi");
  }
  if (!(height_lo >= 0.0 && height_lo <= height_hi) || !std::isfinite(height_hi)) {
    throw InputError("height range must satisfy 0 <= lo <= hi");
  }
  if (lambda_points < 1 || height_points < 1) throw InputError("grid point counts must be >= 1");
  if (n_s_lo < 1 || n_s_lo > n_s_hi) throw InputError("N_s range must satisfy 1 <= lo <= hi");
}

OptimumReport optimize_capacity(const NetworkConfig& cfg, const Metric& metric, double x,
                                const CapacitySearch& search, int mu, const QuadratureSpec& spec) {
  search.validate();
  check_reliability(x);
  check_mu(mu);
  cfg.validate();
  validate(metric);
  if (!search.full_load && search.n_s_lo < cfg.n_a) {
    throw InputError("invariant violated: 1 <= N_a <= N_s (N_s range starts below N_a)");
  }

  std::vector<GridAxis> axes(3);
  axes[0] = {log_grid(search.lambda_lo, search.lambda_hi, search.lambda_points), !search.refine};
  axes[1] = {lin_grid(search.height_lo, search.height_hi, search.height_points), !search.refine};
  for (int n = search.n_s_lo; n <= search.n_s_hi; ++n) axes[2].points.push_back(n);
  axes[2].integer = true;

  auto point_cfg = [&](std::span<const double> p) {
    NetworkConfig c = cfg;
    c.lambda = p[0];
    c.height = p[1];
    c.n_s = static_cast<int>(p[2]);
    if (search.full_load) c.n_a = c.n_s;
    return c;
  };
  auto objective = [&](std::span<const double> p) { return capacity(point_cfg(p), x, metric, mu, spec).value; };
  const auto best = grid_refine_max(objective, axes, 1e-3, search.threads);

  OptimumReport report;
  const auto c = point_cfg(best.argmax);
  report.lambda = c.lambda;
  report.height = c.height;
  report.n_s = c.n_s;
  report.objective = best.value;
  for (const auto& [p, v] : best.trace) report.trace.push_back({p[0], p[1], p[2], v});
  report.warnings = c.warnings();
  const char* names[] = {"lambda", "height", "N_s"};
  for (std::size_t d = 0; d < axes.size(); ++d) {
    const auto& pts = axes[d].points;
    if (pts.size() > 1 && (best.argmax[d] <= pts.front() || best.argmax[d] >= pts.back())) {
      report.warnings.push_back(std::string("optimum at the ") + names[d] + " range boundary");
    }
  }
  return report;
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::lambda: return "lambda";
    case SweepAxis::h: return "h";
    case SweepAxis::n_s: return "n_s";
    case SweepAxis::theta: return "theta";
    case SweepAxis::r_o: return "r_o";
    case SweepAxis::x: return "x";
  }
  return "?";
}

SweepAxis parse_sweep_axis(std::string_view name) {
  for (auto a : {SweepAxis::lambda, SweepAxis::h, SweepAxis::n_s, SweepAxis::theta, SweepAxis::r_o, SweepAxis::x}) {
    if (to_string(a) == name) return a;
  }
  throw InputError("unknown sweep axis '" + std::string(name) + "' (valid: lambda, h, n_s, theta, r_o, x)");
}

std::vector<SweepRow> sweep(const NetworkConfig& cfg, const Metric& metric, SweepAxis axis,
                            std::span<const double> grid, double x, int mu, bool full_load,
                            const QuadratureSpec& spec, unsigned threads) {
  if (grid.empty()) throw InputError("sweep grid is empty");
  check_mu(mu);
  cfg.validate();
  validate(metric);
  if (axis != SweepAxis::x) check_reliability(x);
  const int order = std::max(mu, 2);

  struct Point {
    NetworkConfig cfg;
    Metric metric;
    double x;
  };
  std::vector<Point> points;
  for (double v : grid) {
    Point p{cfg, metric, x};
    switch (axis) {
      case SweepAxis::lambda: p.cfg.lambda = v; break;
      case SweepAxis::h: p.cfg.height = v; break;
      case SweepAxis::n_s:
        if (v != std::floor(v) || v < 1.0) throw InputError("n_s grid values must be integers >= 1");
        p.cfg.n_s = static_cast<int>(v);
        if (full_load) p.cfg.n_a = p.cfg.n_s;
        break;
      case SweepAxis::theta: p.metric = SirThreshold{v}; break;
      case SweepAxis::r_o: p.metric = RateThreshold{v}; break;
      case SweepAxis::x: check_reliability(v); p.x = v; break;
    }
    p.cfg.validate();
    validate(p.metric);
    points.push_back(std::move(p));
  }

  std::vector<SweepRow> rows(points.size());
  auto fill = [&](std::size_t i, const MomentSequence& seq) {
    const auto& p = points[i];
    SweepRow& row = rows[i];
    row.value = grid[i];
    row.coverage = seq.values[1];
    row.variance = variance_from_moments(seq.values[1], seq.values[2]);
    std::vector<double> head(seq.values.begin(), seq.values.begin() + mu + 1);
    row.ccdf = std::clamp(1.0 - mnatsakanov_cdf(std::span<const double>(head), p.x).cdf, 0.0, 1.0);
    row.capacity = p.cfg.n_a * p.cfg.lambda * row.ccdf;
  };
  if (axis == SweepAxis::x) {
    const auto seq = moment_sequence(cfg, metric, order, spec);
    for (std::size_t i = 0; i < points.size(); ++i) fill(i, seq);
  } else {
    parallel_for(points.size(), threads,
                 [&](std::size_t i) { fill(i, moment_sequence(points[i].cfg, points[i].metric, order, spec)); });
  }
  return rows;
}

}  // namespace sirmeta
