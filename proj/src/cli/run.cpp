#include <fstream>
#include <iostream>
#include <sstream>

#include "sirmeta/capacity.hpp"
#include "sirmeta/cli.hpp"
#include "sirmeta/coverage.hpp"
#include "sirmeta/error.hpp"
#include "sirmeta/format.hpp"
#include "sirmeta/kernels.hpp"
#include "sirmeta/metadist.hpp"
#include "sirmeta/moments.hpp"
#include "sirmeta/simulator.hpp"

#ifndef SIRMETA_VERSION
#define SIRMETA_VERSION "unknown"
#endif

namespace sirmeta::cli {

namespace {

using F = std::string (*)(double);
constexpr F num = format_double;

std::string metric_kind(const Metric& m) { return std::holds_alternative<SirThreshold>(m) ? "sir" : "rate"; }

std::string axis_column(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::lambda: return "lambda_per_m2";
    case SweepAxis::h: return "height_m";
    case SweepAxis::n_s: return "n_s";
    case SweepAxis::theta: return "theta_db";
    case SweepAxis::r_o: return "r_o_bps";
    case SweepAxis::x: return "x";
  }
  return "value";
}

CsvReport run_coverage(const RunConfig& c) {
  CsvReport r({"metric", "threshold_linear", "coverage"});
  const double theta = effective_threshold(c.metric, c.network);
  r.add_row({metric_kind(c.metric), num(theta), num(coverage(c.network, c.metric, c.quadrature))});
  return r;
}

CsvReport run_moments(const RunConfig& c) {
  CsvReport r({"order", "moment"});
  const auto seq = moment_sequence(c.network, c.metric, std::max(c.mu, 2), c.quadrature);
  for (int m = 0; m <= c.mu; ++m) r.add_row({std::to_string(m), num(seq.values[m])});
  r.add_metadata("variance", num(variance_from_moments(seq.values[1], seq.values[2])));
  r.add_metadata("hausdorff_min", num(hausdorff_min_difference(seq.values)));
  r.add_metadata("quadrature_error", num(seq.error));
  return r;
}

CsvReport run_meta(const RunConfig& c) {
  CsvReport r({"x", "ccdf", "method", "mu", "diagnostics"});
  const auto curve = meta_curve(c.network, c.metric, c.x_grid, c.method, c.mu, c.quadrature, c.gil_pelaez);
  const std::string mu = c.method == MetaMethod::mnatsakanov ? std::to_string(c.mu) : "";
  for (std::size_t i = 0; i < curve.x_grid.size(); ++i) {
    r.add_row({num(curve.x_grid[i]), num(curve.ccdf[i]), std::string(to_string(c.method)), mu,
               curve.diagnostics[i]});
  }
  return r;
}

CsvReport run_capacity(const RunConfig& c) {
  CsvReport r({"x", "ccdf", "capacity_per_m2"});
  const auto seq = moment_sequence(c.network, c.metric, c.mu, c.quadrature);
  for (double x : c.x_grid) {
    const double ccdf = std::clamp(1.0 - mnatsakanov_cdf(seq, x).cdf, 0.0, 1.0);
    r.add_row({num(x), num(ccdf), num(c.network.n_a * c.network.lambda * ccdf)});
  }
  return r;
}

CsvReport run_sweep(const RunConfig& c) {
  CsvReport r({axis_column(c.axis), "coverage", "variance", "ccdf", "capacity_per_m2"});
  const auto rows = sweep(c.network, c.metric, c.axis, c.grid, c.x_grid.front(), c.mu, c.full_load, c.quadrature,
                          c.threads);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    r.add_row({num(c.grid_text[i]), num(rows[i].coverage), num(rows[i].variance), num(rows[i].ccdf),
               num(rows[i].capacity)});
  }
  return r;
}

CsvReport run_optimize(const RunConfig& c) {
  CsvReport r({"kind", "lambda_per_m2", "height_m", "n_s", "objective"});
  const auto report = c.target == "height"
                          ? optimize_height(c.network, c.metric, c.height_bracket, c.quadrature)
                          : optimize_capacity(c.network, c.metric, c.x_grid.front(), c.search, c.mu, c.quadrature);
  for (const auto& t : report.trace) {
    r.add_row({"trace", num(t[0]), num(t[1]), std::to_string(static_cast<int>(t[2])), num(t[3])});
  }
  r.add_row({"optimum", num(report.lambda), num(report.height), std::to_string(report.n_s), num(report.objective)});
  for (const auto& w : report.warnings) r.add_metadata("warning", w);
  return r;
}

CsvReport run_simulate(const RunConfig& c) {
  SimulationOptions opts;
  opts.n = c.n;
  opts.seed = c.seed;
  opts.x_grid = c.x_grid;
  opts.moments = std::max(c.mu, 1);
  opts.window_factor = c.window_factor;
  opts.threads = c.threads;
  if (c.report != "moments") opts.moments = 1;
  const auto s = empirical_meta(c.network, c.metric, opts);
  if (c.report == "coverage") {
    CsvReport r({"metric", "threshold_linear", "coverage", "stderr"});
    r.add_row({metric_kind(c.metric), num(effective_threshold(c.metric, c.network)), num(s.coverage),
               num(s.coverage_se)});
    r.add_metadata("window_m", num(s.window));
    return r;
  }
  if (c.report == "moments") {
    CsvReport r({"order", "moment", "stderr"});
    r.add_row({"0", "1", "0"});
    for (std::size_t m = 0; m < s.moments.size(); ++m) {
      r.add_row({std::to_string(m + 1), num(s.moments[m]), num(s.moments_se[m])});
    }
    r.add_metadata("window_m", num(s.window));
    return r;
  }
  CsvReport r({"x", "ccdf", "method", "mu", "diagnostics", "stderr"});
  const std::string diag = "n=" + std::to_string(s.n) + ";window=" + num(s.window) + ";ks95=" + num(s.ks95);
  for (std::size_t i = 0; i < s.x_grid.size(); ++i) {
    r.add_row({num(s.x_grid[i]), num(s.ccdf[i]), "monte-carlo", "", diag, num(s.ccdf_se[i])});
  }
  return r;
}

CsvReport dispatch(const RunConfig& c) {
  if (c.command == "coverage" || c.command == "rate") return run_coverage(c);
  if (c.command == "moments") return run_moments(c);
  if (c.command == "meta") return run_meta(c);
  if (c.command == "scc" || c.command == "src") return run_capacity(c);
  if (c.command == "sweep") return run_sweep(c);
  if (c.command == "optimize") return run_optimize(c);
  if (c.command == "simulate") return run_simulate(c);
  throw InputError("unknown command '" + c.command + "'");
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  for (const auto& w : config.warnings) err << "warning: " << w << '\n';
  if (config.simd) kernels::set_active_level(*config.simd == "avx2" ? kernels::SimdLevel::avx2
                                                                     : kernels::SimdLevel::scalar);
  auto report = dispatch(config);
  const std::string network = config.network.canonical();
  const std::string settings = config.canonical();
  report.add_metadata("tool", std::string("sirmeta ") + SIRMETA_VERSION);
  report.add_metadata("command", config.command);
  report.add_metadata("config", network);
  report.add_metadata("run", settings);
  report.add_metadata("digest", fnv1a_hex(network + "|" + settings));
  report.add_metadata("seed", config.command == "simulate" ? std::to_string(config.seed) : "none");
  report.add_metadata("simd", std::string(kernels::to_string(kernels::active_level())));
  for (const auto& w : config.warnings) report.add_metadata("warning", w);

  if (config.out_path.empty()) {
    report.write(out);
    out.flush();
  } else {
    std::ofstream file(config.out_path, std::ios::binary);
    if (!file) throw InputError("cannot write '" + config.out_path + "'");
    report.write(file);
    if (!file.flush()) throw InputError("cannot write '" + config.out_path + "'");
  }
  return kExitOk;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run(parse_config(args), out, err);
  } catch (const HelpRequested& h) {
    out << h.text;
    return kExitOk;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << " (estimate " << format_double(e.estimate()) << ", error bound "
        << format_double(e.error_bound()) << ")\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace sirmeta::cli
