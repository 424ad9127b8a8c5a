#include <CLI11.hpp>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>

#include "sirmeta/cli.hpp"
#include "sirmeta/error.hpp"
#include "sirmeta/format.hpp"
#include "sirmeta/kernels.hpp"

namespace sirmeta::cli {

namespace {

const std::vector<std::string> kCommands = {"coverage", "rate", "moments", "meta",    "scc",
                                            "src",      "optimize", "sweep", "simulate"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string env_name(const std::string& key) {
  std::string out = "SIRMETA_";
  for (char c : key) out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

double parse_number(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw InputError("cannot parse " + what + " value '" + text + "'");
  }
}

// Reads key=value lines into --key=value tokens.
std::vector<std::string> read_config_file(const std::string& path, const std::vector<std::string>& keys) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read config file '" + path + "'");
  std::vector<std::string> tokens;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InputError(path + ":" + std::to_string(number) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    for (char& c : key) {
      if (c == '_') c = '-';
    }
    const std::string value = trim(line.substr(eq + 1));
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      std::string valid;
      for (const auto& k : keys) valid += (valid.empty() ? "" : ", ") + k;
      throw InputError(path + ":" + std::to_string(number) + ": unknown key '" + key + "'; valid keys: " + valid);
    }
    tokens.push_back("--" + key + "=" + value);
  }
  return tokens;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw InputError("empty grid");
  std::vector<double> out;
  if (t.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
      const auto colon = t.find(':', start);
      parts.push_back(trim(t.substr(start, colon - start)));
      if (colon == std::string::npos) break;
      start = colon + 1;
    }
    if (parts.size() != 3) throw InputError("grid '" + t + "' must be start:stop:step");
    const double a = parse_number(parts[0], "grid start");
    const double b = parse_number(parts[1], "grid stop");
    const double step = parse_number(parts[2], "grid step");
    if (!(step > 0.0) || !(b >= a)) throw InputError("grid '" + t + "' needs step > 0 and stop >= start");
    const double count = std::floor((b - a) / step * (1.0 + 1e-12) + 1e-9) + 1.0;
    if (count > 1e6) throw InputError("grid '" + t + "' has more than 1e6 points");
    // Round to 12 significant digits so 0.1:0.9:0.1 yields 0.3, not 0.30000000000000004.
    for (int i = 0; i < static_cast<int>(count); ++i) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.12g", a + i * step);
      out.push_back(std::stod(buf));
    }
    return out;
  }
  std::size_t start = 0;
  for (;;) {
    const auto comma = t.find(',', start);
    out.push_back(parse_number(trim(t.substr(start, comma - start)), "grid"));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string RunConfig::canonical() const {
  std::string s = "command=" + command;
  s += ";metric=" + metric_text;
  s += ";method=" + std::string(to_string(method));
  s += ";mu=" + std::to_string(mu);
  s += ";rel_tol=" + format_double(quadrature.rel_tol);
  s += ";abs_tol=" + format_double(quadrature.abs_tol);
  s += ";max_subdivisions=" + std::to_string(quadrature.max_subdivisions);
  s += ";t_max=" + format_double(gil_pelaez.t_max);
  s += ";t_cap=" + format_double(gil_pelaez.t_cap);
  s += ";x=" + join(x_grid);
  if (command == "simulate") {
    s += ";n=" + std::to_string(n);
    s += ";seed=" + std::to_string(seed);
    s += ";window_factor=" + format_double(window_factor);
    s += ";report=" + report;
  }
  if (command == "sweep") {
    s += ";axis=" + std::string(to_string(axis));
    s += ";grid=" + join(grid_text);
    s += ";full_load=" + std::string(full_load ? "true" : "false");
  }
  if (command == "optimize") {
    s += ";target=" + target;
    s += ";h=" + format_double(height_bracket.lo) + ":" + format_double(height_bracket.hi);
    s += ";h_tol=" + format_double(height_bracket.x_tol);
    if (target == "capacity") {
      s += ";lambda_range=" + format_double(search.lambda_lo) + ":" + format_double(search.lambda_hi) + "/" +
           std::to_string(search.lambda_points);
      s += ";h_points=" + std::to_string(search.height_points);
      s += ";n_s_range=" + std::to_string(search.n_s_lo) + ":" + std::to_string(search.n_s_hi);
      s += ";full_load=" + std::string(search.full_load ? "true" : "false");
      s += ";refine=" + std::string(search.refine ? "true" : "false");
    }
  }
  return s;
}

RunConfig parse_config(const std::vector<std::string>& args) {
  CLI::App app{"Coverage, moments and SIR meta-distribution of LoS/NLoS cellular downlinks", "sirmeta"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  std::string command;
  std::string config_file;
  std::string deployment = "umi";
  double lambda = 1e-4;
  double height = 10.0;
  int n_a = 1;
  int n_s = 1;
  double bandwidth = 20e6;
  double carrier = 2.0;
  std::string field_radius = "auto";
  double los_alpha = 0, los_beta = 0, los_gamma = 0, nlos_alpha = 0, nlos_beta = 0, nlos_gamma = 0;
  double los_a = 0, los_b = 0;
  double theta_db = 0.0;
  double r_o = 0.0;
  std::string method = "mnatsakanov";
  int mu = kDefaultMu;
  QuadratureSpec quad;
  GilPelaezOptions gp;
  std::string x_text;
  std::size_t n = 100000;
  std::uint64_t seed = 1;
  double window_factor = 1.0;
  std::string report = "meta";
  std::string axis = "h";
  std::string grid_text;
  bool full_load = true;
  std::string target = "height";
  double h_lo = 1.0, h_hi = 100.0, h_tol = 1e-2;
  int h_points = 1;
  double lambda_lo = 1e-5, lambda_hi = 1e-3;
  int lambda_points = 5;
  int ns_lo = 1, ns_hi = 30;
  bool refine = true;
  std::string simd = "auto";
  unsigned threads = 1;
  std::string out_path;

  app.add_option("command", command, "Subcommand")->required()->check(CLI::IsMember(kCommands));
  app.add_option("--config", config_file, "key=value file applied before the flags");

  std::vector<std::string> keys;
  auto opt = [&](const std::string& key, auto& var, const std::string& help) {
    keys.push_back(key);
    return app.add_option("--" + key, var, help)->envname(env_name(key));
  };
  opt("deployment", deployment, "umi | uma")->check(CLI::IsMember({"umi", "uma"}));
  opt("lambda", lambda, "BS density per m^2");
  opt("height", height, "BS height above the user, m");
  opt("n-a", n_a, "Active users per cell");
  opt("n-s", n_s, "Channel partitions");
  opt("bandwidth", bandwidth, "Bandwidth W, Hz");
  opt("carrier-ghz", carrier, "Carrier frequency, GHz");
  opt("field-radius", field_radius, "Interfering field radius in m, 'auto' or 'inf'");
  auto* o_los_alpha = opt("los-alpha", los_alpha, "Override LoS alpha");
  auto* o_los_beta = opt("los-beta", los_beta, "Override LoS beta, dB");
  auto* o_los_gamma = opt("los-gamma", los_gamma, "Override LoS gamma");
  auto* o_nlos_alpha = opt("nlos-alpha", nlos_alpha, "Override NLoS alpha");
  auto* o_nlos_beta = opt("nlos-beta", nlos_beta, "Override NLoS beta, dB");
  auto* o_nlos_gamma = opt("nlos-gamma", nlos_gamma, "Override NLoS gamma");
  auto* o_los_a = opt("los-a", los_a, "Override LoS-probability constant a");
  auto* o_los_b = opt("los-b", los_b, "Override LoS-probability constant b");
  auto* o_theta = opt("theta-db", theta_db, "SIR threshold, dB");
  auto* o_rate = opt("r-o", r_o, "Rate threshold, bit/s");
  opt("method", method, "gil-pelaez | mnatsakanov")->check(CLI::IsMember({"gil-pelaez", "mnatsakanov"}));
  opt("mu", mu, "Number of moments for Mnatsakanov");
  opt("rel-tol", quad.rel_tol, "Quadrature relative tolerance");
  opt("abs-tol", quad.abs_tol, "Quadrature absolute tolerance");
  opt("max-subdivisions", quad.max_subdivisions, "Quadrature subinterval budget");
  opt("t-max", gp.t_max, "Initial Gil-Pelaez cutoff");
  opt("t-cap", gp.t_cap, "Largest Gil-Pelaez cutoff");
  opt("x", x_text, "Reliabilities: a:b:step or comma list");
  opt("n", n, "Monte Carlo realizations");
  opt("seed", seed, "Monte Carlo seed");
  opt("window-factor", window_factor, "Simulation window as a multiple of the field radius");
  opt("report", report, "simulate output: meta | coverage | moments")
      ->check(CLI::IsMember({"meta", "coverage", "moments"}));
  opt("axis", axis, "Sweep axis: lambda | h | n_s | theta | r_o | x")
      ->check(CLI::IsMember({"lambda", "h", "n_s", "theta", "r_o", "x"}));
  opt("grid", grid_text, "Sweep grid: a:b:step or comma list (theta in dB)");
  opt("full-load", full_load, "Keep N_a = N_s on the N_s axis");
  opt("target", target, "optimize: height | capacity")->check(CLI::IsMember({"height", "capacity"}));
  opt("h-lo", h_lo, "Height range start, m");
  opt("h-hi", h_hi, "Height range end, m");
  opt("h-points", h_points, "Height grid points for capacity search");
  opt("h-tol", h_tol, "Height tolerance, m");
  opt("lambda-lo", lambda_lo, "Density range start");
  opt("lambda-hi", lambda_hi, "Density range end");
  opt("lambda-points", lambda_points, "Log-spaced density grid points");
  opt("ns-lo", ns_lo, "N_s range start");
  opt("ns-hi", ns_hi, "N_s range end");
  opt("refine", refine, "Golden-section refinement in capacity search");
  opt("simd", simd, "auto | scalar | avx2")->check(CLI::IsMember({"auto", "scalar", "avx2"}));
  opt("threads", threads, "Worker threads");
  opt("out", out_path, "Output file (default stdout)");

  // Config file tokens go first so flags given later win.
  std::vector<std::string> tokens;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      tokens = read_config_file(args[i + 1], keys);
    } else if (args[i].rfind("--config=", 0) == 0) {
      tokens = read_config_file(args[i].substr(9), keys);
    }
  }
  std::vector<const char*> argv{"sirmeta"};
  for (const auto& t : tokens) argv.push_back(t.c_str());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::ParseError& e) {
    throw InputError(e.what());
  }

  RunConfig cfg;
  cfg.command = command;
  auto& net = cfg.network;
  net.env = env_preset(parse_deployment(deployment));
  if (o_los_alpha->count()) net.env.los.alpha = los_alpha;
  if (o_los_beta->count()) net.env.los.beta = los_beta;
  if (o_los_gamma->count()) net.env.los.gamma = los_gamma;
  if (o_nlos_alpha->count()) net.env.nlos.alpha = nlos_alpha;
  if (o_nlos_beta->count()) net.env.nlos.beta = nlos_beta;
  if (o_nlos_gamma->count()) net.env.nlos.gamma = nlos_gamma;
  if (o_los_a->count()) net.env.a = los_a;
  if (o_los_b->count()) net.env.b = los_b;
  net.lambda = lambda;
  net.height = height;
  net.n_a = n_a;
  net.n_s = n_s;
  net.bandwidth = bandwidth;
  net.carrier_ghz = carrier;
  if (field_radius == "inf") {
    net.field_radius = std::numeric_limits<double>::infinity();
  } else if (field_radius != "auto") {
    net.field_radius = parse_number(field_radius, "field-radius");
  }
  net.validate();

  const bool has_theta = o_theta->count() > 0;
  const bool has_rate = o_rate->count() > 0;
  if (has_theta && has_rate) throw InputError("give exactly one metric: --theta-db or --r-o");
  if ((command == "rate" || command == "src") && !has_rate) throw InputError(command + " needs --r-o");
  if (command == "scc" && has_rate) throw InputError("scc needs an SIR metric (--theta-db)");
  if (has_rate) {
    cfg.metric = RateThreshold{r_o};
    cfg.metric_text = "r_o=" + format_double(r_o);
  } else {
    cfg.metric = SirThreshold{db_to_linear(theta_db)};
    cfg.metric_text = "theta_db=" + format_double(theta_db);
  }
  validate(cfg.metric);
  effective_threshold(cfg.metric, net);

  cfg.method = parse_meta_method(method);
  if (mu < 1 || mu > kMaxMu) throw InputError("mu must lie in [1, 60]");
  cfg.mu = mu;
  quad.validate();
  cfg.quadrature = quad;
  gp.validate();
  cfg.gil_pelaez = gp;

  if (!x_text.empty()) {
    cfg.x_grid = parse_grid(x_text);
  } else if (command == "meta" || command == "simulate") {
    cfg.x_grid = parse_grid("0.1:0.9:0.1");
  } else {
    cfg.x_grid = {0.4};
  }
  for (double x : cfg.x_grid) {
    if (!(x > 0.0 && x < 1.0)) throw InputError("reliability x must lie in (0, 1)");
  }
  for (std::size_t i = 1; i < cfg.x_grid.size(); ++i) {
    if (!(cfg.x_grid[i] > cfg.x_grid[i - 1])) throw InputError("x grid must be strictly increasing");
  }
  if ((command == "sweep" || command == "optimize") && cfg.x_grid.size() != 1) {
    throw InputError(command + " takes a single --x");
  }

  if (command == "simulate" && n < 1000) throw InputError("simulate needs --n >= 1000");
  cfg.n = n;
  cfg.seed = seed;
  if (!(window_factor > 0.0)) throw InputError("window factor must be > 0");
  cfg.window_factor = window_factor;
  cfg.report = report;

  cfg.axis = parse_sweep_axis(axis);
  cfg.full_load = full_load;
  if (command == "sweep") {
    if (grid_text.empty()) throw InputError("sweep needs --grid");
    cfg.grid_text = parse_grid(grid_text);
    cfg.grid = cfg.grid_text;
    if (cfg.axis == SweepAxis::theta) {
      for (double& v : cfg.grid) v = db_to_linear(v);
    }
  }

  cfg.target = target;
  cfg.height_bracket = OptimizerSpec{h_lo, h_hi, h_tol, 200, 17};
  if (command == "optimize" && target == "height") {
    cfg.height_bracket.validate();
    if (h_lo < 1.0 || h_hi > 200.0) throw InputError("height bracket must lie within [1, 200] m");
  }
  cfg.search.lambda_lo = lambda_lo;
  cfg.search.lambda_hi = lambda_hi;
  cfg.search.lambda_points = lambda_points;
  if (h_points > 1) {
    cfg.search.height_lo = h_lo;
    cfg.search.height_hi = h_hi;
  } else {
    cfg.search.height_lo = cfg.search.height_hi = height;
  }
  cfg.search.height_points = h_points;
  cfg.search.n_s_lo = ns_lo;
  cfg.search.n_s_hi = ns_hi;
  cfg.search.full_load = full_load;
  cfg.search.refine = refine;
  cfg.search.threads = threads;
  if (command == "optimize" && target == "capacity") cfg.search.validate();

  if (simd != "auto") cfg.simd = simd;
  if (threads < 1) throw InputError("threads must be >= 1");
  cfg.threads = threads;
  cfg.out_path = out_path;
  cfg.warnings = net.warnings();
  return cfg;
}

}  // namespace sirmeta::cli
