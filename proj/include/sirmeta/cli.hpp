#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sirmeta/capacity.hpp"
#include "sirmeta/metadist.hpp"
#include "sirmeta/network.hpp"
#include "sirmeta/numerics.hpp"

namespace sirmeta::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitNumerical = 2;

/// Everything one invocation needs, validated and with thresholds in linear units.
struct RunConfig {
  std::string command;
  NetworkConfig network;
  Metric metric = SirThreshold{1.0};
  std::string metric_text;  // as given, e.g. "theta_db=0" or "r_o=8e6"
  MetaMethod method = MetaMethod::mnatsakanov;
  int mu = kDefaultMu;
  QuadratureSpec quadrature;
  GilPelaezOptions gil_pelaez;
  std::vector<double> x_grid;

  // simulate
  std::size_t n = 100000;
  std::uint64_t seed = 1;
  double window_factor = 1.0;
  std::string report = "meta";

  // sweep
  SweepAxis axis = SweepAxis::h;
  std::vector<double> grid;       // library units
  std::vector<double> grid_text;  // as given (theta in dB)
  bool full_load = true;

  // optimize
  std::string target = "height";
  OptimizerSpec height_bracket{1.0, 100.0, 1e-2, 200, 17};
  CapacitySearch search;

  std::optional<std::string> simd;
  unsigned threads = 1;
  std::string out_path;
  std::vector<std::string> warnings;

  /// Run settings that affect output, as ";"-separated key=value pairs.
  std::string canonical() const;
};

/// Thrown by parse_config for --help; carries the usage text.
struct HelpRequested {
  std::string text;
};

/// Parses flags (without the program name). A `--config FILE` of key=value
/// lines is applied first, then the environment (SIRMETA_<KEY>) for keys not
/// given, and command-line flags override both. Throws InputError.
RunConfig parse_config(const std::vector<std::string>& args);

/// "a:b:step" (inclusive) or "v1,v2,...".
std::vector<double> parse_grid(const std::string& text);

/// Runs the command and writes CSV to out. Returns the exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full front end: parse, run, map errors to exit codes.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// RFC 4180 table with trailing `#` metadata lines.
class CsvReport {
 public:
  explicit CsvReport(std::vector<std::string> columns);

  void add_row(std::vector<std::string> row);
  void add_metadata(std::string key, std::string value);
  std::size_t rows() const noexcept { return rows_.size(); }
  void write(std::ostream& out) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::pair<std::string, std::string>> metadata_;
};

std::string csv_escape(const std::string& field);

}  // namespace sirmeta::cli
