// Copyright 2026 The qsw Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: flat key = value configuration files, the four
// commands and their CSV writers.

#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsw/evolution.hpp"
#include "qsw/lattice.hpp"

namespace qsw::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kTruncation = 3,
  kNumerical = 4,
};

/// Bad configuration. key() names the offending key when there is one.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// Raw key -> value text, as read from a config file and --set overrides.
/// Values are bare words, numbers, "quoted strings" or [comma, lists].
class KeyValues {
 public:
  /// Parses the file format. `source` is only used in messages.
  static KeyValues parse(const std::string& text, const std::string& source = "config");
  static KeyValues load(const std::string& path);

  /// `key=value` as given on the command line.
  void set(const std::string& assignment);
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// Every key the front end understands.
const std::vector<std::string>& known_keys();

enum class Spacing { linear, log };
enum class GraphChoice { segment, line };
enum class AnalyticMode { segment, segment_asymptotic, line_quadrature, line_series };
enum class AlphaSource { evolve, closed_form, csv };

struct RunConfig {
  int n = 0;                 // segment length
  int l = 1;                 // initial vertex on the segment, 1..n
  int half_width = 0;        // truncated line; 0 picks one from t_max
  GraphChoice graph = GraphChoice::segment;
  DissipatorKind dissipator = DissipatorKind::global_sum;
  std::vector<double> omega;

  std::vector<double> times;  // explicit grid, or built from the fields below
  double t_min = 0.0;
  double t_max = 1.0;
  int steps = 10;
  Spacing spacing = Spacing::linear;

  Method method = Method::automatic;
  double guard_tol = 1e-8;

  AnalyticMode mode = AnalyticMode::segment;
  int k_max = 10;
  int nodes = 0;
  double tol = 1e-15;
  double series_max_t = 5.0;

  std::optional<double> window_lo;
  std::optional<double> window_hi;
  double regime_tol = 0.05;
  AlphaSource source = AlphaSource::evolve;
  std::string input;

  double t = 1.0;  // purity-sweep end time
  std::string svg;
  std::string out;
  int threads = 0;  // 0: hardware concurrency
};

/// Builds and validates the configuration for `command`. Throws
/// ConfigError naming the key on unknown keys, malformed values or
/// out-of-range numbers.
RunConfig make_config(const std::string& command, const KeyValues& kv);

/// Time grid described by the config.
std::vector<double> time_grid(const RunConfig& cfg);

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Exceptions
/// are rethrown on the caller, lowest index first.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

/// Formats a double the way every CSV column does (17 significant digits).
std::string format_number(double x);

/// Each command writes its CSV to `csv` and human-readable notes to `log`.
/// They throw the library's error types; run() maps them to exit codes.
void cmd_evolve(const RunConfig& cfg, std::ostream& csv, std::ostream& log);
void cmd_analytic(const RunConfig& cfg, std::ostream& csv, std::ostream& log);
/// Returns the one-line summary.
std::string cmd_alpha(const RunConfig& cfg, std::ostream& csv, std::ostream& log);
void cmd_purity_sweep(const RunConfig& cfg, std::ostream& csv, std::ostream& log);

/// Full command line: parses flags, loads the config, runs the command.
/// Returns the process exit code. `out` receives CSV when no output path
/// is given; `err` receives diagnostics.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qsw::cli
