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

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <set>
#include <sstream>

#include "qsw/cli.hpp"

namespace qsw::cli {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

bool valid_key(const std::string& key) {
  if (key.empty() || !(std::islower(static_cast<unsigned char>(key[0])) || key[0] == '_')) {
    return false;
  }
  return std::all_of(key.begin(), key.end(), [](char c) {
    return std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) ||
           c == '_';
  });
}

// Drops a trailing '#' comment that is not inside a quoted string.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

std::string unquote(const std::string& key, const std::string& v) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
  if (v.find('"') != std::string::npos) throw ConfigError(key, "unbalanced quotes in '" + v + "'");
  return v;
}

double to_double(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  double x = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, x);
  if (s.empty() || ec != std::errc() || ptr != last || !std::isfinite(x)) {
    throw ConfigError(key, fmt::format("expected a finite number, got '{}'", s));
  }
  return x;
}

int to_int(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  int x = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError(key, fmt::format("expected an integer, got '{}'", s));
  }
  return x;
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
  std::string s = trim(text);
  if (!s.empty() && s.front() == '[') {
    if (s.back() != ']') throw ConfigError(key, "list is missing its closing ']'");
    s = s.substr(1, s.size() - 2);
  }
  std::vector<double> out;
  if (trim(s).empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, item));
  return out;
}

template <class Enum>
Enum to_enum(const std::string& key, const std::string& text,
             std::initializer_list<std::pair<const char*, Enum>> choices) {
  std::string names;
  for (const auto& [name, value] : choices) {
    if (text == name) return value;
    names += names.empty() ? name : std::string("|") + name;
  }
  throw ConfigError(key, fmt::format("expected one of {}, got '{}'", names, text));
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key, what);
}

}  // namespace

KeyValues KeyValues::parse(const std::string& text, const std::string& source) {
  KeyValues kv;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("", fmt::format("{}:{}: expected 'key = value', got '{}'", source, lineno, line));
    }
    const std::string key = trim(line.substr(0, eq));
    if (kv.has(key)) {
      throw ConfigError(key, fmt::format("{}:{}: key given twice", source, lineno));
    }
    kv.set(key, trim(line.substr(eq + 1)));
  }
  return kv;
}

KeyValues KeyValues::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("", fmt::format("cannot read config file '{}'", path));
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), path);
}

void KeyValues::set(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("", fmt::format("override '{}' is not key=value", assignment));
  }
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void KeyValues::set(const std::string& key, const std::string& value) {
  if (!valid_key(key)) throw ConfigError(key, "not a valid key name");
  if (value.empty()) throw ConfigError(key, "empty value");
  values_[key] = unquote(key, value);
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "n",         "l",         "half_width", "graph",        "dissipator", "omega",
      "times",     "t_min",     "t_max",      "steps",        "spacing",    "method",
      "guard_tol", "mode",      "k_max",      "nodes",        "tol",        "series_max_t",
      "window_lo", "window_hi", "regime_tol", "source",       "input",      "t",
      "svg",       "out",       "threads"};
  return keys;
}

RunConfig make_config(const std::string& command, const KeyValues& kv) {
  static const std::set<std::string> commands = {"evolve", "analytic", "alpha", "purity-sweep"};
  if (!commands.count(command)) throw ConfigError("", fmt::format("unknown command '{}'", command));

  const auto& keys = known_keys();
  for (const auto& [key, value] : kv.values()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError(key, "unknown key");
    }
  }
  const auto& v = kv.values();
  auto get = [&](const char* key) -> const std::string* {
    const auto it = v.find(key);
    return it == v.end() ? nullptr : &it->second;
  };

  RunConfig c;
  if (command == "alpha") c.graph = GraphChoice::line;
  if (command == "purity-sweep") {
    for (int i = 0; i <= 10; ++i) c.omega.push_back(i / 10.0);
  }

  if (auto* s = get("n")) c.n = to_int("n", *s);
  if (auto* s = get("l")) c.l = to_int("l", *s);
  if (auto* s = get("half_width")) c.half_width = to_int("half_width", *s);
  if (auto* s = get("graph")) {
    c.graph = to_enum<GraphChoice>("graph", *s, {{"segment", GraphChoice::segment}, {"line", GraphChoice::line}});
  }
  if (auto* s = get("dissipator")) {
    c.dissipator = to_enum<DissipatorKind>(
        "dissipator", *s, {{"global", DissipatorKind::global_sum}, {"local", DissipatorKind::local_set}});
  }
  if (auto* s = get("omega")) c.omega = to_list("omega", *s);
  if (auto* s = get("times")) c.times = to_list("times", *s);
  if (auto* s = get("t_min")) c.t_min = to_double("t_min", *s);
  if (auto* s = get("t_max")) c.t_max = to_double("t_max", *s);
  if (auto* s = get("steps")) c.steps = to_int("steps", *s);
  if (auto* s = get("spacing")) {
    c.spacing = to_enum<Spacing>("spacing", *s, {{"linear", Spacing::linear}, {"log", Spacing::log}});
  }
  if (auto* s = get("method")) {
    c.method = to_enum<Method>("method", *s,
                               {{"auto", Method::automatic},
                                {"expm", Method::dense_expm},
                                {"action", Method::taylor_action},
                                {"spectral", Method::spectral}});
  }
  if (auto* s = get("guard_tol")) c.guard_tol = to_double("guard_tol", *s);
  if (auto* s = get("mode")) {
    c.mode = to_enum<AnalyticMode>("mode", *s,
                                   {{"segment", AnalyticMode::segment},
                                    {"segment_asymptotic", AnalyticMode::segment_asymptotic},
                                    {"line_quadrature", AnalyticMode::line_quadrature},
                                    {"line_series", AnalyticMode::line_series}});
  }
  if (auto* s = get("k_max")) c.k_max = to_int("k_max", *s);
  if (auto* s = get("nodes")) c.nodes = to_int("nodes", *s);
  if (auto* s = get("tol")) c.tol = to_double("tol", *s);
  if (auto* s = get("series_max_t")) c.series_max_t = to_double("series_max_t", *s);
  if (auto* s = get("window_lo")) c.window_lo = to_double("window_lo", *s);
  if (auto* s = get("window_hi")) c.window_hi = to_double("window_hi", *s);
  if (auto* s = get("regime_tol")) c.regime_tol = to_double("regime_tol", *s);
  if (auto* s = get("source")) {
    c.source = to_enum<AlphaSource>("source", *s,
                                    {{"evolve", AlphaSource::evolve},
                                     {"closed_form", AlphaSource::closed_form},
                                     {"csv", AlphaSource::csv}});
  }
  if (auto* s = get("input")) c.input = *s;
  if (auto* s = get("t")) c.t = to_double("t", *s);
  if (auto* s = get("svg")) c.svg = *s;
  if (auto* s = get("out")) c.out = *s;
  if (auto* s = get("threads")) c.threads = to_int("threads", *s);

  // Ranges shared by every command.
  require(c.threads >= 0, "threads", "must be >= 0");
  for (double w : c.omega) require(w >= 0.0 && w <= 1.0, "omega", fmt::format("{} is outside [0, 1]", w));
  require(c.guard_tol > 0.0, "guard_tol", "must be positive");
  require(c.half_width >= 0, "half_width", "must be >= 0");
  if (!c.times.empty()) {
    for (std::size_t i = 0; i < c.times.size(); ++i) {
      require(c.times[i] >= 0.0, "times", "must be non-negative");
      require(i == 0 || c.times[i] > c.times[i - 1], "times", "must be strictly increasing");
    }
  } else {
    require(c.t_min >= 0.0, "t_min", "must be >= 0");
    require(c.t_max >= c.t_min, "t_max", "must be >= t_min");
    require(c.steps >= 1, "steps", "must be >= 1");
    require(c.spacing == Spacing::linear || c.t_min > 0.0, "t_min", "log spacing needs t_min > 0");
  }
  require(!(c.method == Method::spectral && c.dissipator == DissipatorKind::local_set), "method",
          "spectral propagation needs the global dissipator");

  const bool on_segment = c.graph == GraphChoice::segment;
  auto check_segment = [&] {
    require(c.n >= 1, "n", "required, must be >= 1");
    require(c.l >= 1 && c.l <= c.n, "l", fmt::format("must be in [1, n = {}]", c.n));
  };
  auto single_omega = [&] {
    require(c.omega.size() == 1, "omega", "this command takes exactly one value");
  };

  if (command == "evolve") {
    single_omega();
    if (on_segment) {
      check_segment();
    } else {
      require(!get("l"), "l", "the line walk always starts at vertex 0");
    }
  } else if (command == "analytic") {
    require(!get("graph"), "graph", "analytic picks the graph through 'mode'");
    switch (c.mode) {
      case AnalyticMode::segment:
        single_omega();
        check_segment();
        break;
      case AnalyticMode::segment_asymptotic:
        check_segment();
        require(c.omega.size() <= 1, "omega", "this command takes at most one value");
        require(c.omega.empty() || c.omega[0] > 0.0, "omega",
                "the long-time limit needs omega > 0");
        break;
      case AnalyticMode::line_quadrature:
      case AnalyticMode::line_series:
        single_omega();
        require(c.k_max >= 0, "k_max", "must be >= 0");
        require(c.nodes == 0 || c.nodes >= 8, "nodes", "must be 0 (automatic) or >= 8");
        require(c.tol > 0.0, "tol", "must be positive");
        require(c.series_max_t > 0.0, "series_max_t", "must be positive");
        break;
    }
  } else if (command == "alpha") {
    if (c.source == AlphaSource::csv) {
      require(!c.input.empty(), "input", "required when source = csv");
    } else {
      require(!c.omega.empty(), "omega", "needs at least one value");
    }
    if (c.source == AlphaSource::evolve && on_segment) check_segment();
    require(c.regime_tol > 0.0, "regime_tol", "must be positive");
    if (c.window_lo && c.window_hi) {
      require(*c.window_lo < *c.window_hi, "window_hi", "must exceed window_lo");
    }
    if (c.window_lo) require(*c.window_lo > 0.0, "window_lo", "must be positive");
  } else {  // purity-sweep
    require(on_segment, "graph", "purity-sweep runs on the segment");
    check_segment();
    require(!c.omega.empty(), "omega", "needs at least one value");
    require(c.t >= 0.0, "t", "must be >= 0");
  }
  return c;
}

std::vector<double> time_grid(const RunConfig& cfg) {
  if (!cfg.times.empty()) return cfg.times;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(cfg.steps) + 1);
  for (int i = 0; i <= cfg.steps; ++i) {
    const double f = static_cast<double>(i) / cfg.steps;
    if (cfg.spacing == Spacing::linear) {
      out.push_back(cfg.t_min + f * (cfg.t_max - cfg.t_min));
    } else {
      out.push_back(cfg.t_min * std::pow(cfg.t_max / cfg.t_min, f));
    }
  }
  out.back() = cfg.t_max;
  // A degenerate range collapses to one point.
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace qsw::cli
