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

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fstream>
#include <sstream>

#include "qsw/cli.hpp"
#include "qsw/errors.hpp"

namespace qsw::cli {

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum stochastic walks on path graphs", "qsw"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_path;
  int threads = -1;
  long long seed = 0;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "Config file (flat key = value)");
  app.add_option("--out", out_path, "CSV output path (default: standard output)");
  app.add_option("--threads", threads, "Worker threads (0: all cores)");
  app.add_option("--seed", seed, "Reserved; the dynamics are deterministic");
  app.add_option("--set", overrides, "Override a config key, key=value (repeatable)")
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

  app.add_subcommand("evolve", "Propagate the master equation; t,vertex,probability,purity");
  app.add_subcommand("analytic", "Closed-form distributions; t,k,probability,method");
  app.add_subcommand("alpha", "Fit mu2 ~ t^alpha per omega; omega,alpha,r_squared,...");
  app.add_subcommand("purity-sweep", "Final-state purity against omega; omega,purity");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream help;
    const int code = app.exit(e, help, help);
    (code == 0 ? out : err) << help.str();
    return code == 0 ? kOk : kConfigError;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  RunConfig cfg;
  try {
    KeyValues kv = config_path.empty() ? KeyValues{} : KeyValues::load(config_path);
    for (const auto& o : overrides) kv.set(o);
    if (!out_path.empty()) kv.set("out", out_path);
    if (threads >= 0) kv.set("threads", std::to_string(threads));
    cfg = make_config(command, kv);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  // Buffer the CSV so a failed run leaves no partial file behind.
  std::ostringstream csv;
  std::string summary;
  try {
    if (command == "evolve") {
      cmd_evolve(cfg, csv, err);
    } else if (command == "analytic") {
      cmd_analytic(cfg, csv, err);
    } else if (command == "alpha") {
      summary = cmd_alpha(cfg, csv, err);
    } else {
      cmd_purity_sweep(cfg, csv, err);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const TruncationError& e) {
    err << "truncation: " << e.what() << '\n';
    return kTruncation;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const InvalidState& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const InvalidArgument& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }

  if (cfg.out.empty()) {
    out << csv.str();
    if (!summary.empty()) err << summary << '\n';
  } else {
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f || !(f << csv.str())) {
      err << fmt::format("error: cannot write '{}'\n", cfg.out);
      return kFailure;
    }
    if (!summary.empty()) out << summary << '\n';
  }
  return kOk;
}

}  // namespace qsw::cli
