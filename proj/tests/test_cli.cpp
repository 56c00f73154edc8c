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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "qsw/cli.hpp"

using namespace qsw::cli;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "qsw");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "qsw_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  f << text;
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config parser") {
  const auto kv = KeyValues::parse(
      "# comment\n"
      "n = 5\n"
      "omega = [0.1, 0.5 ,1]   # trailing comment\n"
      "out = \"a # b.csv\"\n"
      "\n"
      "dissipator=local\n");
  CHECK(kv.values().at("n") == "5");
  CHECK(kv.values().at("omega") == "[0.1, 0.5 ,1]");
  CHECK(kv.values().at("out") == "a # b.csv");
  CHECK(kv.values().at("dissipator") == "local");

  CHECK_THROWS_AS(KeyValues::parse("n 5\n"), ConfigError);
  CHECK_THROWS_AS(KeyValues::parse("n = 5\nn = 6\n"), ConfigError);
  CHECK_THROWS_AS(KeyValues::parse("N = 5\n"), ConfigError);
  CHECK_THROWS_AS(KeyValues::parse("n =\n"), ConfigError);
  CHECK_THROWS_AS(KeyValues::parse("out = \"x\n"), ConfigError);

  KeyValues over = kv;
  over.set("n=7");
  CHECK(over.values().at("n") == "7");
  CHECK_THROWS_AS(over.set("novalue"), ConfigError);
}

TEST_CASE("make_config validates before running") {
  auto kv = KeyValues::parse("n = 4\nl = 2\nomega = 0.5\n");
  const auto cfg = make_config("evolve", kv);
  CHECK(cfg.n == 4);
  CHECK(cfg.l == 2);
  REQUIRE(cfg.omega.size() == 1);
  CHECK(cfg.omega[0] == 0.5);

  auto expect_key = [](const std::string& command, const std::string& text, const std::string& key) {
    try {
      make_config(command, KeyValues::parse(text));
      FAIL("no ConfigError for " << text);
    } catch (const ConfigError& e) {
      CHECK(e.key() == key);
    }
  };
  expect_key("evolve", "n = 4\nomega = 0.5\nnn = 3\n", "nn");
  expect_key("evolve", "n = 4\nomega = 1.5\n", "omega");
  expect_key("evolve", "n = 4\nomega = [0.1, 0.2]\n", "omega");
  expect_key("evolve", "n = 4\nl = 5\nomega = 0.5\n", "l");
  expect_key("evolve", "omega = 0.5\n", "n");
  expect_key("evolve", "n = 4\nomega = 0.5\nn_bad = x\n", "n_bad");
  expect_key("evolve", "n = four\nomega = 0.5\n", "n");
  expect_key("evolve", "n = 4\nomega = 0.5\nt_min = 2\nt_max = 1\n", "t_max");
  expect_key("evolve", "n = 4\nomega = 0.5\nspacing = log\n", "t_min");
  expect_key("evolve", "n = 4\nomega = 0.5\ntimes = [1, 0.5]\n", "times");
  expect_key("evolve", "n = 4\nomega = 0.5\ndissipator = local\nmethod = spectral\n", "method");
  expect_key("evolve", "n = 4\nomega = 0.5\ngraph = torus\n", "graph");
  expect_key("evolve", "graph = line\nl = 2\nomega = 0.5\n", "l");
  expect_key("analytic", "mode = line_quadrature\nomega = 1\nnodes = 4\n", "nodes");
  expect_key("analytic", "mode = segment_asymptotic\nn = 3\nl = 1\nomega = 0\n", "omega");
  expect_key("alpha", "omega = 1\nwindow_lo = 5\nwindow_hi = 2\n", "window_hi");
  expect_key("alpha", "source = csv\n", "input");
  expect_key("alpha", "omega = 1\nregime_tol = 0\n", "regime_tol");
  expect_key("purity-sweep", "n = 4\nl = 1\nt = -1\n", "t");
  expect_key("purity-sweep", "n = 4\nl = 1\nthreads = -2\n", "threads");
}

TEST_CASE("time grids") {
  RunConfig cfg;
  cfg.t_min = 0.0;
  cfg.t_max = 2.0;
  cfg.steps = 4;
  CHECK(time_grid(cfg) == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});

  cfg.spacing = Spacing::log;
  cfg.t_min = 1.0;
  cfg.t_max = 100.0;
  cfg.steps = 2;
  const auto g = time_grid(cfg);
  REQUIRE(g.size() == 3);
  CHECK(g[1] == doctest::Approx(10.0).epsilon(1e-14));
  CHECK(g[2] == 100.0);

  cfg.times = {0.25, 3.0};
  CHECK(time_grid(cfg) == cfg.times);
}

TEST_CASE("parallel_for covers every index and rethrows the first failure") {
  std::vector<int> hits(50, 0);
  parallel_for(50, 4, [&](int i) { hits[static_cast<std::size_t>(i)] += 1; });
  for (int h : hits) CHECK(h == 1);

  try {
    parallel_for(10, 3, [](int i) {
      if (i == 7 || i == 4) throw std::runtime_error(std::to_string(i));
    });
    FAIL("expected a throw");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "4");
  }
  parallel_for(0, 4, [](int) { FAIL("called"); });
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(1.0) == "1");
}

TEST_CASE("evolve command") {
  const auto r = invoke({"evolve", "--set", "n=2", "--set", "l=1", "--set", "omega=1", "--set",
                         "dissipator=global", "--set", "times=[0, 2]"});
  REQUIRE(r.code == kOk);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == std::vector<std::string>{"t", "vertex", "probability", "purity"});
  // t = 0 is the delta at l.
  CHECK(rows[1] == std::vector<std::string>{"0", "1", "1", "1"});
  CHECK(rows[2][2] == "0");
  CHECK(rows[3][0] == "2");
  CHECK(rows[3][1] == "1");
  CHECK(std::stod(rows[3][2]) == doctest::Approx(0.5 * (1.0 + std::exp(-1.0))).epsilon(1e-12));
  CHECK(std::stod(rows[3][2]) == doctest::Approx(0.6839397).epsilon(1e-7));

  // Probabilities per time sum to one.
  const auto big = invoke({"evolve", "--set", "n=9", "--set", "l=3", "--set", "omega=0.4", "--set",
                           "dissipator=local", "--set", "t_max=3", "--set", "steps=6"});
  REQUIRE(big.code == kOk);
  const auto brows = parse_csv(big.out);
  std::map<std::string, double> sums;
  for (std::size_t i = 1; i < brows.size(); ++i) sums[brows[i][0]] += std::stod(brows[i][2]);
  CHECK(sums.size() == 7);
  for (const auto& [t, s] : sums) CHECK(std::abs(s - 1.0) < 1e-8);
}

TEST_CASE("evolve on the line: guard violation exits 3") {
  const auto ok = invoke({"evolve", "--set", "graph=line", "--set", "omega=0.5", "--set", "t_max=2",
                          "--set", "steps=2"});
  REQUIRE(ok.code == kOk);
  const auto rows = parse_csv(ok.out);
  CHECK(rows[1][1] == std::to_string(-14));  // auto half width ceil(2 * 2 + 10)

  const auto bad = invoke({"evolve", "--set", "graph=line", "--set", "half_width=3", "--set",
                           "omega=0.5", "--set", "t_max=5"});
  CHECK(bad.code == kTruncation);
  CHECK(bad.err.find("half_width") != std::string::npos);
  CHECK(bad.out.empty());
}

TEST_CASE("analytic command") {
  const auto asym = invoke({"analytic", "--set", "mode=segment_asymptotic", "--set", "n=5", "--set", "l=3"});
  REQUIRE(asym.code == kOk);
  const auto rows = parse_csv(asym.out);
  REQUIRE(rows.size() == 6);
  const double expect[] = {1.0 / 6, 1.0 / 6, 1.0 / 3, 1.0 / 6, 1.0 / 6};
  for (int k = 0; k < 5; ++k) {
    const auto& row = rows[static_cast<std::size_t>(k) + 1];
    CHECK(row[0] == "inf");
    CHECK(row[1] == std::to_string(k + 1));
    CHECK(std::stod(row[2]) == doctest::Approx(expect[k]).epsilon(1e-15));
    CHECK(row[3] == "segment_asymptotic");
  }

  const auto quad = invoke({"analytic", "--set", "mode=line_quadrature", "--set", "omega=1", "--set",
                            "times=0.1", "--set", "k_max=2"});
  REQUIRE(quad.code == kOk);
  const auto qrows = parse_csv(quad.out);
  REQUIRE(qrows.size() == 6);
  CHECK(qrows[3][1] == "0");
  CHECK(std::stod(qrows[3][2]) == doctest::Approx(0.95268).epsilon(1e-5));
  CHECK(qrows[3][3] == "line_quadrature");

  const auto series = invoke({"analytic", "--set", "mode=line_series", "--set", "omega=1", "--set",
                              "times=0.1", "--set", "k_max=2"});
  REQUIRE(series.code == kOk);
  const auto srows = parse_csv(series.out);
  for (std::size_t i = 1; i < srows.size(); ++i) {
    CHECK(std::stod(srows[i][2]) == doctest::Approx(std::stod(qrows[i][2])).epsilon(1e-12));
    CHECK(srows[i][3] == "line_series");
  }

  const auto seg = invoke({"analytic", "--set", "mode=segment", "--set", "n=4", "--set", "l=2",
                           "--set", "omega=0.3", "--set", "times=[0]"});
  REQUIRE(seg.code == kOk);
  const auto segrows = parse_csv(seg.out);
  REQUIRE(segrows.size() == 5);
  for (int k = 1; k <= 4; ++k) {
    CHECK(std::stod(segrows[static_cast<std::size_t>(k)][2]) ==
          doctest::Approx(k == 2 ? 1.0 : 0.0).epsilon(1e-14));
  }

  // Past the series' trusted range: accuracy failure, exit 4.
  const auto far = invoke({"analytic", "--set", "mode=line_series", "--set", "omega=1", "--set",
                           "times=8", "--set", "k_max=1"});
  CHECK(far.code == kNumerical);
  CHECK(far.out.empty());

  // Too few quadrature nodes for the requested time: also exit 4.
  const auto coarse = invoke({"analytic", "--set", "mode=line_quadrature", "--set", "omega=0",
                              "--set", "times=50", "--set", "nodes=8"});
  CHECK(coarse.code == kNumerical);
}

TEST_CASE("alpha command") {
  const auto r = invoke({"alpha", "--set", "omega=[0.5, 1]", "--set", "t_min=1", "--set", "t_max=30",
                         "--set", "steps=29", "--set", "window_lo=20"});
  REQUIRE(r.code == kOk);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"omega", "alpha", "r_squared", "window_lo", "window_hi", "regime"});
  CHECK(rows[1][0] == "0.5");
  CHECK(rows[1][5] == "ballistic");
  CHECK(rows[1][3] == "20");
  CHECK(rows[1][4] == "30");
  CHECK(rows[2][0] == "1");
  CHECK(rows[2][5] == "normal");
  CHECK(std::stod(rows[2][1]) == doctest::Approx(1.0).epsilon(1e-9));
  // Summary goes to the log stream when the CSV takes standard output.
  CHECK(r.err.find("2 cells, 0 failed") != std::string::npos);

  // Synthetic mu2 = t^2 from a CSV file.
  const auto input = scratch("mu2.csv");
  std::string text = "t,mu2\n";
  for (int t = 1; t <= 20; ++t) text += std::to_string(t) + "," + std::to_string(t * t) + "\n";
  write_file(input, text);
  const auto out = scratch("alpha.csv");
  fs::remove(out);
  const auto syn = invoke({"alpha", "--set", "source=csv", "--set", "input=" + input.string(), "--out",
                           out.string()});
  REQUIRE(syn.code == kOk);
  const auto srows = parse_csv(read_file(out));
  REQUIRE(srows.size() == 2);
  CHECK(std::stod(srows[1][1]) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(srows[1][5] == "ballistic");
  CHECK(syn.out.find("1 cells, 0 failed") != std::string::npos);

  // A window holding too few points: NaN row, exit 0, warning.
  const auto thin = invoke({"alpha", "--set", "omega=[1]", "--set", "source=closed_form", "--set",
                            "times=[1, 2, 3, 4]", "--set", "window_lo=3.5", "--set", "window_hi=4"});
  REQUIRE(thin.code == kOk);
  const auto trows = parse_csv(thin.out);
  REQUIRE(trows.size() == 2);
  CHECK(trows[1][1] == "nan");
  CHECK(trows[1][5] == "failed");
  CHECK(thin.err.find("warning") != std::string::npos);
  CHECK(thin.err.find("1 failed") != std::string::npos);
}

TEST_CASE("purity-sweep command") {
  const auto svg = scratch("purity.svg");
  fs::remove(svg);
  const auto r = invoke({"purity-sweep", "--set", "n=12", "--set", "l=6", "--set", "t=3", "--set",
                         "svg=" + svg.string()});
  REQUIRE(r.code == kOk);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 12);
  CHECK(rows[0] == std::vector<std::string>{"omega", "purity"});
  CHECK(std::stod(rows[1][1]) == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t i = 2; i < rows.size(); ++i) {
    CHECK(std::stod(rows[i][1]) <= std::stod(rows[i - 1][1]) + 1e-10);
  }
  const auto picture = read_file(svg);
  CHECK(picture.rfind("<svg", 0) == 0);
  CHECK(picture.find("polyline") != std::string::npos);
}

TEST_CASE("config files, flags and exit codes") {
  const auto cfg = scratch("run.toml");
  write_file(cfg, "# evolve run\nn = 3\nl = 2\nomega = 0.25\ntimes = [0.5, 1]\nthreads = 1\n");
  const auto a = invoke({"--config", cfg.string(), "evolve"});
  REQUIRE(a.code == kOk);
  // --set wins over the file, flags after the subcommand are accepted.
  const auto b = invoke({"evolve", "--config", cfg.string(), "--set", "omega=0.75", "--threads", "2"});
  REQUIRE(b.code == kOk);
  CHECK(a.out != b.out);

  write_file(cfg, "n = 3\nomgea = 0.25\n");
  const auto typo = invoke({"--config", cfg.string(), "evolve"});
  CHECK(typo.code == kConfigError);
  CHECK(typo.err.find("omgea") != std::string::npos);

  CHECK(invoke({"--config", scratch("missing.toml").string(), "evolve"}).code == kConfigError);
  CHECK(invoke({"evolve", "--bogus"}).code == kConfigError);
  CHECK(invoke({}).code == kConfigError);
  CHECK(invoke({"walk"}).code == kConfigError);
  const auto help = invoke({"--help"});
  CHECK(help.code == kOk);
  CHECK(help.out.find("purity-sweep") != std::string::npos);
  CHECK(invoke({"evolve", "--seed", "7", "--set", "n=2", "--set", "omega=1"}).code == kOk);
}

TEST_CASE("identical config gives byte-identical CSV") {
  const std::vector<std::vector<std::string>> runs = {
      {"evolve", "--set", "n=7", "--set", "l=4", "--set", "omega=0.6", "--set", "dissipator=local",
       "--set", "t_max=4", "--set", "steps=4"},
      {"analytic", "--set", "mode=line_quadrature", "--set", "omega=0.3", "--set", "t_max=2",
       "--set", "steps=4", "--set", "k_max=4"},
      {"alpha", "--set", "omega=[0.2, 0.6, 1]", "--set", "t_min=1", "--set", "t_max=8"},
      {"purity-sweep", "--set", "n=8", "--set", "l=2", "--set", "t=2", "--set", "dissipator=local"},
  };
  for (const auto& args : runs) {
    auto one = args;
    one.insert(one.end(), {"--threads", "1"});
    auto many = args;
    many.insert(many.end(), {"--threads", "4"});
    const auto x = invoke(one);
    const auto y = invoke(many);
    const auto z = invoke(many);
    REQUIRE(x.code == kOk);
    CHECK(x.out == y.out);
    CHECK(y.out == z.out);
  }
}
