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
#include <atomic>
#include <cmath>
#include <exception>
#include <fmt/format.h>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "qsw/analytic.hpp"
#include "qsw/cli.hpp"
#include "qsw/errors.hpp"
#include "qsw/moments.hpp"

namespace qsw::cli {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

AdjacencySpec make_graph(const RunConfig& cfg, double t_max) {
  if (cfg.graph == GraphChoice::segment) return build_segment(cfg.n);
  const int h = cfg.half_width > 0 ? cfg.half_width : light_cone_half_width(t_max);
  return build_truncated_line(h);
}

int start_label(const RunConfig& cfg) { return cfg.graph == GraphChoice::segment ? cfg.l : 0; }

// States of the configured walk on `times`, with the light-cone guard
// applied on the truncated line.
std::vector<DensityMatrix> run_walk(const RunConfig& cfg, const AdjacencySpec& graph, double omega,
                                    const std::vector<double>& times) {
  const Walk walk(graph, cfg.dissipator, omega);
  const auto rho0 = DensityMatrix::basis_state(graph.size(), graph.index_of(start_label(cfg)));
  auto states = walk.run(rho0, times, cfg.method);
  if (cfg.graph == GraphChoice::line) {
    for (std::size_t i = 0; i < times.size(); ++i) {
      try {
        check_light_cone(states[i], times[i], cfg.guard_tol);
      } catch (const TruncationError& e) {
        throw TruncationError(fmt::format("{} (half_width is {})", e.what(), (graph.size() - 1) / 2));
      }
    }
  }
  return states;
}

double second_moment(const AdjacencySpec& graph, const DensityMatrix& rho) {
  return central_moment(PositionDistribution{graph.labels(), rho.populations()}, 2);
}

MomentSeries read_moment_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("input", fmt::format("cannot read '{}'", path));
  MomentSeries series;
  series.source = MomentSource::external;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (lineno == 1) continue;  // header
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ConfigError("input", fmt::format("{}:{}: expected 't,value'", path, lineno));
    }
    try {
      std::size_t used = 0;
      series.times.push_back(std::stod(line.substr(0, comma), &used));
      series.values.push_back(std::stod(line.substr(comma + 1), &used));
    } catch (const std::logic_error&) {
      throw ConfigError("input", fmt::format("{}:{}: cannot parse '{}'", path, lineno, line));
    }
  }
  if (series.times.empty()) throw ConfigError("input", fmt::format("'{}' has no data rows", path));
  return series;
}

void write_svg(const std::string& path, const std::vector<double>& x, const std::vector<double>& y,
               const std::string& xlabel, const std::string& ylabel) {
  const double w = 640, h = 420, left = 70, right = 20, top = 20, bottom = 50;
  const auto [xmin_it, xmax_it] = std::minmax_element(x.begin(), x.end());
  const auto [ymin_it, ymax_it] = std::minmax_element(y.begin(), y.end());
  double x0 = *xmin_it, x1 = *xmax_it, y0 = *ymin_it, y1 = *ymax_it;
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 - y0 < 1e-12) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  auto px = [&](double v) { return left + (v - x0) / (x1 - x0) * (w - left - right); };
  auto py = [&](double v) { return h - bottom - (v - y0) / (y1 - y0) * (h - top - bottom); };

  std::string points;
  for (std::size_t i = 0; i < x.size(); ++i) {
    points += fmt::format("{}{:.2f},{:.2f}", i ? " " : "", px(x[i]), py(y[i]));
  }
  std::ofstream f(path);
  if (!f) throw ConfigError("svg", fmt::format("cannot write '{}'", path));
  f << fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n"
      "<line x1=\"{2}\" y1=\"{3}\" x2=\"{4}\" y2=\"{3}\" stroke=\"black\"/>\n"
      "<line x1=\"{2}\" y1=\"{5}\" x2=\"{2}\" y2=\"{3}\" stroke=\"black\"/>\n",
      w, h, left, h - bottom, w - right, top);
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4.0;
    const double yv = y0 + (y1 - y0) * i / 4.0;
    f << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{:.3g}</text>\n", px(xv),
                     h - bottom + 18, xv);
    f << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{:.4g}</text>\n", left - 6,
                     py(yv) + 4, yv);
  }
  f << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n",
                   (left + w - right) / 2, h - 10, xlabel);
  f << fmt::format(
      "<text x=\"16\" y=\"{:.2f}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.2f})\">{}</text>\n",
      (top + h - bottom) / 2, (top + h - bottom) / 2, ylabel);
  f << fmt::format("<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"{}\"/>\n",
                   points);
  for (std::size_t i = 0; i < x.size(); ++i) {
    f << fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"#1f77b4\"/>\n", px(x[i]),
                     py(y[i]));
  }
  f << "</svg>\n";
}

std::string_view method_name(AnalyticMode m) {
  switch (m) {
    case AnalyticMode::segment: return "segment";
    case AnalyticMode::segment_asymptotic: return "segment_asymptotic";
    case AnalyticMode::line_quadrature: return "line_quadrature";
    case AnalyticMode::line_series: return "line_series";
  }
  return "?";
}

}  // namespace

std::string format_number(double x) { return fmt::format("{:.17g}", x); }

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  if (count <= 0) return;
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, count);
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  std::atomic<int> next{0};
  auto body = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    body();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(body);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void cmd_evolve(const RunConfig& cfg, std::ostream& csv, std::ostream& /*log*/) {
  const auto times = time_grid(cfg);
  const auto graph = make_graph(cfg, times.back());
  const auto states = run_walk(cfg, graph, cfg.omega[0], times);
  csv << "t,vertex,probability,purity\n";
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto p = states[i].populations();
    const std::string t = format_number(times[i]);
    const std::string pur = format_number(purity(states[i]));
    for (int v = 0; v < graph.size(); ++v) {
      csv << t << ',' << graph.label(v) << ',' << format_number(p(v)) << ',' << pur << '\n';
    }
  }
}

void cmd_analytic(const RunConfig& cfg, std::ostream& csv, std::ostream& /*log*/) {
  csv << "t,k,probability,method\n";
  const std::string_view method = method_name(cfg.mode);
  if (cfg.mode == AnalyticMode::segment_asymptotic) {
    const auto p = asymptotic_distribution(cfg.n, cfg.l);
    for (int k = 0; k < cfg.n; ++k) {
      csv << "inf," << k + 1 << ',' << format_number(p(k)) << ',' << method << '\n';
    }
    return;
  }

  const auto times = time_grid(cfg);
  const double omega = cfg.omega[0];
  std::vector<std::vector<std::pair<int, double>>> rows(times.size());
  parallel_for(static_cast<int>(times.size()), cfg.threads, [&](int i) {
    const double t = times[static_cast<std::size_t>(i)];
    auto& out = rows[static_cast<std::size_t>(i)];
    switch (cfg.mode) {
      case AnalyticMode::segment: {
        const auto p = segment_distribution(cfg.n, cfg.l, omega, t);
        for (int k = 0; k < cfg.n; ++k) out.emplace_back(k + 1, p(k));
        break;
      }
      case AnalyticMode::line_quadrature: {
        const auto p = line_distribution_profile(cfg.k_max, omega, t, cfg.nodes);
        for (int k = -cfg.k_max; k <= cfg.k_max; ++k) out.emplace_back(k, p(k + cfg.k_max));
        break;
      }
      case AnalyticMode::line_series: {
        SeriesOptions opts;
        opts.tol = cfg.tol;
        opts.max_t = cfg.series_max_t;
        for (int k = -cfg.k_max; k <= cfg.k_max; ++k) {
          out.emplace_back(k, line_distribution_series(k, omega, t, opts));
        }
        break;
      }
      case AnalyticMode::segment_asymptotic:
        break;
    }
  });
  for (std::size_t i = 0; i < times.size(); ++i) {
    const std::string t = format_number(times[i]);
    for (const auto& [k, p] : rows[i]) {
      csv << t << ',' << k << ',' << format_number(p) << ',' << method << '\n';
    }
  }
}

std::string cmd_alpha(const RunConfig& cfg, std::ostream& csv, std::ostream& log) {
  struct Cell {
    double omega = kNaN;
    ScalingFit fit;
    bool ok = false;
    std::string regime = "failed";
    std::string note;
  };

  std::vector<Cell> cells;
  if (cfg.source == AlphaSource::csv) {
    cells.push_back(Cell{cfg.omega.size() == 1 ? cfg.omega[0] : kNaN, {}, false, "failed", {}});
  } else {
    for (double w : cfg.omega) cells.push_back(Cell{w, {}, false, "failed", {}});
  }
  const MomentSeries external =
      cfg.source == AlphaSource::csv ? read_moment_csv(cfg.input) : MomentSeries{};
  const auto times = cfg.source == AlphaSource::csv ? external.times : time_grid(cfg);

  parallel_for(static_cast<int>(cells.size()), cfg.threads, [&](int i) {
    Cell& cell = cells[static_cast<std::size_t>(i)];
    MomentSeries series;
    try {
      if (cfg.source == AlphaSource::csv) {
        series = external;
      } else {
        series.times = times;
        series.order = 2;
        if (cfg.source == AlphaSource::closed_form) {
          series.source = MomentSource::closed_form;
          for (double t : times) series.values.push_back(mu2_closed(cell.omega, t));
        } else {
          series.source = MomentSource::expm;
          const auto graph = make_graph(cfg, times.back());
          const auto states = run_walk(cfg, graph, cell.omega, times);
          for (const auto& rho : states) series.values.push_back(second_moment(graph, rho));
        }
      }
      series.validate();
      const auto [dlo, dhi] = default_window(series.times);
      cell.fit = fit_alpha(series, cfg.window_lo.value_or(dlo), cfg.window_hi.value_or(dhi));
      const auto cls = classify_regime(cell.fit.alpha, cfg.regime_tol);
      cell.regime = std::string(to_string(cls.regime));
      if (cls.out_of_model) cell.note = "alpha outside [0, 2]";
      cell.ok = true;
    } catch (const InvalidArgument& e) {
      cell.note = e.what();
    }
  });

  csv << "omega,alpha,r_squared,window_lo,window_hi,regime\n";
  int failed = 0;
  for (const auto& cell : cells) {
    if (!cell.ok) {
      ++failed;
      const auto [dlo, dhi] = times.empty() ? std::pair{kNaN, kNaN} : default_window(times);
      csv << format_number(cell.omega) << ",nan,nan," << format_number(cfg.window_lo.value_or(dlo))
          << ',' << format_number(cfg.window_hi.value_or(dhi)) << ",failed\n";
      log << fmt::format("warning: omega = {}: fit failed: {}\n", cell.omega, cell.note);
      continue;
    }
    csv << format_number(cell.omega) << ',' << format_number(cell.fit.alpha) << ','
        << format_number(cell.fit.r_squared) << ',' << format_number(cell.fit.window_lo) << ','
        << format_number(cell.fit.window_hi) << ',' << cell.regime << '\n';
    if (!cell.note.empty()) log << fmt::format("warning: omega = {}: {}\n", cell.omega, cell.note);
  }

  std::string summary = fmt::format("alpha: {} cells, {} failed", cells.size(), failed);
  for (const auto& cell : cells) {
    if (cell.ok) summary += fmt::format("; omega={} alpha={:.4f} {}", cell.omega, cell.fit.alpha, cell.regime);
  }
  return summary;
}

void cmd_purity_sweep(const RunConfig& cfg, std::ostream& csv, std::ostream& log) {
  const auto graph = build_segment(cfg.n);
  std::vector<double> values(cfg.omega.size());
  parallel_for(static_cast<int>(cfg.omega.size()), cfg.threads, [&](int i) {
    const auto idx = static_cast<std::size_t>(i);
    const auto states = run_walk(cfg, graph, cfg.omega[idx], {cfg.t});
    values[idx] = purity(states.front());
  });
  csv << "omega,purity\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    csv << format_number(cfg.omega[i]) << ',' << format_number(values[i]) << '\n';
  }
  if (!cfg.svg.empty()) {
    write_svg(cfg.svg, cfg.omega, values, "omega", "purity");
    log << fmt::format("wrote {}\n", cfg.svg);
  }
}

}  // namespace qsw::cli
