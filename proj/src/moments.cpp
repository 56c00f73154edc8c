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

#include "qsw/moments.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "qsw/errors.hpp"

namespace qsw {

double central_moment(const PositionDistribution& dist, int m) {
  if (m < 1) throw InvalidArgument(fmt::format("moment order must be >= 1, got {}", m));
  if (static_cast<Eigen::Index>(dist.positions.size()) != dist.probabilities.size()) {
    throw InvalidArgument("positions and probabilities differ in length");
  }
  const double total = dist.probabilities.sum();
  if (!(std::abs(total - 1.0) <= 1e-8)) {
    throw InvalidArgument(fmt::format("distribution sums to {:.12g}, not 1", total));
  }
  double mean = 0.0;
  for (std::size_t i = 0; i < dist.positions.size(); ++i) {
    mean += dist.positions[i] * dist.probabilities(static_cast<Eigen::Index>(i));
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < dist.positions.size(); ++i) {
    acc += std::pow(dist.positions[i] - mean, m) * dist.probabilities(static_cast<Eigen::Index>(i));
  }
  return acc;
}

void MomentSeries::validate() const {
  if (times.size() != values.size()) {
    throw InvalidArgument(fmt::format("moment series has {} times but {} values", times.size(),
                                      values.size()));
  }
}

std::pair<double, double> default_window(const std::vector<double>& times) {
  if (times.empty()) throw InvalidArgument("empty time grid");
  const double t_max = *std::max_element(times.begin(), times.end());
  return {0.5 * t_max, t_max};
}

ScalingFit fit_alpha(const MomentSeries& series, double lo, double hi) {
  series.validate();
  if (!(lo <= hi)) throw InvalidArgument(fmt::format("empty window [{}, {}]", lo, hi));
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    const double t = series.times[i];
    if (t < lo || t > hi) continue;
    const double v = series.values[i];
    if (!(t > 0.0) || !(v > 0.0)) {
      throw InvalidArgument(
          fmt::format("non-positive point (t = {}, mu = {}) inside the fit window", t, v));
    }
    xs.push_back(std::log(t));
    ys.push_back(std::log(v));
  }
  if (xs.size() < 3) {
    throw InvalidArgument(
        fmt::format("fit window [{}, {}] holds {} points; need at least 3", lo, hi, xs.size()));
  }
  const auto count = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= count;
  my /= count;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw InvalidArgument("fit window has no spread in t");

  ScalingFit fit;
  fit.alpha = sxy / sxx;
  fit.intercept = my - fit.alpha * mx;
  fit.window_lo = lo;
  fit.window_hi = hi;
  fit.points = static_cast<int>(xs.size());
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.alpha * xs[i]);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return fit;
}

std::vector<double> running_exponent(const MomentSeries& series) {
  series.validate();
  const std::size_t n = series.times.size();
  if (n < 2) throw InvalidArgument("running exponent needs at least 2 points");
  std::vector<double> lt(n);
  std::vector<double> lv(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(series.times[i] > 0.0) || !(series.values[i] > 0.0)) {
      throw InvalidArgument("running exponent needs positive times and values");
    }
    lt[i] = std::log(series.times[i]);
    lv[i] = std::log(series.values[i]);
  }
  std::vector<double> out(n);
  out[0] = (lv[1] - lv[0]) / (lt[1] - lt[0]);
  out[n - 1] = (lv[n - 1] - lv[n - 2]) / (lt[n - 1] - lt[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    out[i] = (lv[i + 1] - lv[i - 1]) / (lt[i + 1] - lt[i - 1]);
  }
  return out;
}

RegimeClassification classify_regime(double alpha, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("regime tolerance must be > 0");
  if (!std::isfinite(alpha)) throw InvalidArgument("alpha is not finite");
  RegimeClassification c;
  c.out_of_model = alpha < 0.0 || alpha > 2.0 + tol;
  if (std::abs(alpha - 2.0) <= tol || alpha > 2.0) {
    c.regime = Regime::ballistic;
  } else if (std::abs(alpha - 1.0) <= tol) {
    c.regime = Regime::normal;
  } else if (alpha < 1.0) {
    c.regime = Regime::sub_diffusive;
  } else {
    c.regime = Regime::super_diffusive;
  }
  return c;
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::sub_diffusive:
      return "sub_diffusive";
    case Regime::normal:
      return "normal";
    case Regime::super_diffusive:
      return "super_diffusive";
    case Regime::ballistic:
      return "ballistic";
  }
  return "unknown";
}

}  // namespace qsw
