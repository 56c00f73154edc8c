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

#pragma once

#include <Eigen/Dense>
#include <string_view>
#include <vector>

namespace qsw {

/// Probability mass on integer positions.
struct PositionDistribution {
  std::vector<int> positions;
  Eigen::VectorXd probabilities;
};

/// sum_k (k - mean)^m p_k. Throws InvalidArgument unless the probabilities
/// sum to 1 within 1e-8 and the two arrays have equal length.
double central_moment(const PositionDistribution& dist, int m);

enum class MomentSource { expm, analytic_segment, analytic_line, closed_form, external };

struct MomentSeries {
  std::vector<double> times;
  std::vector<double> values;
  int order = 2;
  MomentSource source = MomentSource::expm;

  void validate() const;
};

struct ScalingFit {
  double alpha = 0.0;
  double intercept = 0.0;  // log-space intercept
  double window_lo = 0.0;
  double window_hi = 0.0;
  double r_squared = 0.0;
  int points = 0;
};

/// [t_max / 2, t_max] over the series' time grid.
std::pair<double, double> default_window(const std::vector<double>& times);

/// Least-squares slope of log mu vs log t over points with t in [lo, hi].
/// Throws InvalidArgument with fewer than 3 points in the window or a
/// non-positive value or time inside it.
ScalingFit fit_alpha(const MomentSeries& series, double lo, double hi);

/// d log mu / d log t at every grid point: centred differences inside,
/// one-sided at the ends. Needs positive times and values.
std::vector<double> running_exponent(const MomentSeries& series);

enum class Regime { sub_diffusive, normal, super_diffusive, ballistic };

struct RegimeClassification {
  Regime regime = Regime::normal;
  bool out_of_model = false;  // alpha outside [0, 2 + tol]
};

RegimeClassification classify_regime(double alpha, double tol);

std::string_view to_string(Regime r);

}  // namespace qsw
