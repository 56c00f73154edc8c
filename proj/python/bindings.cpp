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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "qsw/analytic.hpp"
#include "qsw/cli.hpp"
#include "qsw/errors.hpp"
#include "qsw/evolution.hpp"
#include "qsw/lattice.hpp"
#include "qsw/moments.hpp"

namespace py = pybind11;
using namespace qsw;

namespace {

DissipatorKind dissipator_from(const std::string& s) {
  if (s == "global") return DissipatorKind::global_sum;
  if (s == "local") return DissipatorKind::local_set;
  throw InvalidArgument("dissipator must be 'global' or 'local', got '" + s + "'");
}

Method method_from(const std::string& s) {
  if (s == "auto") return Method::automatic;
  if (s == "expm") return Method::dense_expm;
  if (s == "action") return Method::taylor_action;
  if (s == "spectral") return Method::spectral;
  throw InvalidArgument("method must be auto|expm|action|spectral, got '" + s + "'");
}

AdjacencySpec graph_from(const std::string& kind, int size) {
  if (kind == "segment") return build_segment(size);
  if (kind == "line") return build_truncated_line(size);
  throw InvalidArgument("graph must be 'segment' or 'line', got '" + kind + "'");
}

}  // namespace

PYBIND11_MODULE(qsw, m) {
  m.doc() = "Quantum stochastic walks on path graphs";

  py::register_exception<InvalidState>(m, "InvalidState", PyExc_ValueError);
  py::register_exception<TruncationError>(m, "TruncationError", PyExc_RuntimeError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<AdjacencySpec>(m, "Graph")
      .def(py::init(&graph_from), py::arg("kind"), py::arg("size"),
           "kind 'segment' takes the vertex count, 'line' the half width.")
      .def_property_readonly("size", &AdjacencySpec::size)
      .def_property_readonly("labels", &AdjacencySpec::labels)
      .def_property_readonly("adjacency", &AdjacencySpec::matrix)
      .def("index_of", &AdjacencySpec::index_of);

  py::class_<Walk>(m, "Walk")
      .def(py::init([](const AdjacencySpec& g, const std::string& d, double omega) {
             return Walk(g, dissipator_from(d), omega);
           }),
           py::arg("graph"), py::arg("dissipator") = "global", py::arg("omega"))
      .def(
          "run",
          [](const Walk& w, const std::vector<double>& times, int initial_vertex,
             const std::string& method) {
            std::vector<ComplexMatrix> out;
            for (const auto& rho : w.run(WalkParams{w.omega(), times, initial_vertex}, method_from(method))) {
              out.push_back(rho.matrix());
            }
            return out;
          },
          py::arg("times"), py::arg("initial_vertex"), py::arg("method") = "auto",
          "Density matrices at each time, started from the basis state of a vertex label.")
      .def(
          "run_state",
          [](const Walk& w, const ComplexMatrix& rho0, const std::vector<double>& times,
             const std::string& method) {
            std::vector<ComplexMatrix> out;
            for (const auto& rho : w.run(DensityMatrix(rho0), times, method_from(method))) {
              out.push_back(rho.matrix());
            }
            return out;
          },
          py::arg("rho0"), py::arg("times"), py::arg("method") = "auto")
      .def_property_readonly("omega", &Walk::omega);

  m.def("generator", [](const AdjacencySpec& g, const std::string& d, double omega) {
    return build_generator(g, build_dissipators(g, dissipator_from(d)), omega).matrix();
  }, py::arg("graph"), py::arg("dissipator"), py::arg("omega"), "Dense n^2 x n^2 superoperator.");
  m.def("expm", [](const ComplexMatrix& a) { return expm(a); }, py::arg("a"));
  m.def("purity", [](const ComplexMatrix& rho) { return purity(DensityMatrix(rho, kEvolvedTolerance)); },
        py::arg("rho"));

  m.def("segment_distribution", &segment_distribution, py::arg("n"), py::arg("l"), py::arg("omega"),
        py::arg("t"));
  m.def("asymptotic_distribution", &asymptotic_distribution, py::arg("n"), py::arg("l"));
  m.def("line_distribution", &line_distribution, py::arg("k"), py::arg("omega"), py::arg("t"),
        py::arg("nodes") = 0);
  m.def("line_distribution_profile", &line_distribution_profile, py::arg("k_max"), py::arg("omega"),
        py::arg("t"), py::arg("nodes") = 0);
  m.def(
      "line_distribution_series",
      [](int k, double omega, double t, double tol, double max_t) {
        SeriesOptions o;
        o.tol = tol;
        o.max_t = max_t;
        return line_distribution_series(k, omega, t, o);
      },
      py::arg("k"), py::arg("omega"), py::arg("t"), py::arg("tol") = 1e-15, py::arg("max_t") = 5.0);
  m.def("series_coefficient_A", &series_coefficient_A, py::arg("n"), py::arg("k"));
  m.def("series_coefficient_B", &series_coefficient_B, py::arg("n"), py::arg("k"), py::arg("omega"));
  m.def("mu2_closed", &mu2_closed, py::arg("omega"), py::arg("t"));
  m.def(
      "moment_leading_coefficient",
      [](int mm, double omega) {
        const auto lt = moment_leading_coefficient(mm, omega);
        return py::make_tuple(lt.coefficient, lt.power);
      },
      py::arg("m"), py::arg("omega"), "(coefficient, power)");

  m.def(
      "central_moment",
      [](const std::vector<int>& positions, const Eigen::VectorXd& p, int mm) {
        return central_moment(PositionDistribution{positions, p}, mm);
      },
      py::arg("positions"), py::arg("probabilities"), py::arg("m"));
  m.def(
      "fit_alpha",
      [](const std::vector<double>& times, const std::vector<double>& values, double lo, double hi) {
        MomentSeries s{times, values};
        s.source = MomentSource::external;
        const auto f = fit_alpha(s, lo, hi);
        py::dict d;
        d["alpha"] = f.alpha;
        d["intercept"] = f.intercept;
        d["r_squared"] = f.r_squared;
        d["window_lo"] = f.window_lo;
        d["window_hi"] = f.window_hi;
        d["points"] = f.points;
        return d;
      },
      py::arg("times"), py::arg("values"), py::arg("lo"), py::arg("hi"));
  m.def(
      "classify_regime",
      [](double alpha, double tol) {
        const auto c = classify_regime(alpha, tol);
        return py::make_tuple(std::string(to_string(c.regime)), c.out_of_model);
      },
      py::arg("alpha"), py::arg("tol") = 0.05);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<std::string> full = {"qsw"};
        full.insert(full.end(), args.begin(), args.end());
        std::vector<const char*> argv;
        for (const auto& a : full) argv.push_back(a.c_str());
        std::ostringstream out, err;
        int code = 0;
        {
          py::gil_scoped_release release;
          code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line in-process; returns (exit code, stdout, stderr).");
}
