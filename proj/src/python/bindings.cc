// Copyright 2026 The Contfact Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "contfact/bench.h"
#include "contfact/factor.h"
#include "contfact/local_ldp.h"
#include "contfact/mechanisms.h"
#include "contfact/privacy.h"

namespace py = pybind11;

namespace contfact {
namespace {

NoisePlan MakePlan(double epsilon, double delta, int64_t horizon,
                   const std::string& mode, uint64_t seed, bool sigma_zero) {
  return NoisePlan{.budget = PrivacyBudget(epsilon, delta),
                   .mode = ParseNoiseMode(mode),
                   .horizon = horizon,
                   .seed = seed,
                   .dry_run = sigma_zero};
}

ExperimentConfig MakeConfig(const std::string& task, int64_t T,
                            double epsilon, double delta, uint64_t seed,
                            int trials, const std::string& mechanism,
                            const std::string& mode, bool sigma_zero) {
  ExperimentConfig c;
  c.task = ParseTask(task);
  c.T = T;
  c.epsilon = epsilon;
  c.delta = delta;
  c.seed = seed;
  c.trials = trials;
  c.mechanism = ParseMechanism(mechanism);
  c.mode = ParseNoiseMode(mode);
  c.sigma_zero = sigma_zero;
  return c;
}

}  // namespace
}  // namespace contfact

PYBIND11_MODULE(_contfact, m) {
  using namespace contfact;
  m.doc() = "Factorization mechanism for private continual counting";

  py::register_exception<UnsupportedRegimeError>(m, "UnsupportedRegimeError",
                                                 PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError",
                                         PyExc_ArithmeticError);

  m.def("factor_coeff", &FactorCoeff, py::arg("k"),
        "f(k) = binom(2k, k) / 4^k.");
  m.def(
      "counting_coeffs",
      [](int64_t dim) {
        const FactorCoeffs c = FactorCoeffs::Build(dim);
        return std::vector<double>(c.coeffs().begin(), c.coeffs().end());
      },
      py::arg("dim"), "f(0), ..., f(dim - 1).");
  m.def(
      "counting_factor_dense",
      [](int64_t dim) {
        const FactorCoeffs c = CountingFactor(dim);
        Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
        for (int64_t i = 1; i <= dim; ++i) {
          for (int64_t j = 1; j <= i; ++j) out(i - 1, j - 1) = c.Entry(i, j);
        }
        return out;
      },
      py::arg("dim"), "Dense L = R with entries f(i - j).");
  m.def(
      "reconstruct_product",
      [](int64_t dim) {
        return ReconstructProduct(FactorCoeffs::Build(dim), dim);
      },
      py::arg("dim"), "Dense L R for the counting factor.");
  m.def(
      "averaging_factor",
      [](int64_t dim) { return AveragingFactor(dim).ToDense(); },
      py::arg("dim"), "Dense square root R of M_average (R R = M_average).");
  m.def(
      "workload",
      [](const std::string& kind, int64_t dim) {
        const WorkloadKind k =
            kind == "average" ? WorkloadKind::kAverage : WorkloadKind::kCount;
        if (kind != "average" && kind != "count") {
          throw std::invalid_argument("kind must be count or average");
        }
        return WorkloadMatrix(k, dim).ToDense();
      },
      py::arg("kind"), py::arg("dim"));

  m.def(
      "gaussian_constant",
      [](double epsilon, double delta) {
        return GaussianConstant(PrivacyBudget(epsilon, delta));
      },
      py::arg("epsilon"), py::arg("delta"));
  m.def(
      "error_bound_counting",
      [](int64_t t, int64_t T, double epsilon, double delta, bool exact) {
        return ErrorBoundCounting(
            t, T, PrivacyBudget(epsilon, delta),
            exact ? BoundVariant::kExact : BoundVariant::kAnalytic);
      },
      py::arg("t"), py::arg("T"), py::arg("epsilon"), py::arg("delta"),
      py::arg("exact") = false);
  m.def(
      "error_bound_average",
      [](int64_t t, int64_t T, double epsilon, double delta) {
        return ErrorBoundAverage(t, T, PrivacyBudget(epsilon, delta));
      },
      py::arg("t"), py::arg("T"), py::arg("epsilon"), py::arg("delta"));
  m.def("counting_norm_bound", &CountingNormBound, py::arg("T"));
  m.def("averaging_norm_bound", &AveragingNormBound, py::arg("T"));
  m.def("gamma_hat", &GammaHat, py::arg("T"));
  m.def(
      "mathias_bounds",
      [](int64_t T) {
        const BoundReport r = MathiasBounds(T);
        py::dict d;
        d["T"] = r.T;
        d["ours_upper"] = r.ours_upper;
        d["gamma_hat"] = r.gamma_hat;
        d["mathias_lower"] = r.mathias_lower;
        d["mathias_upper"] = r.mathias_upper;
        d["exact_norm_product"] = r.exact_norm_product;
        return d;
      },
      py::arg("T"));
  m.def(
      "partial_zeta_bounds",
      [](int64_t T) {
        const ZetaSandwich z = PartialZetaBounds(T);
        return py::make_tuple(z.lower, z.exact, z.upper);
      },
      py::arg("T"), "(lower, exact, upper).");

  py::class_<FactorizationCounter>(m, "FactorizationCounter")
      .def(py::init([](int64_t T, double epsilon, double delta,
                       const std::string& mode, uint64_t seed,
                       bool sigma_zero) {
             return FactorizationCounter(
                 MakePlan(epsilon, delta, T, mode, seed, sigma_zero), nullptr,
                 0, InputDomain::kUnitInterval);
           }),
           py::arg("T"), py::arg("epsilon") = 0.8, py::arg("delta") = 1e-10,
           py::arg("mode") = "horizon", py::arg("seed") = 0,
           py::arg("sigma_zero") = false)
      .def("step", &FactorizationCounter::Step, py::arg("x"))
      .def_property_readonly("t", &FactorizationCounter::t)
      .def_property_readonly("true_sum", &FactorizationCounter::true_sum)
      .def("sigma", &FactorizationCounter::Sigma, py::arg("t"));

  py::class_<RunningAverage>(m, "RunningAverage")
      .def(py::init([](int64_t T, double epsilon, double delta,
                       const std::string& mode, uint64_t seed,
                       bool sigma_zero, const std::string& calibration) {
             NoisePlan plan =
                 MakePlan(epsilon, delta, T, mode, seed, sigma_zero);
             plan.sensitivity =
                 Sensitivity::Average(ParseAverageCalibration(calibration));
             return std::make_unique<RunningAverage>(
                 plan, nullptr, 0, InputDomain::kUnitInterval);
           }),
           py::arg("T"), py::arg("epsilon") = 0.8, py::arg("delta") = 1e-10,
           py::arg("mode") = "horizon", py::arg("seed") = 0,
           py::arg("sigma_zero") = false, py::arg("calibration") = "mean")
      .def("step", &RunningAverage::Step, py::arg("x"))
      .def_property_readonly("t", &RunningAverage::t)
      .def_property_readonly("true_mean", &RunningAverage::true_mean);

  py::class_<BinaryTreeCounter>(m, "BinaryTreeCounter")
      .def(py::init([](int64_t T, double epsilon, double delta, uint64_t seed,
                       bool sigma_zero) {
             return BinaryTreeCounter(
                 MakePlan(epsilon, delta, T, "horizon", seed, sigma_zero), 0,
                 InputDomain::kUnitInterval);
           }),
           py::arg("T"), py::arg("epsilon") = 0.8, py::arg("delta") = 1e-10,
           py::arg("seed") = 0, py::arg("sigma_zero") = false)
      .def("step", &BinaryTreeCounter::Step, py::arg("x"))
      .def_property_readonly("height", &BinaryTreeCounter::height)
      .def_property_readonly("true_sum", &BinaryTreeCounter::true_sum);

  m.def(
      "local_learning_bound",
      [](int64_t clients, double epsilon, double delta) {
        return LocalLearningBound(clients, PrivacyBudget(epsilon, delta));
      },
      py::arg("clients"), py::arg("epsilon"), py::arg("delta"));

  m.def(
      "run_experiment",
      [](const std::string& task, int64_t T, double epsilon, double delta,
         uint64_t seed, int trials, const std::string& mechanism,
         const std::string& mode, bool sigma_zero) {
        const ExperimentConfig c = MakeConfig(task, T, epsilon, delta, seed,
                                              trials, mechanism, mode,
                                              sigma_zero);
        std::ostringstream out;
        WriteSummaryCsv(out, c, RunExperiment(c));
        return out.str();
      },
      py::arg("task"), py::arg("T"), py::arg("epsilon") = 0.8,
      py::arg("delta") = 1e-10, py::arg("seed") = 0, py::arg("trials") = 1,
      py::arg("mechanism") = "factorization", py::arg("mode") = "horizon",
      py::arg("sigma_zero") = false,
      "Runs the trials and returns the summary CSV text.");
  m.def(
      "bounds_table",
      [](const std::vector<int64_t>& T_list) {
        ExperimentConfig c;
        c.task = Task::kBounds;
        c.T_list = T_list;
        std::ostringstream out;
        WriteBoundsCsv(out, c, BoundsTable(T_list));
        return out.str();
      },
      py::arg("T_list"), "Mathias bound table as CSV text.");
}
