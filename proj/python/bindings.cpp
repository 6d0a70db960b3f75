#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "essc/datagen.hpp"
#include "essc/essc.hpp"
#include "essc/harness.hpp"
#include "essc/metrics.hpp"
#include "essc/screening.hpp"

namespace py = pybind11;

namespace {

essc::DataMatrix to_data(const Eigen::MatrixXd& X) { return essc::DataMatrix{X}; }

const char* branch_name(essc::Branch b) {
  switch (b) {
    case essc::Branch::Both: return "BOTH";
    case essc::Branch::First: return "FIRST";
    case essc::Branch::Second: return "SECOND";
  }
  return "?";
}

}  // namespace

PYBIND11_MODULE(_essc, m) {
  m.doc() = "eigen-selected spectral clustering core";

  m.def("version", &essc::version_string);

  m.def(
      "top2_singular",
      [](const Eigen::MatrixXd& X) {
        const essc::SpectralSummary s = essc::top2_singular(to_data(X));
        return py::make_tuple(s.t1, s.t2, s.u1, s.u2, s.fstat);
      },
      py::arg("X"),
      "Top-two singular values/right vectors and the flatness statistic of a "
      "p x n data matrix (columns are samples). Returns (t1, t2, u1, u2, fstat).");

  m.def(
      "essc_cluster",
      [](const Eigen::MatrixXd& X, std::uint64_t seed, py::object tau, py::object delta) {
        std::optional<essc::ThresholdSchedule> th;
        if (!tau.is_none() && !delta.is_none()) {
          th = essc::ThresholdSchedule{tau.cast<double>(), delta.cast<double>()};
        }
        const essc::ClusterResult r =
            essc::essc_cluster(to_data(X), th, essc::KMeansConfig{}, seed);
        py::dict d;
        d["assignment"] = r.assignment;
        d["objective"] = r.objective;
        d["branch"] = branch_name(*r.branch);
        return d;
      },
      py::arg("X"), py::arg("seed") = 0, py::arg("tau") = py::none(),
      py::arg("delta") = py::none(),
      "Run the full eigenvector-selection clustering pipeline on a p x n matrix.");

  m.def(
      "default_thresholds",
      [](int n, int p) {
        const essc::ThresholdSchedule t = essc::default_thresholds(n, p);
        return py::make_tuple(t.tau, t.delta);
      },
      py::arg("n"), py::arg("p"), "(tau, delta) = (1/ln(n+p), 1/ln^2(n+p)).");

  m.def("misclustering_rate", &essc::misclustering_rate, py::arg("pred"), py::arg("truth"),
        "Fraction of disagreements minimized over the global label swap.");

  m.def(
      "sample_model",
      [](int id, int sweep_value, std::uint64_t seed) {
        const essc::Dataset d = essc::sample_dataset(essc::model_preset(id, sweep_value), seed);
        return py::make_tuple(d.X.values, d.truth);
      },
      py::arg("model"), py::arg("sweep_value"), py::arg("seed") = 0,
      "Sample one of the five simulation presets; returns (X, truth).");

  m.def(
      "ks_select",
      [](const Eigen::MatrixXd& X, int keep) {
        const essc::ScreeningResult r = essc::select_top(to_data(X), keep);
        return py::make_tuple(r.kept_indices, r.reduced.values);
      },
      py::arg("X"), py::arg("keep"),
      "Keep the `keep` features with the largest normalized KS scores; "
      "returns (kept_indices, reduced_matrix).");
}
