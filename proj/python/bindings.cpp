#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "weakmeas/analysis.hpp"
#include "weakmeas/error.hpp"
#include "weakmeas/estimate.hpp"
#include "weakmeas/hilbert.hpp"
#include "weakmeas/measurement.hpp"
#include "weakmeas/problem.hpp"
#include "weakmeas/report.hpp"

namespace py = pybind11;
using namespace weakmeas;

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

RowMatrix grid(const JointDistribution& d) {
  return Eigen::Map<const RowMatrix>(d.entries.data(), static_cast<Eigen::Index>(d.n_outcomes),
                                     static_cast<Eigen::Index>(d.n_basis));
}

std::string run_command(const std::string& command, const std::string& document, double tolerance,
                        double theta_start, double theta_end, int points) {
  CommandOptions options;
  options.tol.structural = tolerance;
  const ProblemSpec problem = parse_problem(document, options.tol);
  nlohmann::ordered_json report;
  if (command == "weak-values") {
    report = cmd_weak_values(problem, options);
  } else if (command == "fisher") {
    report = cmd_fisher(problem, options);
  } else if (command == "simulate") {
    try {
      report = cmd_simulate(problem, options);
    } catch (const NumericFailure& e) {
      report = e.report();
    }
  } else if (command == "scan") {
    report = cmd_scan(problem, ScanOptions{theta_start, theta_end, points}, options);
  } else {
    throw py::value_error("unknown command '" + command + "'");
  }
  return report.dump();
}

}  // namespace

PYBIND11_MODULE(_weakmeas, m) {
  m.doc() = "Weak values, Fisher information and coupling estimation for weak measurements";

  static py::exception<Error> error(m, "WeakmeasError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    } catch (const InputError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  py::class_<State>(m, "State")
      .def(py::init([](const Vector& amplitudes) { return State::from_amplitudes(amplitudes); }),
           py::arg("amplitudes"))
      .def_static("basis_vector", &State::basis_vector)
      .def_property_readonly("amplitudes", &State::amplitudes)
      .def_property_readonly("dim", &State::dim);

  py::class_<Observable>(m, "Observable")
      .def(py::init([](const Matrix& matrix) { return Observable::from_matrix(matrix); }),
           py::arg("matrix"))
      .def_static("identity", &Observable::identity)
      .def_property_readonly("matrix", &Observable::matrix)
      .def_property_readonly("dim", &Observable::dim)
      .def("spectral_norm", &Observable::spectral_norm);

  py::class_<FinalBasis>(m, "FinalBasis")
      .def(py::init([](std::vector<State> vectors, std::vector<std::string> labels) {
             return FinalBasis::from_states(std::move(vectors), std::move(labels));
           }),
           py::arg("vectors"), py::arg("labels") = std::vector<std::string>{})
      .def_property_readonly("vectors", &FinalBasis::vectors)
      .def_property_readonly("labels", &FinalBasis::labels)
      .def("as_matrix", &FinalBasis::as_matrix)
      .def("__len__", &FinalBasis::size);

  py::class_<MeasurementModel>(m, "MeasurementModel")
      .def(py::init<std::vector<std::string>, std::vector<double>, std::vector<double>>(),
           py::arg("labels"), py::arg("weights"), py::arg("correlations"))
      .def(py::init<const std::vector<double>&, const std::vector<double>&>(), py::arg("weights"),
           py::arg("correlations"))
      .def_static("binary", &MeasurementModel::binary)
      .def_property_readonly("labels", &MeasurementModel::labels)
      .def_property_readonly("weights", &MeasurementModel::weights)
      .def_property_readonly("correlations", &MeasurementModel::correlations);

  py::class_<FisherReport>(m, "FisherReport")
      .def_readonly("labels", &FisherReport::labels)
      .def_readonly("contributions", &FisherReport::contributions)
      .def_readonly("total", &FisherReport::total)
      .def_readonly("delta_eps", &FisherReport::delta_eps)
      .def_readonly("basis_is_real", &FisherReport::basis_is_real)
      .def_readonly("max_abs_weak_value", &FisherReport::max_abs_weak_value);

  py::class_<SampleCounts>(m, "SampleCounts")
      .def_property_readonly("counts",
                             [](const SampleCounts& c) {
                               py::array_t<std::uint64_t> out({c.n_outcomes, c.n_basis});
                               std::copy(c.counts.begin(), c.counts.end(), out.mutable_data());
                               return out;
                             })
      .def_readonly("n_total", &SampleCounts::n_total)
      .def_readonly("seed", &SampleCounts::seed)
      .def_readonly("epsilon_true", &SampleCounts::epsilon_true);

  py::class_<EstimationResult>(m, "EstimationResult")
      .def_readonly("epsilon_hat", &EstimationResult::epsilon_hat)
      .def_readonly("stderr_predicted", &EstimationResult::stderr_predicted)
      .def_readonly("log_likelihood", &EstimationResult::log_likelihood)
      .def_readonly("iterations", &EstimationResult::iterations)
      .def_readonly("converged", &EstimationResult::converged);

  m.def("inner", &inner);
  m.def("normalize", [](const Vector& v) { return normalize(v); });
  m.def("eig_hermitian", [](const Observable& a) {
    Eigensystem e = eig_hermitian(a);
    return py::make_tuple(e.eigenvalues, e.eigenbasis);
  });
  m.def("complete_basis", [](const std::vector<State>& partial, std::size_t dim) {
    return complete_basis(partial, dim);
  });

  m.def("validate_model", [](const MeasurementModel& model) {
    py::dict out;
    for (const auto& c : validate_model(model).checks) {
      out[py::str(c.name)] = py::make_tuple(c.passed, c.residual);
    }
    return out;
  });
  m.def("kraus_operator",
        [](const MeasurementModel& model, const std::string& outcome, const Observable& a, double eps) {
          return kraus_operator(model, std::string_view(outcome), a, Epsilon{eps});
        });
  m.def("joint_prob_linear",
        [](const MeasurementModel& model, const Observable& a, const State& psi,
           const FinalBasis& basis, double eps) {
          const auto d = joint_prob_linear(model, a, psi, basis, Epsilon{eps});
          return py::make_tuple(grid(d), d.warnings);
        });
  m.def("joint_prob_exact", [](const MeasurementModel& model, const Observable& a, const State& psi,
                               const FinalBasis& basis, double eps) {
    return grid(joint_prob_exact(model, a, psi, basis, Epsilon{eps}));
  });
  m.def("log_derivative", [](const MeasurementModel& model, const Observable& a, const State& psi,
                             const State& f, const std::string& outcome) {
    return log_derivative(model, a, psi, f, std::string_view(outcome));
  });

  m.def("weak_value", [](const Observable& a, const State& psi, const State& f) {
    return weak_value(a, psi, f);
  });
  m.def("weak_value_table", [](const Observable& a, const State& psi, const FinalBasis& basis) {
    py::list out;
    for (const auto& e : weak_value_table(a, psi, basis).entries) {
      py::dict row;
      row["label"] = e.label;
      row["post_prob"] = e.post_prob;
      row["weak_value"] = e.defined ? py::cast(e.weak_value) : py::none();
      row["defined"] = e.defined;
      out.append(row);
    }
    return out;
  });
  m.def("fisher_information",
        [](const MeasurementModel& model, const Observable& a, const State& psi,
           const FinalBasis& basis) { return fisher_information(model, a, psi, basis); });
  m.def("fisher_phase", [](const Observable& a, const State& psi, const FinalBasis& basis) {
    return fisher_phase(a, psi, basis);
  });
  m.def("is_real_basis",
        [](const Observable& a, const State& psi, const FinalBasis& basis, double tol) {
          return is_real_basis(a, psi, basis, tol);
        },
        py::arg("a"), py::arg("psi"), py::arg("basis"), py::arg("tol") = 1e-10);
  m.def("max_sensitivity", &max_sensitivity);
  m.def("eigenbasis_strategy", &eigenbasis_strategy);
  m.def("shunted_basis", [](const Observable& a, const State& psi) { return shunted_basis(a, psi); });
  m.def("real_random_basis", [](const Observable& a, const State& psi, std::uint64_t seed) {
    return real_random_basis(a, psi, seed);
  });
  m.def("rotated_qubit_basis", &rotated_qubit_basis);

  m.def("sample_outcomes",
        [](const MeasurementModel& model, const Observable& a, const State& psi,
           const FinalBasis& basis, double eps, std::uint64_t n, std::uint64_t seed) {
          return sample_outcomes(model, a, psi, basis, Epsilon{eps}, n, seed);
        });
  m.def("mle_epsilon", [](const SampleCounts& counts, const MeasurementModel& model,
                          const Observable& a, const State& psi, const FinalBasis& basis) {
    return mle_epsilon(counts, model, a, psi, basis);
  });
  m.def("score_estimate", [](const SampleCounts& counts, const MeasurementModel& model,
                             const Observable& a, const State& psi, const FinalBasis& basis) {
    return score_estimate(counts, model, a, psi, basis);
  });

  m.def("run_command", &run_command, py::arg("command"), py::arg("document"),
        py::arg("tolerance") = 1e-10, py::arg("theta_start") = 0.0, py::arg("theta_end") = 0.0,
        py::arg("points") = 0,
        "Runs a CLI command on a problem document and returns the report as JSON text.");
}
