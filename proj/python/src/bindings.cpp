// Copyright 2026 The adiabopt Authors
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
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "adiabopt/dynamics.hpp"
#include "adiabopt/error.hpp"
#include "adiabopt/fidelity.hpp"
#include "adiabopt/krotov.hpp"
#include "adiabopt/linalg.hpp"
#include "adiabopt/model.hpp"
#include "adiabopt/scenario.hpp"

namespace py = pybind11;
using namespace adiabopt;

namespace {

using RealMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using release_gil = py::call_guard<py::gil_scoped_release>;

// Controls cross the boundary as an (n_controls, n_steps) float array.
ControlSet to_controls(const RealMatrix& a) {
  ControlSet c(static_cast<int>(a.rows()), static_cast<int>(a.cols()));
  for (Eigen::Index k = 0; k < a.rows(); ++k) {
    for (Eigen::Index n = 0; n < a.cols(); ++n) c(static_cast<int>(k), static_cast<int>(n)) = a(k, n);
  }
  return c;
}

RealMatrix from_controls(const ControlSet& c) {
  RealMatrix a(c.n_controls(), c.n_steps());
  for (int k = 0; k < c.n_controls(); ++k) {
    for (int n = 0; n < c.n_steps(); ++n) a(k, n) = c(k, n);
  }
  return a;
}

std::vector<ComplexMatrix> matrices(const Trajectory& traj) {
  std::vector<ComplexMatrix> out;
  out.reserve(traj.states.size());
  for (const DensityMatrix& rho : traj.states) out.push_back(rho.matrix());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Lindblad simulation and Krotov optimization of adiabatic entanglement and teleportation protocols";

  // Messages start with the error kind, e.g. "ConfigError: ...".
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  py::enum_<Pauli>(m, "Pauli")
      .value("X", Pauli::X)
      .value("Y", Pauli::Y)
      .value("Z", Pauli::Z)
      .value("Minus", Pauli::Minus);
  py::enum_<NoiseKind>(m, "NoiseKind")
      .value("Dephasing", NoiseKind::Dephasing)
      .value("AmplitudeDamping", NoiseKind::AmplitudeDamping);
  py::enum_<UpdateShape>(m, "UpdateShape")
      .value("Flat", UpdateShape::Flat)
      .value("SinSquared", UpdateShape::SinSquared);
  py::enum_<OptimizationMode>(m, "OptimizationMode")
      .value("Unitary", OptimizationMode::Unitary)
      .value("NonUnitary", OptimizationMode::NonUnitary);
  py::enum_<ProtocolKind>(m, "ProtocolKind")
      .value("Aep", ProtocolKind::Aep)
      .value("Atp2", ProtocolKind::Atp2)
      .value("Atp3", ProtocolKind::Atp3);

  // Linear algebra.
  m.def("kron", &kron, py::arg("a"), py::arg("b"));
  m.def("hermitian_eig", [](const ComplexMatrix& a) {
    const EigenDecomposition e = hermitian_eig(a);
    return py::make_tuple(e.eigenvalues, e.eigenvectors);
  }, py::arg("m"), "Eigenvalues (ascending) and eigenvector columns of a Hermitian matrix.");
  m.def("matrix_exp", &matrix_exp, py::arg("m"));
  m.def("hermitian_sqrt", &hermitian_sqrt, py::arg("m"));

  // Model.
  m.def("pauli", &pauli, py::arg("direction"));
  m.def("embed", &embed, py::arg("op"), py::arg("qubit"), py::arg("n_qubits"));

  py::class_<LocalField>(m, "LocalField")
      .def(py::init([](Pauli direction, int qubit) { return LocalField{direction, qubit}; }), py::arg("direction"),
           py::arg("qubit"))
      .def_readwrite("direction", &LocalField::direction)
      .def_readwrite("qubit", &LocalField::qubit)
      .def_property_readonly("label", &LocalField::label)
      .def("__eq__", [](const LocalField& a, const LocalField& b) { return a == b; })
      .def("__repr__", [](const LocalField& f) { return "LocalField('" + f.label() + "')"; });
  m.def("parse_local_field", &parse_local_field, py::arg("text"));
  m.def("all_local_fields", &all_local_fields);

  py::class_<ProtocolSpec>(m, "ProtocolSpec")
      .def_readonly("n_qubits", &ProtocolSpec::n_qubits)
      .def_readonly("hamiltonians", &ProtocolSpec::hamiltonians)
      .def_property_readonly("initial", [](const ProtocolSpec& s) { return s.initial.matrix(); })
      .def_property_readonly("target", [](const ProtocolSpec& s) { return s.target.matrix(); })
      .def_readonly("label", &ProtocolSpec::label)
      .def_property_readonly("dim", &ProtocolSpec::dim)
      .def_property_readonly("n_controls", &ProtocolSpec::n_controls);
  m.def("build_aep", &build_aep);
  m.def("build_atp", &build_atp, py::arg("local_field") = std::nullopt);
  m.def("bell_state", [] { return bell_state().amplitudes(); });

  py::class_<NoiseChannel>(m, "NoiseChannel")
      .def_readonly("kind", &NoiseChannel::kind)
      .def_readonly("lindblad_ops", &NoiseChannel::lindblad_ops)
      .def_readonly("rates", &NoiseChannel::rates)
      .def("is_silent", &NoiseChannel::is_silent)
      .def("silenced", &NoiseChannel::silenced);
  m.def("build_channel", &build_channel, py::arg("kind"), py::arg("n_qubits"), py::arg("gamma"));

  // Dynamics.
  py::class_<TimeGrid>(m, "TimeGrid")
      .def(py::init<double, int>(), py::arg("horizon"), py::arg("n_steps"))
      .def_property_readonly("horizon", &TimeGrid::horizon)
      .def_property_readonly("n_steps", &TimeGrid::n_steps)
      .def_property_readonly("dt", &TimeGrid::dt)
      .def("time", &TimeGrid::time, py::arg("n"));

  m.def("liouvillian", &liouvillian, py::arg("h"), py::arg("channel"));
  m.def(
      "propagate",
      [](const ProtocolSpec& spec, const RealMatrix& controls, const TimeGrid& grid, const NoiseChannel& channel) {
        return matrices(propagate(spec.initial, spec, to_controls(controls), grid, channel));
      },
      py::arg("spec"), py::arg("controls"), py::arg("grid"), py::arg("channel"), release_gil(),
      "Density matrices at every grid point, starting from spec.initial.");
  m.def(
      "populations",
      [](const ProtocolSpec& spec, const RealMatrix& controls, const TimeGrid& grid, const NoiseChannel& channel) {
        return Eigen::MatrixXd(propagate(spec.initial, spec, to_controls(controls), grid, channel).populations());
      },
      py::arg("spec"), py::arg("controls"), py::arg("grid"), py::arg("channel"), release_gil(),
      "Basis-state populations, one row per grid point.");
  m.def(
      "dynamical_map",
      [](const ProtocolSpec& spec, const RealMatrix& controls, const TimeGrid& grid, const NoiseChannel& channel) {
        return dynamical_map(spec, to_controls(controls), grid, channel);
      },
      py::arg("spec"), py::arg("controls"), py::arg("grid"), py::arg("channel"), release_gil());
  m.def("basis_index", &basis_index, py::arg("label"), py::arg("n_qubits"));
  m.def("basis_label", &basis_label, py::arg("index"), py::arg("n_qubits"));

  // Fidelity.
  m.def(
      "uhlmann_fidelity",
      [](const ComplexMatrix& rho, const ComplexMatrix& chi) {
        return uhlmann_fidelity(DensityMatrix(rho), DensityMatrix(chi));
      },
      py::arg("rho"), py::arg("chi"));
  m.def("swap_operator", &swap_operator, py::arg("q_a"), py::arg("q_b"), py::arg("n_qubits"));
  m.def(
      "mean_teleport_fidelity",
      [](const ProtocolSpec& spec, const RealMatrix& controls, const TimeGrid& grid, const NoiseChannel& channel,
         int n_samples, std::uint64_t seed) {
        return mean_teleport_fidelity(spec, to_controls(controls), grid, channel, n_samples, seed);
      },
      py::arg("spec"), py::arg("controls"), py::arg("grid"), py::arg("channel"), py::arg("n_samples"),
      py::arg("seed"), release_gil());

  // Krotov.
  py::class_<KrotovOptions>(m, "KrotovOptions")
      .def(py::init<>())
      .def_readwrite("lambda_", &KrotovOptions::lambda)
      .def_readwrite("shape", &KrotovOptions::shape)
      .def_readwrite("max_iters", &KrotovOptions::max_iters)
      .def_readwrite("objective_tol", &KrotovOptions::objective_tol)
      .def_readwrite("amplitude_bound", &KrotovOptions::amplitude_bound)
      .def_readwrite("mode", &KrotovOptions::mode);

  py::class_<OptimizationResult>(m, "OptimizationResult")
      .def_property_readonly("controls", [](const OptimizationResult& r) { return from_controls(r.controls); })
      .def_readonly("objective_trace", &OptimizationResult::objective_trace)
      .def_readonly("final_fidelity", &OptimizationResult::final_fidelity)
      .def_readonly("iterations_used", &OptimizationResult::iterations_used)
      .def_readonly("converged", &OptimizationResult::converged);

  m.def("initial_guess", [](const TimeGrid& grid, int n_controls) {
    return from_controls(initial_guess(grid, n_controls));
  }, py::arg("grid"), py::arg("n_controls"));
  m.def(
      "optimize",
      [](const ProtocolSpec& spec, const NoiseChannel& channel, const TimeGrid& grid, const KrotovOptions& options,
         const std::optional<RealMatrix>& guess) {
        if (guess) return optimize(spec, channel, grid, options, to_controls(*guess));
        return optimize(spec, channel, grid, options);
      },
      py::arg("spec"), py::arg("channel"), py::arg("grid"), py::arg("options"), py::arg("guess") = std::nullopt,
      release_gil());

  // Scenarios.
  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def_readwrite("protocol", &ScenarioConfig::protocol)
      .def_readwrite("local_field", &ScenarioConfig::local_field)
      .def_readwrite("noise", &ScenarioConfig::noise)
      .def_readwrite("gamma_values", &ScenarioConfig::gamma_values)
      .def_readwrite("horizon", &ScenarioConfig::horizon)
      .def_readwrite("n_steps", &ScenarioConfig::n_steps)
      .def_readwrite("lambda_", &ScenarioConfig::lambda)
      .def_readwrite("shape", &ScenarioConfig::shape)
      .def_readwrite("max_iters", &ScenarioConfig::max_iters)
      .def_readwrite("objective_tol", &ScenarioConfig::objective_tol)
      .def_readwrite("amplitude_bound", &ScenarioConfig::amplitude_bound)
      .def_readwrite("extra_field_guess", &ScenarioConfig::extra_field_guess)
      .def_readwrite("seed", &ScenarioConfig::seed)
      .def_readwrite("samples", &ScenarioConfig::samples)
      .def_readwrite("unitary_only", &ScenarioConfig::unitary_only)
      .def_readwrite("output_dir", &ScenarioConfig::output_dir)
      .def("validate", &ScenarioConfig::validate)
      .def("protocol_spec", &ScenarioConfig::protocol_spec)
      .def("grid", &ScenarioConfig::grid)
      .def("channel", &ScenarioConfig::channel, py::arg("gamma"))
      .def("krotov_options", &ScenarioConfig::krotov_options, py::arg("mode"))
      .def("initial_controls", [](const ScenarioConfig& c) { return from_controls(c.initial_controls()); })
      .def("canonical", &ScenarioConfig::canonical)
      .def("hash", &ScenarioConfig::hash)
      .def("tag", &ScenarioConfig::tag);
  m.def("default_config", &default_config, py::arg("protocol"));
  m.def("load_config", &load_config, py::arg("path"));
  m.def(
      "parse_config",
      [](const std::string& text) {
        std::istringstream in(text);
        return parse_config(in);
      },
      py::arg("text"));

  py::class_<SweepRecord>(m, "SweepRecord")
      .def_readonly("gamma", &SweepRecord::gamma)
      .def_readonly("fidelity_unitary_opt", &SweepRecord::fidelity_unitary_opt)
      .def_readonly("fidelity_nonunitary_opt", &SweepRecord::fidelity_nonunitary_opt)
      .def_readonly("iterations_unitary", &SweepRecord::iterations_unitary)
      .def_readonly("iterations_nonunitary", &SweepRecord::iterations_nonunitary)
      .def_readonly("converged", &SweepRecord::converged);
  py::class_<LocalFieldRecord>(m, "LocalFieldRecord")
      .def_readonly("field", &LocalFieldRecord::field)
      .def_readonly("fidelity", &LocalFieldRecord::fidelity)
      .def_readonly("iterations", &LocalFieldRecord::iterations)
      .def_readonly("converged", &LocalFieldRecord::converged);
  py::class_<PopulationRecord>(m, "PopulationRecord")
      .def_readonly("gamma", &PopulationRecord::gamma)
      .def_readonly("mode", &PopulationRecord::mode)
      .def_readonly("t_over_t", &PopulationRecord::t_over_t)
      .def_readonly("labels", &PopulationRecord::labels)
      .def_readonly("series", &PopulationRecord::series)
      .def_property_readonly("controls", [](const PopulationRecord& r) { return from_controls(r.controls); })
      .def_readonly("optimization", &PopulationRecord::optimization);
  py::class_<MeanFidelityRecord>(m, "MeanFidelityRecord")
      .def_readonly("gamma", &MeanFidelityRecord::gamma)
      .def_readonly("mean_fidelity", &MeanFidelityRecord::mean_fidelity)
      .def_readonly("baseline_mean", &MeanFidelityRecord::baseline_mean)
      .def_readonly("relative_gain", &MeanFidelityRecord::relative_gain)
      .def_readonly("converged", &MeanFidelityRecord::converged);

  m.def("run_sweep", [](const ScenarioConfig& c) { return run_sweep(c).records; }, py::arg("config"),
        release_gil());
  m.def("run_local_field_scan", &run_local_field_scan, py::arg("config"), py::arg("gamma"), release_gil());
  m.def("run_populations", &run_populations, py::arg("config"), py::arg("gamma"), release_gil());
  m.def("run_mean_fidelity", &run_mean_fidelity, py::arg("config"), py::arg("n_samples"), release_gil());

  m.def("sweep_csv", &sweep_csv, py::arg("config"), py::arg("records"));
  m.def("local_field_csv", &local_field_csv, py::arg("config"), py::arg("gamma"), py::arg("records"));
  m.def("populations_csv", &populations_csv, py::arg("config"), py::arg("record"));
  m.def("mean_fidelity_csv", &mean_fidelity_csv, py::arg("config"), py::arg("n_samples"), py::arg("records"));
}
