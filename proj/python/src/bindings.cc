// Copyright 2026 The chicat Authors
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

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <numbers>
#include <string>
#include <vector>

#include "chicat/chi_io.h"
#include "chicat/circuit.h"
#include "chicat/cli.h"
#include "chicat/errors.h"
#include "chicat/mcwf.h"
#include "chicat/process_matrix.h"
#include "chicat/rydberg.h"

namespace py = pybind11;
using namespace chicat;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using CArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

ComplexMatrix to_matrix(const CArray& a) {
  if (a.ndim() != 2) throw std::invalid_argument("expected a 2-d array");
  const auto r = static_cast<std::size_t>(a.shape(0)), c = static_cast<std::size_t>(a.shape(1));
  return ComplexMatrix(r, c, std::vector<Complex>(a.data(), a.data() + r * c));
}

CArray to_array(const ComplexMatrix& m) {
  CArray out({m.rows(), m.cols()});
  std::copy(m.entries().begin(), m.entries().end(), out.mutable_data());
  return out;
}

OperatorBasis make_basis(const std::vector<std::size_t>& shape, const std::string& kind) {
  return OperatorBasis(SubsystemShape(shape), basis_kind_from_string(kind));
}

RegisterModel make_register(std::size_t n_atoms, const std::map<std::string, double>& params_hz,
                            const std::string& scheme, const std::string& blockade_mode, bool closed) {
  RegisterModel reg;
  reg.n_atoms = n_atoms;
  reg.scheme.kind = scheme_kind_from_string(scheme);
  reg.params = AtomParams::table1().with_hz(params_hz);
  if (blockade_mode != "finite" && blockade_mode != "infinite") {
    throw ConfigError("blockade_mode must be 'finite' or 'infinite'");
  }
  reg.blockade_mode = blockade_mode == "finite" ? BlockadeMode::kFinite : BlockadeMode::kInfinite;
  return closed ? reg.closed() : reg;
}

py::dict simulate_gate(const std::string& gate, const std::map<std::string, double>& params_hz, std::size_t n_traj,
                       std::uint64_t seed, const std::string& scheme, const std::string& blockade_mode, bool closed) {
  std::size_t controls = 0;
  if (gate == "CNOT") {
    controls = 1;
  } else if (gate == "C2NOT") {
    controls = 2;
  } else {
    throw ConfigError("gate must be 'CNOT' or 'C2NOT'");
  }
  const RegisterModel reg = make_register(controls + 1, params_hz, scheme, blockade_mode, closed);
  TrajectoryConfig cfg;
  cfg.n_traj = n_traj;
  cfg.base_seed = seed;
  std::vector<std::size_t> c(controls);
  for (std::size_t i = 0; i < controls; ++i) c[i] = i;
  SimulationResult sim;
  {
    py::gil_scoped_release release;
    sim = simulate_schedule(build_cknot_sequence(reg, c, controls), reg, cfg);
  }
  const ProcessMatrix ideal = controls == 1 ? exact_gate_library().at("CNOT") : toffoli_chi();
  py::dict out;
  out["chi"] = sim.chi;
  out["trace_distance"] = trace_distance(sim.chi, ideal);
  out["leakage"] = sim.leakage;
  out["pulses"] = sim.pulses;
  out["no_jump_fraction"] = sim.ensemble.no_jump_fraction;
  out["bound_nojump"] = sim.no_jump.bound;
  out["nojump_distance"] = sim.no_jump_distance;
  return out;
}

int cli_main(std::vector<std::string> args) {
  args.insert(args.begin(), "chicat");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  py::gil_scoped_release release;
  return cli::main_entry(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

PYBIND11_MODULE(_chicat, m) {
  m.doc() = "Process matrices of Rydberg-blockade gates from quantum trajectories";

  py::register_exception<DimensionError>(m, "DimensionError");
  py::register_exception<NumericalError>(m, "NumericalError");
  py::register_exception<SchemaError>(m, "SchemaError");
  py::register_exception<ConfigError>(m, "ConfigError");

  py::class_<ProcessMatrix>(m, "ProcessMatrix")
      .def_property_readonly("chi", [](const ProcessMatrix& p) { return to_array(p.chi()); })
      .def_property_readonly("dim", &ProcessMatrix::dim)
      .def_property_readonly("shape", [](const ProcessMatrix& p) { return p.basis().shape().dims(); })
      .def_property_readonly("basis_kind", [](const ProcessMatrix& p) { return std::string(to_string(p.basis().kind())); })
      .def_property_readonly("trace_preserving", &ProcessMatrix::trace_preserving)
      .def_property_readonly("metadata", [](const ProcessMatrix& p) { return p.metadata(); })
      .def("trace", &ProcessMatrix::trace)
      .def("min_eigenvalue", &ProcessMatrix::min_eigenvalue)
      .def("in_basis", [](const ProcessMatrix& p, const std::string& kind) { return p.in_basis(basis_kind_from_string(kind)); })
      .def("__repr__", [](const ProcessMatrix& p) {
        return "<ProcessMatrix D=" + std::to_string(p.dim()) + " basis=" + to_string(p.basis().kind()) + ">";
      });

  m.def(
      "chi_from_kraus",
      [](const std::vector<CArray>& kraus, const std::vector<std::size_t>& shape, const std::string& basis) {
        std::vector<ComplexMatrix> ks;
        for (const auto& k : kraus) ks.push_back(to_matrix(k));
        return chi_from_kraus(ks, make_basis(shape, basis));
      },
      py::arg("kraus"), py::arg("shape"), py::arg("basis") = "matrix-unit");
  m.def(
      "chi_from_unitary",
      [](const CArray& u, const std::vector<std::size_t>& shape, const std::string& basis) {
        return chi_from_unitary(to_matrix(u), make_basis(shape, basis));
      },
      py::arg("u"), py::arg("shape"), py::arg("basis") = "matrix-unit");
  m.def(
      "identity_chi",
      [](const std::vector<std::size_t>& shape, const std::string& basis) { return identity_chi(make_basis(shape, basis)); },
      py::arg("shape"), py::arg("basis") = "matrix-unit");

  m.def("serial_concat", &serial_concat, py::arg("first"), py::arg("second"));
  m.def(
      "serial_concat_structure",
      [](const ProcessMatrix& a, const ProcessMatrix& b) {
        return serial_concat_structure(a, b, structure_constants(a.basis()));
      },
      py::arg("first"), py::arg("second"));
  m.def("parallel_concat", py::overload_cast<const ProcessMatrix&, const ProcessMatrix&>(&parallel_concat));
  m.def(
      "embed",
      [](const ProcessMatrix& p, const std::vector<std::size_t>& reg, const std::vector<std::size_t>& positions) {
        return embed(p, SubsystemShape(reg), positions);
      },
      py::arg("chi"), py::arg("register_shape"), py::arg("positions"));
  m.def("trace_distance", &trace_distance);
  m.def("to_choi", [](const ProcessMatrix& p) { return to_array(to_choi(p)); });
  m.def("to_superoperator", [](const ProcessMatrix& p) { return to_array(to_superoperator(p)); });
  m.def(
      "from_choi",
      [](const CArray& j, const std::vector<std::size_t>& shape, const std::string& basis) {
        return from_choi(to_matrix(j), make_basis(shape, basis));
      },
      py::arg("choi"), py::arg("shape"), py::arg("basis") = "matrix-unit");
  m.def("project_to_qubit_subspace", [](const ProcessMatrix& p) {
    QubitProjection q = project_to_qubit_subspace(p);
    return py::make_tuple(q.chi, q.leakage);
  });

  m.def("chi_to_json", &chi_to_json);
  m.def("chi_from_json", &chi_from_json);
  m.def("save_chi", &save_chi);
  m.def("load_chi", &load_chi);

  m.def("table1_hz", [] { return AtomParams::table1().to_hz(); });
  m.def(
      "effective_rabi_hz",
      [](const std::map<std::string, double>& params_hz) {
        return adiabatic_eliminate(AtomParams::table1().with_hz(params_hz)).omega_eff / kTwoPi;
      },
      py::arg("params_hz") = std::map<std::string, double>{});
  m.def("simulate_gate", &simulate_gate, py::arg("gate") = "CNOT",
        py::arg("params_hz") = std::map<std::string, double>{}, py::arg("n_traj") = 500, py::arg("seed") = 1,
        py::arg("scheme") = "effective-3", py::arg("blockade_mode") = "finite", py::arg("closed") = false);

  m.def("toffoli_chi", &toffoli_chi);
  m.def("exact_gate_library", &exact_gate_library);
  m.def(
      "concat_toffoli",
      [](const GateLibrary& overrides) {
        GateLibrary lib = exact_gate_library();
        for (const auto& [k, v] : overrides) lib.insert_or_assign(k, v);
        return chi_via_concatenation(toffoli_circuit(), lib);
      },
      py::arg("library") = GateLibrary{});
  m.def(
      "compare_implementations",
      [](const std::vector<double>& grid_hz, std::size_t n_traj, std::uint64_t seed, bool run_circuit,
         bool run_c2not) {
        std::vector<double> grid;
        for (double hz : grid_hz) grid.push_back(hz * kTwoPi);
        RegisterModel base;
        base.params = AtomParams::table1();
        TrajectoryConfig cfg;
        cfg.n_traj = n_traj;
        cfg.base_seed = seed;
        ComparisonOptions opts;
        opts.jackknife_groups = std::min<std::size_t>(20, n_traj);
        opts.run_circuit = run_circuit;
        opts.run_c2not = run_c2not;
        py::gil_scoped_release release;
        return compare_implementations(grid, base, cfg, opts).to_csv();
      },
      py::arg("grid_hz"), py::arg("n_traj") = 500, py::arg("seed") = 1, py::arg("run_circuit") = true,
      py::arg("run_c2not") = true);

  m.def("cli_main", &cli_main, py::arg("args"),
        "Runs the command line front end in-process and returns its exit code.");
}
