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

#include "chicat/circuit.h"

#include <algorithm>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "chicat/errors.h"

namespace chicat {

std::string gate_name(GateKind kind, std::size_t arity) {
  switch (kind) {
    case GateKind::kH:
      return "H";
    case GateKind::kT:
      return "T";
    case GateKind::kTdg:
      return "Tdg";
    case GateKind::kX:
      return "X";
    case GateKind::kCNOT:
      return "CNOT";
    case GateKind::kCkNOT:
      return arity == 2 ? "CNOT" : fmt::format("C{}NOT", arity - 1);
  }
  throw std::invalid_argument("unknown gate kind");
}

GateKind gate_kind_from_string(const std::string& name) {
  if (name == "H") return GateKind::kH;
  if (name == "T") return GateKind::kT;
  if (name == "Tdg") return GateKind::kTdg;
  if (name == "X") return GateKind::kX;
  if (name == "CNOT") return GateKind::kCNOT;
  if (name.size() > 4 && name.front() == 'C' && name.ends_with("NOT")) return GateKind::kCkNOT;
  throw std::invalid_argument(fmt::format("unknown gate '{}'", name));
}

Circuit::Circuit(std::size_t n_wires) : n_wires_(n_wires), depth_(n_wires, 0) {
  if (n_wires == 0) throw std::invalid_argument("circuit needs at least one wire");
}

void Circuit::check(const Gate& gate) const {
  const bool controlled = gate.kind == GateKind::kCNOT || gate.kind == GateKind::kCkNOT;
  if (gate.kind == GateKind::kCNOT && gate.arity() != 2) throw std::invalid_argument("CNOT takes two wires");
  if (gate.kind == GateKind::kCkNOT && gate.arity() < 2) throw std::invalid_argument("C_k-NOT takes k + 1 wires");
  if (!controlled && gate.arity() != 1) {
    throw std::invalid_argument(fmt::format("{} takes one wire", gate.name()));
  }
  for (std::size_t i = 0; i < gate.wires.size(); ++i) {
    if (gate.wires[i] >= n_wires_) {
      throw std::invalid_argument(fmt::format("wire {} outside a {}-wire circuit", gate.wires[i], n_wires_));
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (gate.wires[i] == gate.wires[j]) throw std::invalid_argument(fmt::format("wire {} repeated", gate.wires[i]));
    }
  }
}

void Circuit::append(Gate gate) {
  check(gate);
  std::size_t m = 0;
  for (std::size_t w : gate.wires) m = std::max(m, depth_[w]);
  if (m == moments_.size()) moments_.emplace_back();
  for (std::size_t w : gate.wires) depth_[w] = m + 1;
  moments_[m].push_back(std::move(gate));
}

void Circuit::append_moment(std::vector<Gate> gates) {
  std::vector<bool> used(n_wires_, false);
  for (const auto& g : gates) {
    check(g);
    for (std::size_t w : g.wires) {
      if (used[w]) throw std::invalid_argument(fmt::format("moment uses wire {} twice", w));
      used[w] = true;
    }
  }
  for (std::size_t w = 0; w < n_wires_; ++w)
    if (used[w]) depth_[w] = moments_.size() + 1;
  moments_.push_back(std::move(gates));
}

std::vector<Gate> Circuit::gates() const {
  std::vector<Gate> out;
  for (const auto& m : moments_) out.insert(out.end(), m.begin(), m.end());
  return out;
}

std::size_t Circuit::count(GateKind kind) const {
  std::size_t n = 0;
  for (const auto& m : moments_)
    for (const auto& g : m) n += g.kind == kind ? 1 : 0;
  return n;
}

Circuit toffoli_circuit() {
  Circuit c(3);
  auto one = [&](GateKind k, std::size_t w) { c.append({k, {w}}); };
  auto cx = [&](std::size_t a, std::size_t b) { c.append({GateKind::kCNOT, {a, b}}); };
  one(GateKind::kH, 2);
  cx(1, 2);
  one(GateKind::kTdg, 2);
  cx(0, 2);
  one(GateKind::kT, 2);
  cx(1, 2);
  one(GateKind::kTdg, 2);
  cx(0, 2);
  one(GateKind::kT, 1);
  one(GateKind::kT, 2);
  one(GateKind::kH, 2);
  cx(0, 1);
  one(GateKind::kT, 0);
  one(GateKind::kTdg, 1);
  cx(0, 1);
  return c;
}

ComplexMatrix gate_unitary(const Gate& gate, std::size_t n_wires) {
  if (gate.kind == GateKind::kCNOT || gate.kind == GateKind::kCkNOT) {
    return controlled_not(n_wires, std::span(gate.wires).first(gate.arity() - 1), gate.wires.back());
  }
  const ComplexMatrix g = qubit_gate(gate.name());
  const ComplexMatrix id = ComplexMatrix::identity(2);
  ComplexMatrix u = gate.wires[0] == 0 ? g : id;
  for (std::size_t w = 1; w < n_wires; ++w) u = kron(u, w == gate.wires[0] ? g : id);
  return u;
}

ComplexMatrix circuit_unitary(const Circuit& circuit) {
  ComplexMatrix u = ComplexMatrix::identity(std::size_t{1} << circuit.n_wires());
  for (const auto& g : circuit.gates()) u = gate_unitary(g, circuit.n_wires()) * u;
  return u;
}

namespace {

OperatorBasis qubit_basis(std::size_t n) { return OperatorBasis(SubsystemShape::uniform(n, 2), BasisKind::kMatrixUnit); }

ProcessMatrix ideal_gate_chi(const Gate& gate) {
  std::vector<std::size_t> local(gate.arity());
  for (std::size_t k = 0; k < local.size(); ++k) local[k] = k;
  return chi_from_unitary(gate_unitary({gate.kind, local}, gate.arity()), qubit_basis(gate.arity()));
}

const ProcessMatrix& lookup(const GateLibrary& library, const std::string& name, std::size_t arity) {
  const auto it = library.find(name);
  if (it == library.end()) throw std::invalid_argument(fmt::format("gate library has no entry for '{}'", name));
  if (!(it->second.basis().shape() == SubsystemShape::uniform(arity, 2))) {
    throw std::invalid_argument(fmt::format("library entry '{}' does not act on {} qubits", name, arity));
  }
  return it->second;
}

}  // namespace

GateLibrary exact_gate_library() {
  GateLibrary lib;
  for (auto kind : {GateKind::kH, GateKind::kT, GateKind::kTdg, GateKind::kX}) {
    lib.emplace(gate_name(kind, 1), ideal_gate_chi({kind, {0}}));
  }
  lib.emplace("CNOT", ideal_gate_chi({GateKind::kCNOT, {0, 1}}));
  lib.emplace("C2NOT", ideal_gate_chi({GateKind::kCkNOT, {0, 1, 2}}));
  return lib;
}

ProcessMatrix chi_via_concatenation(const Circuit& circuit, const GateLibrary& library, const std::string& name,
                                    const std::vector<ProcessMatrix>& instances) {
  const std::size_t n = circuit.n_wires();
  const SubsystemShape reg = SubsystemShape::uniform(n, 2);
  std::size_t next_instance = 0;
  ProcessMatrix result = identity_chi(qubit_basis(n));
  for (const auto& moment : circuit.moments()) {
    if (moment.empty()) continue;
    std::optional<ProcessMatrix> acc;
    std::vector<std::size_t> wires;
    for (const auto& gate : moment) {
      const ProcessMatrix* chi = nullptr;
      if (!instances.empty() && gate.name() == name) {
        if (next_instance >= instances.size()) {
          throw std::invalid_argument(fmt::format("not enough '{}' instances for the circuit", name));
        }
        chi = &instances[next_instance++];
        if (!(chi->basis().shape() == SubsystemShape::uniform(gate.arity(), 2))) {
          throw std::invalid_argument(fmt::format("'{}' instance does not act on {} qubits", name, gate.arity()));
        }
      } else {
        chi = &lookup(library, gate.name(), gate.arity());
      }
      const ProcessMatrix local =
          chi->basis().kind() == BasisKind::kMatrixUnit ? *chi : chi->in_basis(BasisKind::kMatrixUnit);
      acc = acc ? parallel_concat(*acc, local) : local;
      wires.insert(wires.end(), gate.wires.begin(), gate.wires.end());
    }
    result = serial_concat(result, embed(*acc, reg, wires));
  }
  return result;
}

ProcessMatrix chi_via_concatenation(const Circuit& circuit, const GateLibrary& library) {
  return chi_via_concatenation(circuit, library, "", {});
}

PulseSchedule circuit_schedule(const Circuit& circuit, const RegisterModel& reg) {
  if (reg.n_atoms != circuit.n_wires()) {
    throw std::invalid_argument(fmt::format("circuit has {} wires but the register has {} atoms", circuit.n_wires(),
                                            reg.n_atoms));
  }
  PulseSchedule s(reg.shape());
  for (const auto& g : circuit.gates()) {
    if (g.kind == GateKind::kCNOT || g.kind == GateKind::kCkNOT) {
      s.append(build_cknot_sequence(reg, std::span(g.wires).first(g.arity() - 1), g.wires.back()));
    } else {
      s.add(single_qubit_gate(g.name(), reg, g.wires[0]));
    }
  }
  return s;
}

SimulationResult simulate_schedule(const PulseSchedule& schedule, const RegisterModel& reg,
                                   const TrajectoryConfig& cfg) {
  reg.validate();
  const OperatorBasis basis(reg.shape(), BasisKind::kMatrixUnit);
  const auto jumps = jump_operators(reg);
  ChiEstimate est = estimate_chi(schedule, jumps, basis, cfg);
  QubitProjection proj = project_to_qubit_subspace(est.chi);
  SimulationResult out{std::move(proj.chi), proj.leakage, std::move(est.chi), std::move(est.ensemble),
                       no_jump_estimate(schedule, jumps, basis, cfg)};
  out.no_jump_distance = trace_distance(out.no_jump.chi, out.full_chi);
  out.pulses = schedule.segment_count();
  out.chi.metadata()["pulses"] = std::to_string(out.pulses);
  return out;
}

SimulationResult chi_via_full_simulation(const Circuit& circuit, const RegisterModel& reg,
                                         const TrajectoryConfig& cfg) {
  return simulate_schedule(circuit_schedule(circuit, reg), reg, cfg);
}

std::vector<ProcessMatrix> qubit_chi_replicates(const SimulationResult& sim, std::size_t groups) {
  std::vector<ProcessMatrix> out;
  for (const auto& rho : jackknife_replicates(sim.ensemble, groups)) {
    out.push_back(project_to_qubit_subspace(from_choi(rho, sim.full_chi.basis())).chi);
  }
  return out;
}

ProcessMatrix toffoli_chi() {
  const std::size_t controls[] = {0, 1};
  return chi_from_unitary(controlled_not(3, controls, 2), qubit_basis(3));
}

std::uint64_t grid_point_seed(std::uint64_t base_seed, std::size_t index) {
  // A stream disjoint from the per-trajectory indices.
  return trajectory_seed(base_seed, (std::size_t{1} << 40U) + index);
}

namespace {

double distance_stderr(const std::vector<ProcessMatrix>& replicates, const ProcessMatrix& ideal) {
  std::vector<double> values;
  values.reserve(replicates.size());
  for (const auto& r : replicates) values.push_back(trace_distance(r, ideal));
  return jackknife_stderr(values);
}

}  // namespace

ComparisonReport compare_implementations(const std::vector<double>& omega_b_grid, const RegisterModel& base,
                                         const TrajectoryConfig& cfg, const ComparisonOptions& options) {
  if (omega_b_grid.empty()) throw std::invalid_argument("compare_implementations: empty grid");
  const ProcessMatrix cnot_ideal = exact_gate_library().at("CNOT");
  const ProcessMatrix toffoli_ideal = toffoli_chi();
  const Circuit toffoli = toffoli_circuit();
  ComparisonReport report;
  for (std::size_t i = 0; i < omega_b_grid.size(); ++i) {
    if (!(omega_b_grid[i] > 0.0)) throw ConfigError("omega_b grid values must be positive");
    ComparisonRow row;
    row.omega_b = omega_b_grid[i];
    row.seed = grid_point_seed(cfg.base_seed, i);
    RegisterModel two = base, three = base;
    two.params.omega_b = three.params.omega_b = row.omega_b;
    two.n_atoms = 2;
    three.n_atoms = 3;
    TrajectoryConfig point = cfg;

    point.base_seed = row.seed;
    const SimulationResult cnot = simulate_schedule(build_cnot_sequence(two, 0, 1), two, point);
    row.t_cnot = trace_distance(cnot.chi, cnot_ideal);
    row.leak_cnot = cnot.leakage;
    row.bound_nojump_cnot = cnot.no_jump.bound;
    row.nojump_distance_cnot = cnot.no_jump_distance;
    row.nojump_fraction_cnot = cnot.ensemble.no_jump_fraction;
    const auto cnot_reps = qubit_chi_replicates(cnot, options.jackknife_groups);
    row.sigma_cnot = distance_stderr(cnot_reps, cnot_ideal);

    GateLibrary library = exact_gate_library();
    library.insert_or_assign("CNOT", cnot.chi);
    if (options.independent_cnot_instances) {
      std::vector<ProcessMatrix> instances;
      for (std::size_t k = 0; k < toffoli.count(GateKind::kCNOT); ++k) {
        point.base_seed = row.seed + 16 + k;
        instances.push_back(simulate_schedule(build_cnot_sequence(two, 0, 1), two, point).chi);
      }
      const ProcessMatrix cat = chi_via_concatenation(toffoli, library, "CNOT", instances);
      row.t_cat = trace_distance(cat, toffoli_ideal);
      row.leak_cat = 1.0 - cat.trace();
    } else {
      const ProcessMatrix cat = chi_via_concatenation(toffoli, library);
      row.t_cat = trace_distance(cat, toffoli_ideal);
      row.leak_cat = 1.0 - cat.trace();
      std::vector<ProcessMatrix> cat_reps;
      for (const auto& rep : cnot_reps) {
        library.insert_or_assign("CNOT", rep);
        cat_reps.push_back(chi_via_concatenation(toffoli, library));
      }
      row.sigma_cat = distance_stderr(cat_reps, toffoli_ideal);
    }

    if (options.run_circuit) {
      point.base_seed = row.seed + 1;
      const SimulationResult cir = chi_via_full_simulation(toffoli, three, point);
      row.t_cir = trace_distance(cir.chi, toffoli_ideal);
      row.leak_cir = cir.leakage;
      row.bound_nojump_cir = cir.no_jump.bound;
      row.nojump_distance_cir = cir.no_jump_distance;
      row.nojump_fraction_cir = cir.ensemble.no_jump_fraction;
      row.sigma_cir = distance_stderr(qubit_chi_replicates(cir, options.jackknife_groups), toffoli_ideal);
    }
    if (options.run_c2not) {
      point.base_seed = row.seed + 2;
      const std::size_t controls[] = {0, 1};
      const SimulationResult c2 = simulate_schedule(build_cknot_sequence(three, controls, 2), three, point);
      row.t_c2not = trace_distance(c2.chi, toffoli_ideal);
      row.leak_c2not = c2.leakage;
      row.bound_nojump_c2not = c2.no_jump.bound;
      row.nojump_distance_c2not = c2.no_jump_distance;
      row.nojump_fraction_c2not = c2.ensemble.no_jump_fraction;
      row.sigma_c2not = distance_stderr(qubit_chi_replicates(c2, options.jackknife_groups), toffoli_ideal);
    }
    report.rows.push_back(row);
  }
  return report;
}

std::string ComparisonReport::to_csv() const {
  std::string out = "omega_b_hz,t_cat,t_cir,t_c2not,leak_cat,leak_cir,leak_c2not,bound_nojump_cir,seed\n";
  for (const auto& r : rows) {
    out += fmt::format("{:.12g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{}\n",
                       r.omega_b / (2.0 * std::numbers::pi), r.t_cat, r.t_cir, r.t_c2not, r.leak_cat, r.leak_cir,
                       r.leak_c2not, r.bound_nojump_cir, r.seed);
  }
  return out;
}

std::string ComparisonReport::to_detail_csv() const {
  std::string out =
      "omega_b_hz,seed,t_cnot,t_cat,t_cir,t_c2not,sigma_cnot,sigma_cat,sigma_cir,sigma_c2not,"
      "leak_cnot,leak_cat,leak_cir,leak_c2not,bound_nojump_cnot,bound_nojump_cir,bound_nojump_c2not,"
      "nojump_distance_cnot,nojump_distance_cir,nojump_distance_c2not,nojump_fraction_cnot,nojump_fraction_cir,"
      "nojump_fraction_c2not\n";
  for (const auto& r : rows) {
    out += fmt::format("{:.12g},{}", r.omega_b / (2.0 * std::numbers::pi), r.seed);
    for (double v : {r.t_cnot, r.t_cat, r.t_cir, r.t_c2not, r.sigma_cnot, r.sigma_cat, r.sigma_cir, r.sigma_c2not,
                     r.leak_cnot, r.leak_cat, r.leak_cir, r.leak_c2not, r.bound_nojump_cnot, r.bound_nojump_cir,
                     r.bound_nojump_c2not, r.nojump_distance_cnot, r.nojump_distance_cir,
                     r.nojump_distance_c2not, r.nojump_fraction_cnot, r.nojump_fraction_cir, r.nojump_fraction_c2not}) {
      out += fmt::format(",{:.17g}", v);
    }
    out += '\n';
  }
  return out;
}

}  // namespace chicat
