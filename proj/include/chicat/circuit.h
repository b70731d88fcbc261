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

#ifndef CHICAT_CIRCUIT_H_
#define CHICAT_CIRCUIT_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chicat/mcwf.h"
#include "chicat/process_matrix.h"
#include "chicat/rydberg.h"

namespace chicat {

enum class GateKind { kCNOT, kH, kT, kTdg, kX, kCkNOT };

/// Library key of a gate kind ("CNOT", "H", "T", "Tdg", "X", "C<k>NOT").
std::string gate_name(GateKind kind, std::size_t arity);
GateKind gate_kind_from_string(const std::string& name);

/// Controlled gates list their controls first and the target last.
struct Gate {
  GateKind kind;
  std::vector<std::size_t> wires;

  std::string name() const { return gate_name(kind, wires.size()); }
  std::size_t arity() const { return wires.size(); }
};

class Circuit {
 public:
  explicit Circuit(std::size_t n_wires);

  /// Places the gate in the earliest moment after every gate already touching
  /// one of its wires.
  void append(Gate gate);
  /// Appends a new moment holding exactly these (disjoint) gates.
  void append_moment(std::vector<Gate> gates);

  std::size_t n_wires() const { return n_wires_; }
  const std::vector<std::vector<Gate>>& moments() const { return moments_; }
  /// All gates, moment by moment.
  std::vector<Gate> gates() const;
  std::size_t count(GateKind kind) const;

 private:
  void check(const Gate& gate) const;

  std::size_t n_wires_;
  std::vector<std::vector<Gate>> moments_;
  std::vector<std::size_t> depth_;  // first free moment per wire
};

/// Controls on wires 0 and 1, target on wire 2: 6 CNOT, 2 H and 7 T/Tdg.
Circuit toffoli_circuit();

/// Ideal 2^n x 2^n unitary of one gate on an n-wire register.
ComplexMatrix gate_unitary(const Gate& gate, std::size_t n_wires);
ComplexMatrix circuit_unitary(const Circuit& circuit);

/// Gate name -> qubit process matrix (wires in the gate's own order).
using GateLibrary = std::map<std::string, ProcessMatrix>;

/// Exact unitary process matrices for H, T, Tdg, X, CNOT and C2NOT.
GateLibrary exact_gate_library();

/// Embeds each gate per moment (identity on idle wires), combines a moment by
/// parallel concatenation and chains moments by serial concatenation.
ProcessMatrix chi_via_concatenation(const Circuit& circuit, const GateLibrary& library);

/// Same, but each occurrence of `name`, moment by moment, uses the next entry of
/// `instances` (for independent per-instance estimates).
ProcessMatrix chi_via_concatenation(const Circuit& circuit, const GateLibrary& library,
                                    const std::string& name, const std::vector<ProcessMatrix>& instances);

/// Pulse schedule of a circuit on the atom register: controlled gates expand
/// to frame-corrected pulse sequences, one-qubit gates to ideal unitaries.
PulseSchedule circuit_schedule(const Circuit& circuit, const RegisterModel& reg);

struct SimulationResult {
  ProcessMatrix chi;       // projected to the qubit subspace
  double leakage = 0.0;
  ProcessMatrix full_chi;  // on the whole register
  EnsembleResult ensemble;
  NoJumpEstimate no_jump;
  /// T(no-jump estimate, ensemble estimate) on the whole register.
  double no_jump_distance = 0.0;
  std::size_t pulses = 0;
};

/// One Choi-state ensemble over the full-register schedule of `circuit`.
SimulationResult chi_via_full_simulation(const Circuit& circuit, const RegisterModel& reg,
                                         const TrajectoryConfig& cfg);
SimulationResult simulate_schedule(const PulseSchedule& schedule, const RegisterModel& reg,
                                   const TrajectoryConfig& cfg);

/// Jackknife replicates of a simulation's qubit process matrix.
std::vector<ProcessMatrix> qubit_chi_replicates(const SimulationResult& sim, std::size_t groups);

struct ComparisonRow {
  double omega_b = 0.0;  // rad/s
  std::uint64_t seed = 0;
  double t_cnot = 0.0, t_cat = 0.0, t_cir = 0.0, t_c2not = 0.0;
  double sigma_cnot = 0.0, sigma_cat = 0.0, sigma_cir = 0.0, sigma_c2not = 0.0;
  double leak_cnot = 0.0, leak_cat = 0.0, leak_cir = 0.0, leak_c2not = 0.0;
  double bound_nojump_cnot = 0.0, bound_nojump_cir = 0.0, bound_nojump_c2not = 0.0;
  double nojump_distance_cnot = 0.0, nojump_distance_cir = 0.0, nojump_distance_c2not = 0.0;
  // Observed fraction of trajectories without a jump.
  double nojump_fraction_cnot = 0.0, nojump_fraction_cir = 0.0, nojump_fraction_c2not = 0.0;
};

struct ComparisonOptions {
  std::size_t jackknife_groups = 20;
  bool run_circuit = true;  // the full three-atom circuit ensemble
  bool run_c2not = true;
  /// Concatenate independently seeded CNOT estimates instead of reusing one.
  bool independent_cnot_instances = false;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;

  /// omega_b_hz,t_cat,t_cir,t_c2not,leak_cat,leak_cir,leak_c2not,bound_nojump_cir,seed
  std::string to_csv() const;
  /// Every column of ComparisonRow, including CNOT values and standard errors.
  std::string to_detail_csv() const;
};

/// Seed used for grid point `index`.
std::uint64_t grid_point_seed(std::uint64_t base_seed, std::size_t index);

/// For each blue Rabi frequency: the CNOT alone, the concatenated Toffoli
/// circuit, the simulated Toffoli circuit and the pulse-level C2NOT, each
/// against its ideal gate. `base` supplies the scheme and all parameters
/// except omega_b and n_atoms.
ComparisonReport compare_implementations(const std::vector<double>& omega_b_grid, const RegisterModel& base,
                                         const TrajectoryConfig& cfg, const ComparisonOptions& options = {});

/// Ideal process matrix of the canonical Toffoli gate.
ProcessMatrix toffoli_chi();

}  // namespace chicat

#endif  // CHICAT_CIRCUIT_H_
