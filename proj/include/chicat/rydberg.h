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

#ifndef CHICAT_RYDBERG_H_
#define CHICAT_RYDBERG_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chicat/mcwf.h"
#include "chicat/tensor.h"

namespace chicat {

/// Single-atom parameters, all in rad/s.
struct AtomParams {
  double delta = 0.0;     // detuning of the intermediate level |p>
  double omega_r = 0.0;   // red Rabi frequency, ground <-> p
  double omega_b = 0.0;   // blue Rabi frequency, p <-> r
  double blockade = 0.0;  // pairwise |rr> shift
  double gamma_p = 0.0;   // decay of |p>
  double gamma_r = 0.0;   // decay of |r>
  double gamma_d = 0.0;   // dephasing of |r>

  /// Neutral-atom defaults (Delta/2pi = 2 GHz, Omega_R/2pi = 118 MHz,
  /// Omega_B/2pi = 50 MHz, B/2pi = 20 MHz, gamma_p/2pi = 6.07 MHz,
  /// gamma_r/2pi = 0.53 kHz, gamma_d/2pi = 1 kHz).
  static AtomParams table1();

  /// Values keyed by field name, in Hz (frequency / 2pi).
  std::map<std::string, double> to_hz() const;
  /// Overrides the fields present in `hz`; unknown keys throw ConfigError.
  AtomParams with_hz(const std::map<std::string, double>& hz) const;
  void set_hz(const std::string& key, double value);

  /// Rates must be non-negative; throws ConfigError naming the field.
  void validate() const;
  /// True when delta < 5 max(omega_r, omega_b), where adiabatic elimination
  /// of |p> becomes questionable.
  bool adiabatic_warning() const;
};

enum class SchemeKind {
  kEffective3,  // |0>, |1>, |r>; |p> eliminated
  kFull4,       // |0>, |1>, |p>, |r>
};

const char* to_string(SchemeKind kind);
SchemeKind scheme_kind_from_string(const std::string& name);

/// Level layout of one atom. Qubit levels are 0 and 1 and |r> is always the
/// highest index. The optional dump level sits just below |r> and collects
/// all spontaneous decay instead of the 1/2 : 1/2 return to |0>, |1>.
struct LevelScheme {
  SchemeKind kind = SchemeKind::kEffective3;
  bool dump_level = false;

  static LevelScheme effective3(bool dump = false) { return {SchemeKind::kEffective3, dump}; }
  static LevelScheme full4(bool dump = false) { return {SchemeKind::kFull4, dump}; }

  std::size_t local_dim() const;
  std::size_t rydberg() const { return local_dim() - 1; }
  std::optional<std::size_t> intermediate() const;
  std::optional<std::size_t> dump() const;
  std::vector<std::string> labels() const;
};

enum class StarkMode {
  kCompensated,    // light shifts cancelled by a calibrated detuning
  kUncompensated,
};

enum class BlockadeMode {
  kFinite,    // H_B = B sum_{i<j} |rr><rr|
  kInfinite,  // couplings into states with two or more Rydberg atoms removed
};

struct RegisterModel {
  std::size_t n_atoms = 1;
  LevelScheme scheme;
  AtomParams params;
  StarkMode stark = StarkMode::kCompensated;
  BlockadeMode blockade_mode = BlockadeMode::kFinite;
  std::size_t max_dim = 4096;

  SubsystemShape shape() const { return SubsystemShape::uniform(n_atoms, scheme.local_dim()); }
  std::size_t dim() const;
  /// Throws DimensionError past max_dim and ConfigError on bad parameters.
  void validate() const;
  /// Same register with every dissipation rate set to zero.
  RegisterModel closed() const;
};

/// Second-order result of eliminating |p> for a two-photon ground <-> r drive.
struct EffectiveModel {
  double omega_eff = 0.0;  // Omega_R Omega_B / (2 Delta)
  double stark_g = 0.0;    // Omega_R^2 / (4 Delta), on the driven ground level
  double stark_r = 0.0;    // Omega_B^2 / (4 Delta), on |r>
  double decay_g = 0.0;    // gamma_p Omega_R^2 / (4 Delta^2), from the driven ground level
  double decay_r = 0.0;    // gamma_p Omega_B^2 / (4 Delta^2), from |r>
  double gamma_r = 0.0;
  double gamma_d = 0.0;
  std::size_t target_level = 0;

  double pi_time() const;
};

EffectiveModel adiabatic_eliminate(const AtomParams& params, std::size_t target_level = 0);

/// `op` (local_dim x local_dim) on `atom`, identity elsewhere.
ComplexMatrix embed_local(const ComplexMatrix& op, std::size_t atom, const RegisterModel& reg);

ComplexMatrix blockade_hamiltonian(const RegisterModel& reg);

/// Dissipation present at all times: decay and dephasing of |r> on every atom,
/// and decay of |p> in the full-4 scheme.
std::vector<JumpOperator> jump_operators(const RegisterModel& reg);

/// Extra channels while `atom` is driven on ground <-> r (effective-3 only):
/// decay through the admixture of |p> into the ground level and into |r>.
std::vector<JumpOperator> pulse_jump_operators(const RegisterModel& reg, std::size_t atom,
                                               std::size_t ground, const EffectiveModel& model);

/// Two-photon pi pulse on `atom` between level `ground` (0 or 1) and |r>.
HamiltonianSegment build_pi_pulse(const RegisterModel& reg, std::size_t atom, std::size_t ground,
                                  const EffectiveModel& model);

/// Pulse-level C_k-NOT: k control excitations in list order, the target swap
/// 0<->r, 1<->r, 0<->r, then control de-excitations in reverse order. The
/// NOT fires when every control starts in |1>. With `frame_correction`, the
/// single-atom phases measured on the closed, infinitely blockaded sequence
/// are undone by a trailing InstantUnitary.
PulseSchedule build_cknot_sequence(const RegisterModel& reg, std::span<const std::size_t> controls,
                                   std::size_t target, bool frame_correction = true);
PulseSchedule build_cnot_sequence(const RegisterModel& reg, std::size_t control, std::size_t target,
                                  bool frame_correction = true);

/// Per-atom diagonal phase correction for the sequence above (identity on
/// non-qubit levels). Throws NumericalError if the closed-system qubit block
/// is not the ideal gate up to single-atom phases.
ComplexMatrix cknot_frame_correction(const RegisterModel& reg, std::span<const std::size_t> controls,
                                     std::size_t target);

/// 2x2 matrix of H, T = exp(i pi sigma_z / 8), Tdg, X or Z.
ComplexMatrix qubit_gate(const std::string& name);

/// Ideal one-qubit gate on `atom`, identity on its non-qubit levels.
InstantUnitary single_qubit_gate(const std::string& name, const RegisterModel& reg, std::size_t atom);

/// 2^n x 2^n controlled-NOT with the given controls and target, wires in
/// big-endian order.
ComplexMatrix controlled_not(std::size_t n_wires, std::span<const std::size_t> controls, std::size_t target);

/// Closed-system propagator of a schedule (jumps ignored).
ComplexMatrix schedule_unitary(const PulseSchedule& schedule);

/// Block of `op` on the qubit levels {0, 1} of every subsystem.
ComplexMatrix qubit_block(const ComplexMatrix& op, const SubsystemShape& shape);

}  // namespace chicat

#endif  // CHICAT_RYDBERG_H_
