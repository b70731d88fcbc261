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

#ifndef CHICAT_MCWF_H_
#define CHICAT_MCWF_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "chicat/process_matrix.h"
#include "chicat/tensor.h"

namespace chicat {

/// Jump operator L; rates live in its normalization (units sqrt(rad/s)).
struct JumpOperator {
  ComplexMatrix l;
  std::string label;
};

/// Constant Hamiltonian (rad/s) applied for `duration` seconds. `jumps` are
/// dissipation channels active only during this segment, on top of the
/// schedule-wide ones (e.g. scattering from the laser driving this pulse).
struct HamiltonianSegment {
  ComplexMatrix h;
  double duration = 0.0;
  std::string label;
  std::vector<JumpOperator> jumps;
};

/// Zero-duration ideal gate.
struct InstantUnitary {
  ComplexMatrix u;
  std::string label;
};

using ScheduleItem = std::variant<HamiltonianSegment, InstantUnitary>;

class PulseSchedule {
 public:
  PulseSchedule() = default;
  explicit PulseSchedule(SubsystemShape shape);

  void add(HamiltonianSegment segment);
  void add(InstantUnitary unitary);
  void append(const PulseSchedule& other);

  const SubsystemShape& shape() const { return shape_; }
  std::size_t dim() const { return shape_.total(); }
  const std::vector<ScheduleItem>& items() const { return items_; }
  std::size_t segment_count() const;
  double total_duration() const;
  double min_segment_duration() const;

 private:
  SubsystemShape shape_;
  std::vector<ScheduleItem> items_;
};

struct TrajectoryConfig {
  std::size_t n_traj = 500;
  std::uint64_t base_seed = 1;
  /// The shortest segment is split into at least this many RK4 steps.
  std::size_t steps_per_min_pulse = 200;
  /// Bisection stops once the jump time is known to this fraction of a step.
  double jump_time_tolerance = 1e-3;
  /// Upper bound on ||H_eff||_inf * dt; keeps RK4 stable for stiff segments.
  double max_phase_per_step = 0.05;
  /// 0 selects std::thread::hardware_concurrency().
  std::size_t n_workers = 0;
  /// Cap on (system dimension)^2 for Choi-state extraction.
  std::size_t max_doubled_dim = 4096;

  void validate() const;
};

struct JumpEvent {
  std::string label;
  double time = 0.0;
};

struct Trajectory {
  ComplexMatrix state;  // normalized
  std::vector<JumpEvent> jumps;
  /// Squared norm of the unnormalized state accumulated since the last jump.
  double survival_weight = 1.0;
};

/// Schedule with per-segment step matrices precomputed. Steps inside a
/// segment are RK4 steps of H_eff = H - (i/2) sum L^dagger L; whole runs of
/// steps are applied through cached powers of the step matrix.
class CompiledSchedule {
 public:
  struct Segment {
    std::string label;
    double start = 0.0;
    double dt = 0.0;
    std::size_t steps = 0;
    ComplexMatrix h_eff;
    std::vector<ComplexMatrix> step_powers;  // P^(2^k)
    ComplexMatrix full;                      // P^steps
    std::vector<JumpOperator> jumps;
  };
  using Item = std::variant<Segment, InstantUnitary>;

  CompiledSchedule(const PulseSchedule& schedule, std::span<const JumpOperator> jumps,
                   const TrajectoryConfig& cfg);

  const std::vector<Item>& items() const { return items_; }
  std::size_t dim() const { return dim_; }
  double jump_time_tolerance() const { return jump_time_tolerance_; }

  /// P^count psi via the binary decomposition of count.
  static ComplexMatrix apply_steps(const Segment& segment, std::size_t count, const ComplexMatrix& psi);

 private:
  std::vector<Item> items_;
  std::size_t dim_ = 0;
  double jump_time_tolerance_ = 1e-3;
};

/// Norm-threshold quantum-jump trajectory. psi0 is D x A: columns belong to an
/// idle ancilla, so system operators act by left multiplication.
Trajectory evolve_trajectory(const CompiledSchedule& compiled, const ComplexMatrix& psi0, std::uint64_t seed);
Trajectory evolve_trajectory(const PulseSchedule& schedule, std::span<const JumpOperator> jumps,
                             const ComplexMatrix& psi0, std::uint64_t seed, const TrajectoryConfig& cfg = {});

/// Seed of trajectory `index`: base_seed XOR splitmix64(index).
std::uint64_t trajectory_seed(std::uint64_t base_seed, std::size_t index);

struct EnsembleResult {
  ComplexMatrix rho_avg;  // over row-major vec(state)
  std::map<std::string, std::size_t> jump_counts;
  double no_jump_fraction = 0.0;
  std::size_t n_traj = 0;
  std::uint64_t base_seed = 0;
  std::vector<ComplexMatrix> final_states;
  std::vector<std::size_t> jumps_per_trajectory;
};

EnsembleResult run_ensemble(const PulseSchedule& schedule, std::span<const JumpOperator> jumps,
                            const ComplexMatrix& psi0, const TrajectoryConfig& cfg);

/// Average of vec(state) vec(state)^dagger over the selected trajectories, in
/// index order.
ComplexMatrix average_outer_product(std::span<const ComplexMatrix> states);

/// Delete-a-group jackknife standard error of `statistic(rho)`, with the
/// trajectories split into `groups` contiguous blocks.
double jackknife_stderr(const EnsembleResult& ensemble, std::size_t groups,
                        const std::function<double(const ComplexMatrix& rho)>& statistic);

/// Leave-one-group-out averages used by jackknife_stderr.
std::vector<ComplexMatrix> jackknife_replicates(const EnsembleResult& ensemble, std::size_t groups);

double jackknife_stderr(std::span<const double> replicate_values);

/// Maximally entangled system-ancilla state sum_i |i>|i> / sqrt(D) as a D x D matrix.
ComplexMatrix maximally_entangled_state(std::size_t dim);

struct ChiEstimate {
  ProcessMatrix chi;
  EnsembleResult ensemble;
};

/// Runs the ensemble from the maximally entangled state of system and idle
/// ancilla and reads the process off the averaged Choi state.
ChiEstimate estimate_chi(const PulseSchedule& schedule, std::span<const JumpOperator> jumps,
                         const OperatorBasis& basis, const TrajectoryConfig& cfg);
ProcessMatrix extract_chi(const PulseSchedule& schedule, std::span<const JumpOperator> jumps,
                          const OperatorBasis& basis, const TrajectoryConfig& cfg);

struct NoJumpEstimate {
  ProcessMatrix chi;               // from the normalized no-jump Choi state
  ProcessMatrix chi_unnormalized;  // trace = survival
  double survival = 1.0;           // p_nj
  double bound = 0.0;              // 1 - p_nj
};

NoJumpEstimate no_jump_estimate(const PulseSchedule& schedule, std::span<const JumpOperator> jumps,
                                const OperatorBasis& basis, const TrajectoryConfig& cfg = {});

}  // namespace chicat

#endif  // CHICAT_MCWF_H_
