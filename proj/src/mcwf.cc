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

#include "chicat/mcwf.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "chicat/errors.h"
#include "eigen_view.h"

namespace chicat {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30U)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27U)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31U);
}

class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed) : engine_(splitmix64(seed)) {}
  // Uniform on the open interval (0, 1).
  double next() { return (static_cast<double>(engine_() >> 11U) + 0.5) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

bool finite(const ComplexMatrix& m) {
  for (const auto& z : m.entries())
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

double inf_norm(const ComplexMatrix& m) {
  double best = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double row = 0.0;
    for (std::size_t c = 0; c < m.cols(); ++c) row += std::abs(m(r, c));
    best = std::max(best, row);
  }
  return best;
}

void require_finite(const ComplexMatrix& m, const std::string& label) {
  if (!finite(m)) {
    throw NumericalError(fmt::format("non-finite values in '{}' (step size too large?)", label));
  }
}

}  // namespace

PulseSchedule::PulseSchedule(SubsystemShape shape) : shape_(std::move(shape)) {}

void PulseSchedule::add(HamiltonianSegment segment) {
  const std::size_t d = dim();
  if (!(segment.duration > 0.0)) {
    throw std::invalid_argument(fmt::format("segment '{}': duration must be positive", segment.label));
  }
  if (segment.h.rows() != d || segment.h.cols() != d) {
    throw std::invalid_argument(fmt::format("segment '{}': Hamiltonian does not match dimension {}", segment.label, d));
  }
  if (!is_hermitian(segment.h, 1e-12)) {
    throw std::invalid_argument(fmt::format("segment '{}': Hamiltonian is not Hermitian", segment.label));
  }
  for (const auto& j : segment.jumps) {
    if (j.l.rows() != d || j.l.cols() != d) {
      throw std::invalid_argument(fmt::format("jump '{}': dimension mismatch", j.label));
    }
  }
  items_.emplace_back(std::move(segment));
}

void PulseSchedule::add(InstantUnitary unitary) {
  if (unitary.u.rows() != dim() || unitary.u.cols() != dim()) {
    throw std::invalid_argument(fmt::format("unitary '{}': dimension mismatch", unitary.label));
  }
  if (!is_unitary(unitary.u, 1e-10)) {
    throw std::invalid_argument(fmt::format("unitary '{}': not unitary", unitary.label));
  }
  items_.emplace_back(std::move(unitary));
}

void PulseSchedule::append(const PulseSchedule& other) {
  if (!(other.shape_ == shape_)) throw std::invalid_argument("PulseSchedule::append: register shape mismatch");
  items_.insert(items_.end(), other.items_.begin(), other.items_.end());
}

std::size_t PulseSchedule::segment_count() const {
  return static_cast<std::size_t>(std::count_if(items_.begin(), items_.end(), [](const ScheduleItem& item) {
    return std::holds_alternative<HamiltonianSegment>(item);
  }));
}

double PulseSchedule::total_duration() const {
  double t = 0.0;
  for (const auto& item : items_)
    if (const auto* seg = std::get_if<HamiltonianSegment>(&item)) t += seg->duration;
  return t;
}

double PulseSchedule::min_segment_duration() const {
  double t = std::numeric_limits<double>::infinity();
  for (const auto& item : items_)
    if (const auto* seg = std::get_if<HamiltonianSegment>(&item)) t = std::min(t, seg->duration);
  return t;
}

void TrajectoryConfig::validate() const {
  if (n_traj < 1) throw std::invalid_argument("TrajectoryConfig: n_traj must be >= 1");
  if (steps_per_min_pulse < 10) throw std::invalid_argument("TrajectoryConfig: steps_per_min_pulse must be >= 10");
  if (!(jump_time_tolerance > 0.0 && jump_time_tolerance < 1.0)) {
    throw std::invalid_argument("TrajectoryConfig: jump_time_tolerance must lie in (0, 1)");
  }
  if (!(max_phase_per_step > 0.0 && max_phase_per_step <= 1.0)) {
    throw std::invalid_argument("TrajectoryConfig: max_phase_per_step must lie in (0, 1]");
  }
}

CompiledSchedule::CompiledSchedule(const PulseSchedule& schedule, std::span<const JumpOperator> jumps,
                                   const TrajectoryConfig& cfg)
    : dim_(schedule.dim()), jump_time_tolerance_(cfg.jump_time_tolerance) {
  cfg.validate();
  for (const auto& j : jumps) {
    if (j.l.rows() != dim_ || j.l.cols() != dim_) {
      throw std::invalid_argument(fmt::format("jump '{}': dimension mismatch", j.label));
    }
  }
  const double base_step = schedule.min_segment_duration() / static_cast<double>(cfg.steps_per_min_pulse);
  double clock = 0.0;
  for (const auto& item : schedule.items()) {
    if (const auto* u = std::get_if<InstantUnitary>(&item)) {
      items_.emplace_back(*u);
      continue;
    }
    const auto& seg = std::get<HamiltonianSegment>(item);
    Segment out;
    out.label = seg.label;
    out.start = clock;
    ComplexMatrix decay(dim_, dim_);
    auto take = [&](const JumpOperator& j) {
      require_finite(j.l, j.label);
      if (j.l.max_abs() == 0.0) return;
      decay += j.l.adjoint() * j.l;
      out.jumps.push_back(j);
    };
    for (const auto& j : jumps) take(j);
    for (const auto& j : seg.jumps) take(j);
    out.h_eff = seg.h - decay * Complex(0.0, 0.5);
    const double by_time = std::ceil(seg.duration / base_step - 1e-9);
    const double by_phase = std::ceil(inf_norm(out.h_eff) * seg.duration / cfg.max_phase_per_step);
    out.steps = static_cast<std::size_t>(std::max({1.0, by_time, by_phase}));
    out.dt = seg.duration / static_cast<double>(out.steps);
    out.step_powers.push_back(rk4_step_matrix(out.h_eff, out.dt));
    while ((std::size_t{1} << out.step_powers.size()) <= out.steps) {
      const auto& last = out.step_powers.back();
      out.step_powers.push_back(last * last);
    }
    out.full = matrix_power(out.step_powers.front(), out.steps);
    require_finite(out.full, out.label);
    clock += seg.duration;
    items_.emplace_back(std::move(out));
  }
}

ComplexMatrix CompiledSchedule::apply_steps(const Segment& segment, std::size_t count, const ComplexMatrix& psi) {
  if (count == segment.steps) return segment.full * psi;
  ComplexMatrix out = psi;
  for (std::size_t k = 0; count != 0; ++k, count >>= 1U) {
    if (count & 1U) out = segment.step_powers.at(k) * out;
  }
  return out;
}

namespace {

class TrajectoryRunner {
 public:
  TrajectoryRunner(const CompiledSchedule& compiled, std::uint64_t seed) : compiled_(compiled), rng_(seed) {}

  Trajectory run(const ComplexMatrix& psi0) {
    if (psi0.rows() != compiled_.dim()) {
      throw std::invalid_argument(fmt::format("initial state has {} rows, schedule dimension is {}", psi0.rows(),
                                              compiled_.dim()));
    }
    if (std::abs(psi0.frobenius_norm2() - 1.0) > 1e-10) {
      throw std::invalid_argument("initial state is not normalized");
    }
    psi_ = psi0;
    threshold_ = rng_.next();
    for (const auto& item : compiled_.items()) {
      if (const auto* u = std::get_if<InstantUnitary>(&item)) {
        psi_ = u->u * psi_;
        continue;
      }
      advance(std::get<CompiledSchedule::Segment>(item));
    }
    Trajectory out;
    out.survival_weight = psi_.frobenius_norm2();
    out.state = psi_ * (1.0 / std::sqrt(out.survival_weight));
    out.jumps = std::move(jumps_);
    return out;
  }

 private:
  void advance(const CompiledSchedule::Segment& seg) {
    if (seg.jumps.empty()) {
      psi_ = seg.full * psi_;
      require_finite(psi_, seg.label);
      return;
    }
    std::size_t done = 0;  // whole steps completed
    double partial = 0.0;  // time already spent inside step `done`
    while (true) {
      if (partial > 0.0) {
        const double rest = seg.dt - partial;
        ComplexMatrix next = rk4_step(seg.h_eff, psi_, rest);
        require_finite(next, seg.label);
        if (next.frobenius_norm2() >= threshold_) {
          psi_ = std::move(next);
          ++done;
          partial = 0.0;
        } else {
          partial += locate_and_jump(seg, rest, seg.start + static_cast<double>(done) * seg.dt + partial);
          continue;
        }
      }
      if (done == seg.steps) return;
      ComplexMatrix end = CompiledSchedule::apply_steps(seg, seg.steps - done, psi_);
      require_finite(end, seg.label);
      if (end.frobenius_norm2() >= threshold_) {
        psi_ = std::move(end);
        return;
      }
      // Largest number of whole steps that keeps ||psi||^2 above the threshold.
      for (std::size_t k = seg.step_powers.size(); k-- > 0;) {
        const std::size_t span = std::size_t{1} << k;
        if (done + span > seg.steps) continue;
        ComplexMatrix trial = seg.step_powers[k] * psi_;
        if (trial.frobenius_norm2() >= threshold_) {
          psi_ = std::move(trial);
          done += span;
        }
      }
      if (done == seg.steps) return;  // rounding between P^n and its factors
      partial = locate_and_jump(seg, seg.dt, seg.start + static_cast<double>(done) * seg.dt);
      if (partial >= seg.dt) {
        ++done;
        partial = 0.0;
      }
    }
  }

  // The crossing lies within (0, window]; bisect it, propagate there, jump.
  // Returns the time advanced.
  double locate_and_jump(const CompiledSchedule::Segment& seg, double window, double t0) {
    double lo = 0.0, hi = window;
    const double tol = compiled_.jump_time_tolerance() * seg.dt;
    ComplexMatrix at_hi = rk4_step(seg.h_eff, psi_, hi);
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      ComplexMatrix trial = rk4_step(seg.h_eff, psi_, mid);
      if (trial.frobenius_norm2() >= threshold_) {
        lo = mid;
      } else {
        hi = mid;
        at_hi = std::move(trial);
      }
    }
    require_finite(at_hi, seg.label);
    psi_ = std::move(at_hi);
    jump(seg, t0 + hi);
    return hi;
  }

  void jump(const CompiledSchedule::Segment& seg, double time) {
    std::vector<double> weights(seg.jumps.size());
    std::vector<ComplexMatrix> images(seg.jumps.size());
    double total = 0.0;
    for (std::size_t k = 0; k < seg.jumps.size(); ++k) {
      images[k] = seg.jumps[k].l * psi_;
      weights[k] = images[k].frobenius_norm2();
      total += weights[k];
    }
    if (!(total > 0.0)) {
      throw NumericalError(fmt::format("zero total jump rate at a forced jump in segment '{}'", seg.label));
    }
    const double pick = rng_.next() * total;
    std::size_t chosen = 0;
    double acc = weights[0];
    while (acc < pick && chosen + 1 < weights.size()) acc += weights[++chosen];
    while (weights[chosen] == 0.0 && chosen > 0) --chosen;
    psi_ = images[chosen] * (1.0 / std::sqrt(weights[chosen]));
    jumps_.push_back({seg.jumps[chosen].label, time});
    threshold_ = rng_.next();
  }

  const CompiledSchedule& compiled_;
  UniformSource rng_;
  ComplexMatrix psi_;
  double threshold_ = 0.0;
  std::vector<JumpEvent> jumps_;
};

}  // namespace

Trajectory evolve_trajectory(const CompiledSchedule& compiled, const ComplexMatrix& psi0, std::uint64_t seed) {
  return TrajectoryRunner(compiled, seed).run(psi0);
}

Trajectory evolve_trajectory(const PulseSchedule& schedule, std::span<const JumpOperator> jumps,
                             const ComplexMatrix& psi0, std::uint64_t seed, const TrajectoryConfig& cfg) {
  return evolve_trajectory(CompiledSchedule(schedule, jumps, cfg), psi0, seed);
}

std::uint64_t trajectory_seed(std::uint64_t base_seed, std::size_t index) {
  return base_seed ^ splitmix64(static_cast<std::uint64_t>(index));
}

ComplexMatrix average_outer_product(std::span<const ComplexMatrix> states) {
  if (states.empty()) throw std::invalid_argument("average_outer_product: no states");
  const auto dim = static_cast<Eigen::Index>(states.front().size());
  Eigen::MatrixXcd stacked(dim, static_cast<Eigen::Index>(states.size()));
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (static_cast<Eigen::Index>(states[i].size()) != dim) {
      throw std::invalid_argument("average_outer_product: state size mismatch");
    }
    stacked.col(static_cast<Eigen::Index>(i)) =
        Eigen::Map<const Eigen::VectorXcd>(states[i].data(), dim);
  }
  ComplexMatrix rho(static_cast<std::size_t>(dim), static_cast<std::size_t>(dim));
  detail::view(rho).noalias() = stacked * stacked.adjoint();
  rho *= 1.0 / static_cast<double>(states.size());
  return rho;
}

EnsembleResult run_ensemble(const PulseSchedule& schedule, std::span<const JumpOperator> jumps,
                            const ComplexMatrix& psi0, const TrajectoryConfig& cfg) {
  const CompiledSchedule compiled(schedule, jumps, cfg);
  const std::size_t n = cfg.n_traj;
  std::vector<Trajectory> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        results[i] = evolve_trajectory(compiled, psi0, trajectory_seed(cfg.base_seed, i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::size_t workers = cfg.n_workers == 0 ? std::max(1U, std::thread::hardware_concurrency()) : cfg.n_workers;
  workers = std::min(workers, n);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const NumericalError& e) {
      throw NumericalError(fmt::format("trajectory {}: {}", i, e.what()));
    } catch (const std::exception& e) {
      throw std::runtime_error(fmt::format("trajectory {}: {}", i, e.what()));
    }
  }

  EnsembleResult out;
  out.n_traj = n;
  out.base_seed = cfg.base_seed;
  std::size_t quiet = 0;
  out.final_states.reserve(n);
  out.jumps_per_trajectory.reserve(n);
  for (auto& t : results) {
    if (t.jumps.empty()) ++quiet;
    for (const auto& j : t.jumps) ++out.jump_counts[j.label];
    out.jumps_per_trajectory.push_back(t.jumps.size());
    out.final_states.push_back(std::move(t.state));
  }
  out.no_jump_fraction = static_cast<double>(quiet) / static_cast<double>(n);
  out.rho_avg = average_outer_product(out.final_states);
  return out;
}

std::vector<ComplexMatrix> jackknife_replicates(const EnsembleResult& ensemble, std::size_t groups) {
  const std::size_t n = ensemble.final_states.size();
  if (groups < 2 || groups > n) throw std::invalid_argument("jackknife: need 2 <= groups <= n_traj");
  const ComplexMatrix total = ensemble.rho_avg * static_cast<double>(n);
  std::vector<ComplexMatrix> out;
  out.reserve(groups);
  for (std::size_t g = 0; g < groups; ++g) {
    const std::size_t begin = g * n / groups, end = (g + 1) * n / groups;
    const std::span<const ComplexMatrix> block(ensemble.final_states.data() + begin, end - begin);
    ComplexMatrix rest = total - average_outer_product(block) * static_cast<double>(end - begin);
    rest *= 1.0 / static_cast<double>(n - (end - begin));
    out.push_back(std::move(rest));
  }
  return out;
}

double jackknife_stderr(std::span<const double> values) {
  const auto g = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= g;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt((g - 1.0) / g * ss);
}

double jackknife_stderr(const EnsembleResult& ensemble, std::size_t groups,
                        const std::function<double(const ComplexMatrix& rho)>& statistic) {
  std::vector<double> values;
  for (const auto& rho : jackknife_replicates(ensemble, groups)) values.push_back(statistic(rho));
  return jackknife_stderr(values);
}

ComplexMatrix maximally_entangled_state(std::size_t dim) {
  return ComplexMatrix::identity(dim) * (1.0 / std::sqrt(static_cast<double>(dim)));
}

namespace {

void check_extraction(const PulseSchedule& schedule, const OperatorBasis& basis, const TrajectoryConfig& cfg) {
  if (!(basis.shape() == schedule.shape())) {
    throw std::invalid_argument("process extraction: basis shape does not match the schedule register");
  }
  const std::size_t d = schedule.dim();
  if (d * d > cfg.max_doubled_dim) {
    throw DimensionError(fmt::format("system plus ancilla dimension {} exceeds cap {}", d * d, cfg.max_doubled_dim));
  }
}

}  // namespace

ChiEstimate estimate_chi(const PulseSchedule& schedule, std::span<const JumpOperator> jumps,
                         const OperatorBasis& basis, const TrajectoryConfig& cfg) {
  check_extraction(schedule, basis, cfg);
  EnsembleResult ensemble = run_ensemble(schedule, jumps, maximally_entangled_state(schedule.dim()), cfg);
  ProcessMatrix chi = from_choi(ensemble.rho_avg, basis);
  chi.metadata()["n_traj"] = std::to_string(cfg.n_traj);
  chi.metadata()["base_seed"] = std::to_string(cfg.base_seed);
  chi.metadata()["no_jump_fraction"] = fmt::format("{:.17g}", ensemble.no_jump_fraction);
  chi.metadata()["segments"] = std::to_string(schedule.segment_count());
  return {std::move(chi), std::move(ensemble)};
}

ProcessMatrix extract_chi(const PulseSchedule& schedule, std::span<const JumpOperator> jumps,
                          const OperatorBasis& basis, const TrajectoryConfig& cfg) {
  return estimate_chi(schedule, jumps, basis, cfg).chi;
}

NoJumpEstimate no_jump_estimate(const PulseSchedule& schedule, std::span<const JumpOperator> jumps,
                                const OperatorBasis& basis, const TrajectoryConfig& cfg) {
  check_extraction(schedule, basis, cfg);
  const CompiledSchedule compiled(schedule, jumps, cfg);
  ComplexMatrix psi = maximally_entangled_state(schedule.dim());
  for (const auto& item : compiled.items()) {
    if (const auto* u = std::get_if<InstantUnitary>(&item)) {
      psi = u->u * psi;
    } else {
      const auto& seg = std::get<CompiledSchedule::Segment>(item);
      psi = seg.full * psi;
      require_finite(psi, seg.label);
    }
  }
  const double survival = psi.frobenius_norm2();
  const std::span<const ComplexMatrix> one(&psi, 1);
  const ComplexMatrix raw = average_outer_product(one);
  NoJumpEstimate out{from_choi(raw * (1.0 / survival), basis), from_choi(raw, basis), survival,
                     std::max(0.0, 1.0 - survival)};
  return out;
}

}  // namespace chicat
