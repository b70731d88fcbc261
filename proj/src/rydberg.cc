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

#include "chicat/rydberg.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "chicat/errors.h"

namespace chicat {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Field {
  const char* name;
  double AtomParams::*member;
};

constexpr Field kFields[] = {
    {"delta", &AtomParams::delta},       {"omega_r", &AtomParams::omega_r}, {"omega_b", &AtomParams::omega_b},
    {"blockade", &AtomParams::blockade}, {"gamma_p", &AtomParams::gamma_p}, {"gamma_r", &AtomParams::gamma_r},
    {"gamma_d", &AtomParams::gamma_d},
};

ComplexMatrix projector(std::size_t d, std::size_t i, std::size_t j) {
  ComplexMatrix m(d, d);
  m(i, j) = 1.0;
  return m;
}

std::size_t level_of(std::size_t flat, std::size_t atom, const RegisterModel& reg) {
  const std::size_t d = reg.scheme.local_dim();
  for (std::size_t k = reg.n_atoms - 1; k > atom; --k) flat /= d;
  return flat % d;
}

std::size_t rydberg_count(std::size_t flat, const RegisterModel& reg) {
  std::size_t count = 0;
  for (std::size_t a = 0; a < reg.n_atoms; ++a) count += level_of(flat, a, reg) == reg.scheme.rydberg() ? 1 : 0;
  return count;
}

// Decay from `from` on `atom`: into the dump level if present, otherwise
// split evenly between |0> and |1>.
void add_decay(std::vector<JumpOperator>& out, const RegisterModel& reg, std::size_t atom, std::size_t from,
               double rate, const std::string& what) {
  if (!(rate > 0.0)) return;
  const std::size_t d = reg.scheme.local_dim();
  if (const auto dump = reg.scheme.dump()) {
    out.push_back({embed_local(projector(d, *dump, from) * std::sqrt(rate), atom, reg),
                   fmt::format("{}->dump atom {}", what, atom)});
    return;
  }
  for (std::size_t to : {std::size_t{0}, std::size_t{1}}) {
    out.push_back({embed_local(projector(d, to, from) * std::sqrt(rate / 2.0), atom, reg),
                   fmt::format("{}->{} atom {}", what, to, atom)});
  }
}

void check_atom(const RegisterModel& reg, std::size_t atom) {
  if (atom >= reg.n_atoms) {
    throw std::invalid_argument(fmt::format("atom {} outside a register of {} atoms", atom, reg.n_atoms));
  }
}

}  // namespace

AtomParams AtomParams::table1() {
  AtomParams p;
  p.delta = kTwoPi * 2.0e9;
  p.omega_r = kTwoPi * 118e6;
  p.omega_b = kTwoPi * 50e6;
  p.blockade = kTwoPi * 20e6;
  p.gamma_p = kTwoPi * 6.07e6;
  p.gamma_r = kTwoPi * 0.53e3;
  p.gamma_d = kTwoPi * 1.0e3;
  return p;
}

std::map<std::string, double> AtomParams::to_hz() const {
  std::map<std::string, double> out;
  for (const auto& f : kFields) out[f.name] = this->*f.member / kTwoPi;
  return out;
}

void AtomParams::set_hz(const std::string& key, double value) {
  for (const auto& f : kFields) {
    if (key == f.name) {
      this->*f.member = value * kTwoPi;
      return;
    }
  }
  throw ConfigError(fmt::format("unknown atom parameter '{}'", key));
}

AtomParams AtomParams::with_hz(const std::map<std::string, double>& hz) const {
  AtomParams out = *this;
  for (const auto& [key, value] : hz) out.set_hz(key, value);
  return out;
}

void AtomParams::validate() const {
  for (const auto& f : kFields) {
    const double v = this->*f.member;
    if (!std::isfinite(v) || v < 0.0) throw ConfigError(fmt::format("atom parameter '{}' must be >= 0", f.name));
  }
}

bool AtomParams::adiabatic_warning() const { return delta < 5.0 * std::max(omega_r, omega_b); }

const char* to_string(SchemeKind kind) { return kind == SchemeKind::kEffective3 ? "effective-3" : "full-4"; }

SchemeKind scheme_kind_from_string(const std::string& name) {
  if (name == "effective-3") return SchemeKind::kEffective3;
  if (name == "full-4") return SchemeKind::kFull4;
  throw ConfigError(fmt::format("unknown level scheme '{}' (expected effective-3 or full-4)", name));
}

std::size_t LevelScheme::local_dim() const {
  return (kind == SchemeKind::kEffective3 ? 3 : 4) + (dump_level ? 1 : 0);
}

std::optional<std::size_t> LevelScheme::intermediate() const {
  if (kind == SchemeKind::kFull4) return 2;
  return std::nullopt;
}

std::optional<std::size_t> LevelScheme::dump() const {
  if (dump_level) return rydberg() - 1;
  return std::nullopt;
}

std::vector<std::string> LevelScheme::labels() const {
  std::vector<std::string> out = {"0", "1"};
  if (kind == SchemeKind::kFull4) out.emplace_back("p");
  if (dump_level) out.emplace_back("dump");
  out.emplace_back("r");
  return out;
}

std::size_t RegisterModel::dim() const {
  std::size_t total = 1;
  for (std::size_t k = 0; k < n_atoms; ++k) {
    total *= scheme.local_dim();
    if (total > kMaxDimension) {
      throw DimensionError(fmt::format("register of {} atoms exceeds dimension {}", n_atoms, kMaxDimension));
    }
  }
  return total;
}

void RegisterModel::validate() const {
  if (n_atoms < 1) throw ConfigError("register needs at least one atom");
  if (dim() > max_dim) {
    throw DimensionError(fmt::format("register dimension {} exceeds cap {}", dim(), max_dim));
  }
  params.validate();
}

RegisterModel RegisterModel::closed() const {
  RegisterModel out = *this;
  out.params.gamma_p = 0.0;
  out.params.gamma_r = 0.0;
  out.params.gamma_d = 0.0;
  return out;
}

double EffectiveModel::pi_time() const {
  if (!(omega_eff > 0.0)) throw std::invalid_argument("pi pulse needs a nonzero effective Rabi frequency");
  return std::numbers::pi / omega_eff;
}

EffectiveModel adiabatic_eliminate(const AtomParams& params, std::size_t target_level) {
  if (params.delta == 0.0) throw std::invalid_argument("adiabatic elimination needs a nonzero detuning");
  if (target_level > 1) throw std::invalid_argument("target level must be 0 or 1");
  const double delta = params.delta;
  EffectiveModel m;
  m.target_level = target_level;
  m.omega_eff = params.omega_r * params.omega_b / (2.0 * delta);
  m.stark_g = params.omega_r * params.omega_r / (4.0 * delta);
  m.stark_r = params.omega_b * params.omega_b / (4.0 * delta);
  m.decay_g = params.gamma_p * params.omega_r * params.omega_r / (4.0 * delta * delta);
  m.decay_r = params.gamma_p * params.omega_b * params.omega_b / (4.0 * delta * delta);
  m.gamma_r = params.gamma_r;
  m.gamma_d = params.gamma_d;
  return m;
}

ComplexMatrix embed_local(const ComplexMatrix& op, std::size_t atom, const RegisterModel& reg) {
  check_atom(reg, atom);
  const std::size_t d = reg.scheme.local_dim();
  if (op.rows() != d || op.cols() != d) throw std::invalid_argument("embed_local: operator does not match local dim");
  ComplexMatrix out = atom == 0 ? op : ComplexMatrix::identity(d);
  for (std::size_t a = 1; a < reg.n_atoms; ++a) out = kron(out, a == atom ? op : ComplexMatrix::identity(d));
  return out;
}

ComplexMatrix blockade_hamiltonian(const RegisterModel& reg) {
  const std::size_t dim = reg.dim();
  ComplexMatrix h(dim, dim);
  for (std::size_t s = 0; s < dim; ++s) {
    const auto n = static_cast<double>(rydberg_count(s, reg));
    h(s, s) = reg.params.blockade * n * (n - 1.0) / 2.0;
  }
  return h;
}

std::vector<JumpOperator> jump_operators(const RegisterModel& reg) {
  std::vector<JumpOperator> out;
  const std::size_t d = reg.scheme.local_dim();
  const std::size_t r = reg.scheme.rydberg();
  for (std::size_t a = 0; a < reg.n_atoms; ++a) {
    if (const auto p = reg.scheme.intermediate()) add_decay(out, reg, a, *p, reg.params.gamma_p, "decay p");
    add_decay(out, reg, a, r, reg.params.gamma_r, "decay r");
    if (reg.params.gamma_d > 0.0) {
      ComplexMatrix l = ComplexMatrix::identity(d) - projector(d, r, r) * 2.0;
      out.push_back({embed_local(l * std::sqrt(reg.params.gamma_d), a, reg), fmt::format("dephasing r atom {}", a)});
    }
  }
  return out;
}

std::vector<JumpOperator> pulse_jump_operators(const RegisterModel& reg, std::size_t atom, std::size_t ground,
                                               const EffectiveModel& model) {
  std::vector<JumpOperator> out;
  if (reg.scheme.kind != SchemeKind::kEffective3) return out;
  add_decay(out, reg, atom, ground, model.decay_g, fmt::format("scatter {}", ground));
  add_decay(out, reg, atom, reg.scheme.rydberg(), model.decay_r, "scatter r");
  return out;
}

HamiltonianSegment build_pi_pulse(const RegisterModel& reg, std::size_t atom, std::size_t ground,
                                  const EffectiveModel& model) {
  check_atom(reg, atom);
  if (ground > 1) throw std::invalid_argument("pi pulse ground level must be 0 or 1");
  const std::size_t d = reg.scheme.local_dim();
  const std::size_t r = reg.scheme.rydberg();
  const AtomParams& p = reg.params;
  const bool compensated = reg.stark == StarkMode::kCompensated;
  ComplexMatrix local(d, d);
  if (const auto pl = reg.scheme.intermediate()) {
    local(*pl, *pl) = -p.delta;
    local(ground, *pl) = local(*pl, ground) = p.omega_r / 2.0;
    local(*pl, r) = local(r, *pl) = p.omega_b / 2.0;
    if (compensated) {
      local(ground, ground) -= model.stark_g;
      local(r, r) -= model.stark_r;
    }
  } else {
    local(ground, r) = local(r, ground) = model.omega_eff / 2.0;
    if (!compensated) {
      local(ground, ground) += model.stark_g;
      local(r, r) += model.stark_r;
    }
  }
  HamiltonianSegment seg;
  seg.h = embed_local(local, atom, reg);
  if (reg.blockade_mode == BlockadeMode::kInfinite) {
    for (std::size_t i = 0; i < seg.h.rows(); ++i) {
      for (std::size_t j = 0; j < seg.h.cols(); ++j) {
        if (i != j && (rydberg_count(i, reg) > 1 || rydberg_count(j, reg) > 1)) seg.h(i, j) = 0.0;
      }
    }
  } else {
    seg.h += blockade_hamiltonian(reg);
  }
  seg.duration = model.pi_time();
  seg.label = fmt::format("atom {} {}<->r", atom, ground);
  seg.jumps = pulse_jump_operators(reg, atom, ground, model);
  return seg;
}

namespace {

void check_gate_wires(const RegisterModel& reg, std::span<const std::size_t> controls, std::size_t target) {
  if (controls.empty()) throw std::invalid_argument("C_k-NOT needs at least one control");
  check_atom(reg, target);
  for (std::size_t i = 0; i < controls.size(); ++i) {
    check_atom(reg, controls[i]);
    if (controls[i] == target) throw std::invalid_argument(fmt::format("control {} is also the target", target));
    for (std::size_t j = 0; j < i; ++j) {
      if (controls[j] == controls[i]) throw std::invalid_argument(fmt::format("control {} repeated", controls[i]));
    }
  }
}

PulseSchedule raw_cknot(const RegisterModel& reg, std::span<const std::size_t> controls, std::size_t target) {
  const EffectiveModel model = adiabatic_eliminate(reg.params);
  PulseSchedule s(reg.shape());
  for (std::size_t c : controls) s.add(build_pi_pulse(reg, c, 0, model));
  s.add(build_pi_pulse(reg, target, 0, model));
  s.add(build_pi_pulse(reg, target, 1, model));
  s.add(build_pi_pulse(reg, target, 0, model));
  for (auto it = controls.rbegin(); it != controls.rend(); ++it) s.add(build_pi_pulse(reg, *it, 0, model));
  return s;
}

}  // namespace

ComplexMatrix cknot_frame_correction(const RegisterModel& reg, std::span<const std::size_t> controls,
                                     std::size_t target) {
  check_gate_wires(reg, controls, target);
  // The frame is a property of the ideal pulse sequence, so it is measured on
  // the eliminated model without loss and with a perfect blockade.
  RegisterModel ideal = reg.closed();
  ideal.scheme = LevelScheme::effective3();
  ideal.stark = StarkMode::kCompensated;
  ideal.blockade_mode = BlockadeMode::kInfinite;
  const ComplexMatrix u = qubit_block(schedule_unitary(raw_cknot(ideal, controls, target)), ideal.shape());
  const ComplexMatrix n = u * controlled_not(reg.n_atoms, controls, target).adjoint();
  const std::size_t q = n.rows();
  const Complex ref = n(0, 0);
  if (std::abs(ref) < 0.5) throw NumericalError("frame correction: reference amplitude vanished");
  std::vector<Complex> phase(reg.n_atoms);
  for (std::size_t a = 0; a < reg.n_atoms; ++a) {
    const std::size_t bit = std::size_t{1} << (reg.n_atoms - 1 - a);
    const Complex z = n(bit, bit) / ref;
    phase[a] = z / std::abs(z);
  }
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t j = 0; j < q; ++j) {
      Complex expected = 0.0;
      if (i == j) {
        expected = ref;
        for (std::size_t a = 0; a < reg.n_atoms; ++a) {
          if ((i >> (reg.n_atoms - 1 - a)) & 1U) expected *= phase[a];
        }
      }
      if (std::abs(n(i, j) - expected) > 1e-8) {
        throw NumericalError("frame correction: pulse sequence is not the target gate up to single-atom phases");
      }
    }
  }
  const std::size_t d = reg.scheme.local_dim();
  ComplexMatrix c = ComplexMatrix::identity(reg.dim());
  for (std::size_t a = 0; a < reg.n_atoms; ++a) {
    ComplexMatrix local = ComplexMatrix::identity(d);
    local(1, 1) = std::conj(phase[a]);
    c = embed_local(local, a, reg) * c;
  }
  return c;
}

PulseSchedule build_cknot_sequence(const RegisterModel& reg, std::span<const std::size_t> controls,
                                   std::size_t target, bool frame_correction) {
  check_gate_wires(reg, controls, target);
  reg.validate();
  PulseSchedule s = raw_cknot(reg, controls, target);
  if (frame_correction) s.add(InstantUnitary{cknot_frame_correction(reg, controls, target), "frame correction"});
  return s;
}

PulseSchedule build_cnot_sequence(const RegisterModel& reg, std::size_t control, std::size_t target,
                                  bool frame_correction) {
  const std::size_t controls[] = {control};
  return build_cknot_sequence(reg, controls, target, frame_correction);
}

ComplexMatrix qubit_gate(const std::string& name) {
  const double s = 1.0 / std::sqrt(2.0);
  const Complex t = std::polar(1.0, std::numbers::pi / 8.0);
  if (name == "H") return {{s, s}, {s, -s}};
  if (name == "T") return {{t, 0.0}, {0.0, std::conj(t)}};
  if (name == "Tdg") return {{std::conj(t), 0.0}, {0.0, t}};
  if (name == "X") return {{0.0, 1.0}, {1.0, 0.0}};
  if (name == "Z") return {{1.0, 0.0}, {0.0, -1.0}};
  throw std::invalid_argument(fmt::format("unknown one-qubit gate '{}'", name));
}

InstantUnitary single_qubit_gate(const std::string& name, const RegisterModel& reg, std::size_t atom) {
  const ComplexMatrix g = qubit_gate(name);
  ComplexMatrix local = ComplexMatrix::identity(reg.scheme.local_dim());
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) local(i, j) = g(i, j);
  return {embed_local(local, atom, reg), fmt::format("{} atom {}", name, atom)};
}

ComplexMatrix controlled_not(std::size_t n_wires, std::span<const std::size_t> controls, std::size_t target) {
  const std::size_t dim = std::size_t{1} << n_wires;
  auto bit = [n_wires](std::size_t wire) { return std::size_t{1} << (n_wires - 1 - wire); };
  ComplexMatrix u(dim, dim);
  for (std::size_t s = 0; s < dim; ++s) {
    bool fire = true;
    for (std::size_t c : controls) fire = fire && (s & bit(c)) != 0;
    u(fire ? s ^ bit(target) : s, s) = 1.0;
  }
  return u;
}

ComplexMatrix schedule_unitary(const PulseSchedule& schedule) {
  ComplexMatrix u = ComplexMatrix::identity(schedule.dim());
  for (const auto& item : schedule.items()) {
    if (const auto* seg = std::get_if<HamiltonianSegment>(&item)) {
      u = unitary_propagator(seg->h, seg->duration) * u;
    } else {
      u = std::get<InstantUnitary>(item).u * u;
    }
  }
  return u;
}

ComplexMatrix qubit_block(const ComplexMatrix& op, const SubsystemShape& shape) {
  std::vector<std::size_t> index = {0};
  for (std::size_t d : shape.dims()) {
    std::vector<std::size_t> next;
    for (std::size_t base : index)
      for (std::size_t level : {std::size_t{0}, std::size_t{1}}) next.push_back(base * d + level);
    index = std::move(next);
  }
  ComplexMatrix out(index.size(), index.size());
  for (std::size_t i = 0; i < index.size(); ++i)
    for (std::size_t j = 0; j < index.size(); ++j) out(i, j) = op(index[i], index[j]);
  return out;
}

}  // namespace chicat
