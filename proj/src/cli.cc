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

#include "chicat/cli.h"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <iostream>
#include <numbers>
#include <optional>
#include <set>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "chicat/chi_io.h"
#include "chicat/errors.h"

namespace chicat::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

const std::set<std::string> kKnownKeys = {
    "mode",       "preset",         "params_hz",       "scheme",       "dump_level",
    "stark",      "blockade_mode",  "closed",          "max_dim",      "omega_b_grid_hz",
    "n_traj",     "seed",           "n_workers",       "steps_per_min_pulse",
    "max_phase_per_step",           "jump_time_tolerance",             "basis",
    "gate",       "jackknife_groups",                  "run_circuit",  "run_c2not",
    "independent_cnot_instances",   "circuit",         "library",      "instances",
    "exact_defaults",               "a",               "b"};

const std::map<std::string, std::string> kModeOfVerb = {{"gate-chi", "gate-chi"},
                                                        {"sweep", "cnot-sweep"},
                                                        {"concat", "concat"},
                                                        {"distance", "distance"},
                                                        {"toffoli-compare", "toffoli-compare"}};

// Typed field access; errors name the key.
template <typename T>
T get(const json& doc, const std::string& key, T fallback) {
  const auto it = doc.find(key);
  if (it == doc.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(fmt::format("config field '{}' has the wrong type", key));
  }
}

std::size_t get_count(const json& doc, const std::string& key, std::size_t fallback) {
  const auto it = doc.find(key);
  if (it == doc.end()) return fallback;
  if (!it->is_number_integer() || it->get<std::int64_t>() < 0) {
    throw ConfigError(fmt::format("config field '{}' must be a non-negative integer", key));
  }
  return it->get<std::size_t>();
}

json parse_value(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception&) {
    return text;
  }
}

void apply_override(json& doc, const std::string& item) {
  const auto eq = item.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError(fmt::format("override '{}' is not KEY=VALUE", item));
  }
  const std::string key = item.substr(0, eq);
  json* node = &doc;
  std::size_t start = 0;
  for (;;) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError(fmt::format("override key '{}' is malformed", key));
    if (node->is_null()) *node = json::object();
    if (!node->is_object()) throw ConfigError(fmt::format("override key '{}' does not name an object", key));
    node = &(*node)[part];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  *node = parse_value(item.substr(eq + 1));
}

std::vector<Gate> parse_gates(const json& circuit, std::size_t& wires) {
  if (!circuit.is_object() || !circuit.contains("n_wires") || !circuit.contains("gates")) {
    throw ConfigError("config field 'circuit' must be \"toffoli\" or {n_wires, gates}");
  }
  wires = get_count(circuit, "n_wires", 0);
  std::vector<Gate> gates;
  for (const auto& g : circuit.at("gates")) {
    try {
      gates.push_back({gate_kind_from_string(g.at("gate").get<std::string>()),
                       g.at("wires").get<std::vector<std::size_t>>()});
    } catch (const json::exception&) {
      throw ConfigError("config field 'circuit.gates' entries need 'gate' and 'wires'");
    } catch (const std::invalid_argument& e) {
      throw ConfigError(fmt::format("config field 'circuit.gates': {}", e.what()));
    }
  }
  return gates;
}

std::filesystem::path resolve(const RunConfig& config, const std::string& path) {
  const std::filesystem::path p(path);
  return p.is_relative() && !config.base_dir.empty() ? config.base_dir / p : p;
}

std::string hex(const unsigned char* data, std::size_t n) {
  std::string out;
  out.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) out += fmt::format("{:02x}", data[i]);
  return out;
}

ProcessMatrix ideal_gate(const std::string& gate) {
  if (gate == "identity") return identity_chi(OperatorBasis(SubsystemShape::uniform(1, 2), BasisKind::kMatrixUnit));
  const std::size_t k = gate == "CNOT" ? 1 : std::stoul(gate.substr(1, gate.size() - 4));
  std::vector<std::size_t> controls(k);
  for (std::size_t i = 0; i < k; ++i) controls[i] = i;
  return chi_from_unitary(controlled_not(k + 1, controls, k),
                          OperatorBasis(SubsystemShape::uniform(k + 1, 2), BasisKind::kMatrixUnit));
}

// Control count of a gate-chi target, or nullopt for the identity.
std::optional<std::size_t> gate_controls(const std::string& gate) {
  if (gate == "identity") return std::nullopt;
  if (gate == "CNOT") return 1;
  if (gate.size() > 4 && gate.front() == 'C' && gate.ends_with("NOT")) {
    const std::string digits = gate.substr(1, gate.size() - 4);
    if (!digits.empty() && digits.find_first_not_of("0123456789") == std::string::npos) {
      const std::size_t k = std::stoul(digits);
      if (k >= 1) return k;
    }
  }
  throw ConfigError(fmt::format("config field 'gate': unknown gate '{}' (expected identity, CNOT or C<k>NOT)", gate));
}

ordered_json hz_json(const AtomParams& p) {
  ordered_json out = ordered_json::object();
  for (const auto& [k, v] : p.to_hz()) out[k] = v;
  return out;
}

ordered_json rad_json(const AtomParams& p) {
  ordered_json out = ordered_json::object();
  for (const auto& [k, v] : p.to_hz()) out[k] = v * kTwoPi;
  return out;
}

class Manifest {
 public:
  Manifest(const std::string& verb, const RunConfig& config, const CommandOptions& options)
      : options_(options), start_(std::chrono::steady_clock::now()) {
    doc_["command"] = verb;
    doc_["config_hash"] = git_blob_hash(config.canonical);
    doc_["config"] = ordered_json::parse(config.canonical);
  }

  void physics(const RunConfig& config) {
    doc_["scheme"] = to_string(config.scheme.kind);
    doc_["dump_level"] = config.scheme.dump_level;
    doc_["stark"] = config.stark == StarkMode::kCompensated ? "compensated" : "uncompensated";
    doc_["blockade_mode"] = config.blockade_mode == BlockadeMode::kFinite ? "finite" : "infinite";
    doc_["closed"] = config.closed;
    const AtomParams p = config.register_model(1).params;
    doc_["params_hz"] = hz_json(p);
    doc_["params_rad_s"] = rad_json(p);
    doc_["seed"] = config.trajectories.base_seed;
    doc_["n_traj"] = config.trajectories.n_traj;
  }

  ordered_json& operator[](const std::string& key) { return doc_[key]; }

  // Writes `contents` under the output directory and records its hash.
  void output(CommandResult& result, const std::string& name, const std::string& contents) {
    write_file_atomic((options_.out_dir / name).string(), contents);
    doc_["outputs"][name] = git_blob_hash(contents);
    result.files.push_back(name);
  }

  void finish(CommandResult& result, const std::string& verb) {
    if (options_.record_timing) {
      doc_["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }
    const std::string name = fmt::format("manifest_{}.json", verb);
    write_file_atomic((options_.out_dir / name).string(), doc_.dump(2) + "\n");
    result.files.push_back(name);
  }

 private:
  CommandOptions options_;
  std::chrono::steady_clock::time_point start_;
  ordered_json doc_;
};

TrajectoryConfig point_config(const RunConfig& config, std::size_t index) {
  TrajectoryConfig cfg = config.trajectories;
  cfg.base_seed = grid_point_seed(config.trajectories.base_seed, index);
  return cfg;
}

void require_mode(const RunConfig& config, const std::string& verb) {
  if (!config.mode.empty() && config.mode != kModeOfVerb.at(verb)) {
    throw ConfigError(fmt::format("config field 'mode' is '{}' but the command is '{}'", config.mode, verb));
  }
}

}  // namespace

RegisterModel RunConfig::register_model(std::size_t n_atoms) const {
  RegisterModel reg;
  reg.n_atoms = n_atoms;
  reg.scheme = scheme;
  reg.params = params;
  reg.stark = stark;
  reg.blockade_mode = blockade_mode;
  reg.max_dim = max_dim;
  return closed ? reg.closed() : reg;
}

RunConfig parse_config(const std::string& json_text, const std::vector<std::string>& overrides,
                       std::filesystem::path base_dir) {
  json doc = json::object();
  if (!json_text.empty()) {
    try {
      doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
      throw ConfigError(fmt::format("config is not valid JSON: {}", e.what()));
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  }
  for (const auto& o : overrides) apply_override(doc, o);
  for (const auto& [key, value] : doc.items()) {
    if (!kKnownKeys.contains(key)) throw ConfigError(fmt::format("unknown config field '{}'", key));
  }

  RunConfig c;
  c.canonical = doc.dump();
  c.base_dir = std::move(base_dir);
  c.mode = get<std::string>(doc, "mode", "");
  if (!c.mode.empty()) {
    bool known = false;
    for (const auto& [verb, mode] : kModeOfVerb) known = known || mode == c.mode;
    if (!known) throw ConfigError(fmt::format("config field 'mode': unknown mode '{}'", c.mode));
  }

  const std::string preset = get<std::string>(doc, "preset", "table1");
  if (preset == "table1") {
    c.params = AtomParams::table1();
  } else if (preset != "none") {
    throw ConfigError(fmt::format("config field 'preset': unknown preset '{}' (expected table1 or none)", preset));
  }
  if (doc.contains("params_hz")) {
    const json& hz = doc.at("params_hz");
    if (!hz.is_object()) throw ConfigError("config field 'params_hz' must be an object");
    for (const auto& [key, value] : hz.items()) {
      if (!value.is_number()) throw ConfigError(fmt::format("config field 'params_hz.{}' must be a number", key));
      try {
        c.params.set_hz(key, value.get<double>());
      } catch (const ConfigError&) {
        throw ConfigError(fmt::format("config field 'params_hz.{}' is not an atom parameter", key));
      }
    }
  }
  c.params.validate();

  try {
    c.scheme.kind = scheme_kind_from_string(get<std::string>(doc, "scheme", "effective-3"));
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("config field 'scheme': {}", e.what()));
  }
  c.scheme.dump_level = get<bool>(doc, "dump_level", false);
  const std::string stark = get<std::string>(doc, "stark", "compensated");
  if (stark != "compensated" && stark != "uncompensated") {
    throw ConfigError(fmt::format("config field 'stark': unknown value '{}'", stark));
  }
  c.stark = stark == "compensated" ? StarkMode::kCompensated : StarkMode::kUncompensated;
  const std::string blockade = get<std::string>(doc, "blockade_mode", "finite");
  if (blockade != "finite" && blockade != "infinite") {
    throw ConfigError(fmt::format("config field 'blockade_mode': unknown value '{}'", blockade));
  }
  c.blockade_mode = blockade == "finite" ? BlockadeMode::kFinite : BlockadeMode::kInfinite;
  c.closed = get<bool>(doc, "closed", false);
  c.max_dim = get_count(doc, "max_dim", c.max_dim);

  std::vector<double> grid_hz = get<std::vector<double>>(doc, "omega_b_grid_hz", {});
  if (!doc.contains("omega_b_grid_hz")) {
    for (int mhz = 10; mhz <= 100; mhz += 10) grid_hz.push_back(mhz * 1e6);
  }
  for (double v : grid_hz) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("config field 'omega_b_grid_hz' values must be positive");
    c.omega_b_grid.push_back(v * kTwoPi);
  }

  TrajectoryConfig& t = c.trajectories;
  t.n_traj = get_count(doc, "n_traj", 500);
  t.base_seed = get<std::uint64_t>(doc, "seed", 1);
  t.n_workers = get_count(doc, "n_workers", 0);
  t.steps_per_min_pulse = get_count(doc, "steps_per_min_pulse", t.steps_per_min_pulse);
  t.max_phase_per_step = get<double>(doc, "max_phase_per_step", t.max_phase_per_step);
  t.jump_time_tolerance = get<double>(doc, "jump_time_tolerance", t.jump_time_tolerance);
  if (t.n_traj == 0) throw ConfigError("config field 'n_traj' must be at least 1");
  try {
    t.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  try {
    c.basis = basis_kind_from_string(get<std::string>(doc, "basis", "matrix-unit"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(fmt::format("config field 'basis': {}", e.what()));
  }
  c.gate = get<std::string>(doc, "gate", "CNOT");
  gate_controls(c.gate);

  c.compare.jackknife_groups = get_count(doc, "jackknife_groups", 20);
  if (c.compare.jackknife_groups < 2) throw ConfigError("config field 'jackknife_groups' must be at least 2");
  c.compare.run_circuit = get<bool>(doc, "run_circuit", true);
  c.compare.run_c2not = get<bool>(doc, "run_c2not", true);
  c.compare.independent_cnot_instances = get<bool>(doc, "independent_cnot_instances", false);

  if (doc.contains("circuit")) {
    const json& circuit = doc.at("circuit");
    if (circuit.is_string()) {
      c.circuit_name = circuit.get<std::string>();
      if (c.circuit_name != "toffoli") {
        throw ConfigError(fmt::format("config field 'circuit': unknown circuit '{}'", c.circuit_name));
      }
    } else {
      c.circuit_name.clear();
      c.circuit_gates = parse_gates(circuit, c.circuit_wires);
    }
  }
  c.library_files = get<std::map<std::string, std::string>>(doc, "library", {});
  c.instance_files = get<std::map<std::string, std::vector<std::string>>>(doc, "instances", {});
  if (c.instance_files.size() > 1) throw ConfigError("config field 'instances' supports a single gate name");
  c.exact_defaults = get<bool>(doc, "exact_defaults", true);
  c.chi_a = get<std::string>(doc, "a", "");
  c.chi_b = get<std::string>(doc, "b", "");
  return c;
}

std::string git_blob_hash(const std::string& content) {
  const std::string blob = fmt::format("blob {}", content.size()) + '\0' + content;
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(blob.data(), blob.size(), digest, &length, EVP_sha1(), nullptr) != 1) {
    throw std::runtime_error("SHA-1 digest failed");
  }
  return hex(digest, length);
}

CommandResult cmd_gate_chi(const RunConfig& config, const CommandOptions& options) {
  require_mode(config, "gate-chi");
  const std::optional<std::size_t> k = gate_controls(config.gate);
  const RegisterModel reg = config.register_model(k ? *k + 1 : 1);
  PulseSchedule schedule;
  if (k) {
    std::vector<std::size_t> controls(*k);
    for (std::size_t i = 0; i < *k; ++i) controls[i] = i;
    schedule = build_cknot_sequence(reg, controls, *k);
  } else {
    schedule = PulseSchedule(reg.shape());
    schedule.add(InstantUnitary{ComplexMatrix::identity(reg.dim()), "identity"});
  }
  const SimulationResult sim = simulate_schedule(schedule, reg, config.trajectories);
  const ProcessMatrix ideal = ideal_gate(config.gate);
  const double distance = trace_distance(sim.chi, ideal);

  CommandResult result;
  Manifest manifest("gate-chi", config, options);
  manifest.physics(config);
  manifest["gate"] = config.gate;
  manifest["pulses"] = sim.pulses;
  manifest["trace_distance_to_ideal"] = distance;
  manifest["leakage"] = sim.leakage;
  manifest["no_jump_fraction"] = sim.ensemble.no_jump_fraction;
  manifest["bound_nojump"] = sim.no_jump.bound;
  manifest["nojump_distance"] = sim.no_jump_distance;
  const std::string name = fmt::format("chi_{}.json", config.gate);
  manifest.output(result, name, chi_to_json(sim.chi.in_basis(config.basis)));
  manifest.finish(result, "gate-chi");
  result.summary = fmt::format("{}: trace distance to ideal {:.6g}, leakage {:.6g}, {} pulses", config.gate, distance,
                               sim.leakage, sim.pulses);
  return result;
}

CommandResult cmd_sweep(const RunConfig& config, const CommandOptions& options) {
  require_mode(config, "sweep");
  const ProcessMatrix ideal = ideal_gate("CNOT");
  std::string csv = "omega_b_hz,trace_distance,leakage,bound_nojump\n";
  std::string detail = "omega_b_hz,trace_distance,sigma,leakage,bound_nojump,nojump_distance,nojump_fraction,seed\n";
  const std::size_t groups = std::min(config.compare.jackknife_groups, config.trajectories.n_traj);
  std::size_t best = 0;
  std::vector<double> distances;
  for (std::size_t i = 0; i < config.omega_b_grid.size(); ++i) {
    RegisterModel reg = config.register_model(2);
    reg.params.omega_b = config.omega_b_grid[i];
    const TrajectoryConfig cfg = point_config(config, i);
    const SimulationResult sim = simulate_schedule(build_cnot_sequence(reg, 0, 1), reg, cfg);
    const double t = trace_distance(sim.chi, ideal);
    double sigma = 0.0;
    if (groups >= 2) {
      std::vector<double> reps;
      for (const auto& r : qubit_chi_replicates(sim, groups)) reps.push_back(trace_distance(r, ideal));
      sigma = jackknife_stderr(reps);
    }
    const double hz = config.omega_b_grid[i] / kTwoPi;
    csv += fmt::format("{:.12g},{:.17g},{:.17g},{:.17g}\n", hz, t, sim.leakage, sim.no_jump.bound);
    detail += fmt::format("{:.12g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{}\n", hz, t, sigma, sim.leakage,
                          sim.no_jump.bound, sim.no_jump_distance, sim.ensemble.no_jump_fraction, cfg.base_seed);
    distances.push_back(t);
    if (t < distances[best]) best = i;
    std::cerr << fmt::format("sweep {:.12g} Hz: T = {:.6g} +- {:.2g}\n", hz, t, sigma);
  }

  CommandResult result;
  Manifest manifest("sweep", config, options);
  manifest.physics(config);
  manifest["grid_points"] = config.omega_b_grid.size();
  manifest["argmin_omega_b_hz"] = config.omega_b_grid[best] / kTwoPi;
  manifest.output(result, "sweep.csv", csv);
  manifest.output(result, "sweep_detail.csv", detail);
  manifest.finish(result, "sweep");
  result.summary = fmt::format("sweep: {} points, minimum {:.6g} at {:.12g} Hz", distances.size(), distances[best],
                               config.omega_b_grid[best] / kTwoPi);
  return result;
}

CommandResult cmd_concat(const RunConfig& config, const CommandOptions& options) {
  require_mode(config, "concat");
  GateLibrary library = config.exact_defaults ? exact_gate_library() : GateLibrary{};
  Manifest manifest("concat", config, options);
  ordered_json inputs = ordered_json::object();
  auto load = [&](const std::string& path) {
    const std::string text = read_file(resolve(config, path).string());
    inputs[path] = git_blob_hash(text);
    return chi_from_json(text).in_basis(BasisKind::kMatrixUnit);
  };
  for (const auto& [name, path] : config.library_files) library.insert_or_assign(name, load(path));

  Circuit circuit = config.circuit_name == "toffoli" ? toffoli_circuit() : Circuit(config.circuit_wires);
  if (config.circuit_name.empty()) {
    try {
      for (const auto& g : config.circuit_gates) circuit.append(g);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(fmt::format("config field 'circuit': {}", e.what()));
    }
  }
  ProcessMatrix chi;
  if (config.instance_files.empty()) {
    chi = chi_via_concatenation(circuit, library);
  } else {
    const auto& [name, paths] = *config.instance_files.begin();
    std::vector<ProcessMatrix> instances;
    for (const auto& p : paths) instances.push_back(load(p));
    chi = chi_via_concatenation(circuit, library, name, instances);
  }
  chi.metadata()["circuit_gates"] = std::to_string(circuit.gates().size());
  chi.metadata()["circuit_moments"] = std::to_string(circuit.moments().size());

  CommandResult result;
  manifest["inputs"] = inputs;
  manifest["n_wires"] = circuit.n_wires();
  manifest["gates"] = circuit.gates().size();
  manifest["moments"] = circuit.moments().size();
  std::optional<double> to_toffoli;
  if (config.circuit_name == "toffoli") {
    to_toffoli = trace_distance(chi, toffoli_chi());
    manifest["trace_distance_to_toffoli"] = *to_toffoli;
  }
  manifest.output(result, "chi_concat.json", chi_to_json(chi.in_basis(config.basis)));
  manifest.finish(result, "concat");
  result.summary = to_toffoli ? fmt::format("concat: trace distance to Toffoli {:.6g}", *to_toffoli)
                              : fmt::format("concat: {} gates in {} moments", circuit.gates().size(),
                                            circuit.moments().size());
  return result;
}

CommandResult cmd_distance(const RunConfig& config, const CommandOptions& options) {
  require_mode(config, "distance");
  if (config.chi_a.empty() || config.chi_b.empty()) throw ConfigError("config fields 'a' and 'b' are required");
  Manifest manifest("distance", config, options);
  const std::string text_a = read_file(resolve(config, config.chi_a).string());
  const std::string text_b = read_file(resolve(config, config.chi_b).string());
  const ProcessMatrix a = chi_from_json(text_a);
  const ProcessMatrix b = chi_from_json(text_b);
  if (!(a.basis().shape() == b.basis().shape())) {
    throw ConfigError("config fields 'a' and 'b' name process matrices of different shapes");
  }
  const double d = trace_distance(a, b.in_basis(a.basis().kind()));

  CommandResult result;
  ordered_json out;
  out["a"] = config.chi_a;
  out["b"] = config.chi_b;
  out["trace_distance"] = d;
  manifest["inputs"] = {{config.chi_a, git_blob_hash(text_a)}, {config.chi_b, git_blob_hash(text_b)}};
  manifest["trace_distance"] = d;
  manifest.output(result, "distance.json", out.dump(2) + "\n");
  manifest.finish(result, "distance");
  result.summary = fmt::format("{:.17g}", d);
  return result;
}

CommandResult cmd_toffoli_compare(const RunConfig& config, const CommandOptions& options) {
  require_mode(config, "toffoli-compare");
  if (config.trajectories.n_traj < 2) throw ConfigError("config field 'n_traj' must be at least 2 for toffoli-compare");
  ComparisonOptions opts = config.compare;
  opts.jackknife_groups = std::min(opts.jackknife_groups, config.trajectories.n_traj);
  const ComparisonReport report =
      compare_implementations(config.omega_b_grid, config.register_model(1), config.trajectories, opts);

  CommandResult result;
  Manifest manifest("toffoli-compare", config, options);
  manifest.physics(config);
  manifest["grid_points"] = report.rows.size();
  manifest["run_circuit"] = opts.run_circuit;
  manifest["run_c2not"] = opts.run_c2not;
  manifest["independent_cnot_instances"] = opts.independent_cnot_instances;
  manifest.output(result, "toffoli_compare.csv", report.to_csv());
  manifest.output(result, "toffoli_compare_detail.csv", report.to_detail_csv());
  manifest.finish(result, "toffoli-compare");
  result.summary = fmt::format("toffoli-compare: {} grid points", report.rows.size());
  return result;
}

CommandResult run_command(const std::string& verb, const RunConfig& config, const CommandOptions& options) {
  if (verb == "gate-chi") return cmd_gate_chi(config, options);
  if (verb == "sweep") return cmd_sweep(config, options);
  if (verb == "concat") return cmd_concat(config, options);
  if (verb == "distance") return cmd_distance(config, options);
  if (verb == "toffoli-compare") return cmd_toffoli_compare(config, options);
  throw ConfigError(fmt::format("unknown command '{}'", verb));
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const DimensionError*>(&e)) return kExitResource;
  if (dynamic_cast<const SchemaError*>(&e)) return kExitSchema;
  if (dynamic_cast<const NumericalError*>(&e)) return kExitNumerical;
  return kExitConfig;
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Process matrices of Rydberg-blockade gates from quantum trajectories"};
  app.require_subcommand(1);
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> traj;
  std::string out_dir = ".";
  std::vector<std::string> overrides;
  bool record_timing = false;
  for (const auto& [verb, mode] : kModeOfVerb) {
    CLI::App* sub = app.add_subcommand(verb);
    sub->add_option("--config", config_path, "JSON run configuration (frequencies in Hz)");
    sub->add_option("--seed", seed, "base seed");
    sub->add_option("--traj", traj, "trajectories per ensemble");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--override", overrides, "KEY=VALUE applied to the configuration");
    sub->add_flag("--record-timing", record_timing, "record wall time in the manifest");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }
  const std::string verb = app.get_subcommands().front()->get_name();
  try {
    std::string text;
    std::filesystem::path base;
    if (!config_path.empty()) {
      text = read_file(config_path);
      base = std::filesystem::path(config_path).parent_path();
    }
    if (seed) overrides.push_back(fmt::format("seed={}", *seed));
    if (traj) overrides.push_back(fmt::format("n_traj={}", *traj));
    const RunConfig config = parse_config(text, overrides, base);
    const CommandResult result = run_command(verb, config, {out_dir, record_timing});
    std::cout << result.summary << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

}  // namespace chicat::cli
