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

#ifndef CHICAT_CLI_H_
#define CHICAT_CLI_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "chicat/circuit.h"
#include "chicat/process_matrix.h"
#include "chicat/rydberg.h"

namespace chicat::cli {

/// Process exit codes; stable contract for scripts.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitResource = 3,
  kExitSchema = 4,
  kExitNumerical = 5,
};

/// Everything a command needs, resolved from one JSON document. Frequencies
/// in the document are in Hz; the fields below hold rad/s.
struct RunConfig {
  AtomParams params;
  LevelScheme scheme;
  StarkMode stark = StarkMode::kCompensated;
  BlockadeMode blockade_mode = BlockadeMode::kFinite;
  bool closed = false;
  std::size_t max_dim = 4096;
  std::vector<double> omega_b_grid;  // rad/s
  TrajectoryConfig trajectories;
  BasisKind basis = BasisKind::kMatrixUnit;
  std::string mode;
  std::string gate = "CNOT";
  ComparisonOptions compare;

  // concat
  std::string circuit_name = "toffoli";
  std::vector<Gate> circuit_gates;
  std::size_t circuit_wires = 0;
  std::map<std::string, std::string> library_files;
  std::map<std::string, std::vector<std::string>> instance_files;
  bool exact_defaults = true;

  // distance
  std::string chi_a, chi_b;

  /// Effective document after overrides; the manifest hash covers its dump.
  std::string canonical;
  /// Relative input paths resolve against this directory.
  std::filesystem::path base_dir;

  RegisterModel register_model(std::size_t n_atoms) const;
};

/// Parses `json_text` (empty means all defaults) after applying KEY=VALUE
/// overrides; KEY may be a dotted path such as params_hz.omega_b. Throws
/// ConfigError naming the offending key.
RunConfig parse_config(const std::string& json_text, const std::vector<std::string>& overrides,
                       std::filesystem::path base_dir = {});

/// Git blob hash (SHA-1 of "blob <size>\0" + content), lower-case hex.
std::string git_blob_hash(const std::string& content);

struct CommandOptions {
  std::filesystem::path out_dir = ".";
  /// Adds wall time to manifests; off by default so reruns are byte-identical.
  bool record_timing = false;
};

/// Files written by a command, relative to the output directory.
struct CommandResult {
  std::vector<std::string> files;
  std::string summary;  // one line for stdout
};

CommandResult cmd_gate_chi(const RunConfig& config, const CommandOptions& options);
CommandResult cmd_sweep(const RunConfig& config, const CommandOptions& options);
CommandResult cmd_concat(const RunConfig& config, const CommandOptions& options);
CommandResult cmd_distance(const RunConfig& config, const CommandOptions& options);
CommandResult cmd_toffoli_compare(const RunConfig& config, const CommandOptions& options);

/// Dispatches on the verb name; throws ConfigError for unknown verbs.
CommandResult run_command(const std::string& verb, const RunConfig& config, const CommandOptions& options);

/// Maps an exception from a command onto its exit code.
int exit_code_for(const std::exception& e);

/// Full command line: verb plus flags. Returns the process exit code and
/// reports errors on stderr.
int main_entry(int argc, char** argv);

}  // namespace chicat::cli

#endif  // CHICAT_CLI_H_
