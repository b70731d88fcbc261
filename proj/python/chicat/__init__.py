# Copyright 2026 The chicat Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Process matrices of Rydberg-blockade gates from quantum trajectories."""

from ._chicat import (
    ConfigError,
    DimensionError,
    NumericalError,
    ProcessMatrix,
    SchemaError,
    chi_from_json,
    chi_from_kraus,
    chi_from_unitary,
    chi_to_json,
    cli_main,
    compare_implementations,
    concat_toffoli,
    effective_rabi_hz,
    embed,
    exact_gate_library,
    from_choi,
    identity_chi,
    load_chi,
    parallel_concat,
    project_to_qubit_subspace,
    save_chi,
    serial_concat,
    serial_concat_structure,
    simulate_gate,
    table1_hz,
    to_choi,
    to_superoperator,
    toffoli_chi,
    trace_distance,
)

__version__ = "0.1.0"
