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

import json
import math

import numpy as np
import pytest

import chicat

CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def random_kraus(d, rank, rng):
    g = rng.normal(size=(rank * d, d)) + 1j * rng.normal(size=(rank * d, d))
    q, _ = np.linalg.qr(g)
    return [q[k * d:(k + 1) * d] for k in range(rank)]


def choi_oracle(kraus):
    d = kraus[0].shape[0]
    j = np.zeros((d * d, d * d), dtype=complex)
    for a in range(d):
        for b in range(d):
            unit = np.zeros((d, d), dtype=complex)
            unit[a, b] = 1
            out = sum(k @ unit @ k.conj().T for k in kraus)
            for i in range(d):
                for k in range(d):
                    j[i * d + a, k * d + b] = out[i, k] / d
    return j


def test_identity_and_trace():
    p = chicat.identity_chi([2])
    assert p.dim == 2
    assert p.chi.shape == (4, 4)
    assert p.trace_preserving
    assert p.trace() == pytest.approx(1.0)


def test_choi_matches_numpy_oracle():
    rng = np.random.default_rng(7)
    kraus = random_kraus(2, 3, rng)
    p = chicat.chi_from_kraus(kraus, [2])
    assert np.max(np.abs(chicat.to_choi(p) - choi_oracle(kraus))) < 1e-12


def test_serial_concat_routes_agree():
    rng = np.random.default_rng(11)
    a = chicat.chi_from_kraus(random_kraus(4, 2, rng), [2, 2], "pauli-like")
    b = chicat.chi_from_kraus(random_kraus(4, 3, rng), [2, 2], "pauli-like")
    assert chicat.trace_distance(chicat.serial_concat(a, b), chicat.serial_concat_structure(a, b)) < 1e-10


def test_parallel_concat_and_embed():
    h = chicat.chi_from_unitary(H, [2])
    both = chicat.parallel_concat(h, h)
    assert chicat.trace_distance(both, chicat.chi_from_unitary(np.kron(H, H), [2, 2])) < 1e-12
    placed = chicat.embed(h, [2, 2], [1])
    assert chicat.trace_distance(placed, chicat.chi_from_unitary(np.kron(np.eye(2), H), [2, 2])) < 1e-12


def test_json_round_trip(tmp_path):
    p = chicat.chi_from_unitary(CNOT, [2, 2])
    path = str(tmp_path / "cnot.json")
    chicat.save_chi(p, path)
    q = chicat.load_chi(path)
    assert np.array_equal(q.chi, p.chi)
    doc = json.loads(chicat.chi_to_json(p))
    doc["format_version"] = 2
    with pytest.raises(chicat.SchemaError):
        chicat.chi_from_json(json.dumps(doc))


def test_exact_concatenation_is_toffoli():
    assert chicat.trace_distance(chicat.concat_toffoli(), chicat.toffoli_chi()) < 1e-8


def test_table_values_and_effective_rabi():
    hz = chicat.table1_hz()
    assert hz["omega_r"] == pytest.approx(118e6)
    assert chicat.effective_rabi_hz({"omega_b": 100e6}) == pytest.approx(118e6 * 100e6 / (2 * 2e9))


def test_closed_cnot_simulation():
    out = chicat.simulate_gate("CNOT", n_traj=1, closed=True, blockade_mode="infinite")
    assert out["pulses"] == 5
    assert out["trace_distance"] < 1e-6


def test_lossy_cnot_is_seeded():
    a = chicat.simulate_gate("CNOT", n_traj=40, seed=3)
    b = chicat.simulate_gate("CNOT", n_traj=40, seed=3)
    assert np.array_equal(a["chi"].chi, b["chi"].chi)
    assert 0.0 < a["trace_distance"] < 0.5


def test_errors_map_to_python():
    with pytest.raises(chicat.ConfigError):
        chicat.simulate_gate("SWAP")
    with pytest.raises(chicat.ConfigError):
        chicat.simulate_gate("CNOT", params_hz={"omega_q": 1.0})


def test_cli_in_process(tmp_path):
    out = str(tmp_path / "run")
    code = chicat.cli_main(["gate-chi", "--traj", "2", "--override", "gate=identity", "--out", out])
    assert code == 0
    assert (tmp_path / "run" / "chi_identity.json").exists()
    assert chicat.cli_main(["gate-chi", "--override", "max_dim=8", "--out", out]) == 3
