# Copyright 2026 The adiabopt Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import numpy as np
import pytest

import adiabopt as ao


def test_pauli_and_kron():
    z = ao.pauli(ao.Pauli.Z)
    assert np.allclose(z, np.diag([1.0, -1.0]))
    minus = ao.pauli(ao.Pauli.Minus)
    assert np.allclose(minus @ np.array([1.0, 0.0]), [0.0, 1.0])
    assert np.allclose(ao.kron(z, np.eye(2)), np.kron(z, np.eye(2)))


def test_hermitian_eig_matches_numpy():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    h = a + a.conj().T
    values, vectors = ao.hermitian_eig(h)
    assert np.allclose(values, np.linalg.eigvalsh(h))
    assert np.allclose(h @ vectors, vectors * values)


def test_aep_bundle_ground_states():
    spec = ao.build_aep()
    assert spec.n_qubits == 2 and spec.dim == 4 and spec.n_controls == 2
    bell = ao.bell_state()
    h2 = spec.hamiltonians[1]
    assert np.allclose(h2 @ bell, -2.0 * bell)
    assert spec.initial[3, 3] == pytest.approx(1.0)


def test_dephasing_decay():
    spec = ao.build_aep()
    grid = ao.TimeGrid(2.0, 40)
    channel = ao.build_channel(ao.NoiseKind.Dephasing, 2, 0.1)
    controls = np.zeros((2, 40))
    controls[1, :] = 1.0
    states = ao.propagate(spec, controls, grid, channel)
    assert len(states) == 41
    for rho in states:
        assert np.trace(rho).real == pytest.approx(1.0, abs=1e-10)
        assert np.allclose(rho, rho.conj().T, atol=1e-12)
    pops = ao.populations(spec, controls, grid, channel)
    assert pops.shape == (41, 4)
    assert np.allclose(pops.sum(axis=1), 1.0)


def test_uhlmann_fidelity_of_pure_states():
    spec = ao.build_aep()
    assert ao.uhlmann_fidelity(spec.target, spec.target) == pytest.approx(1.0)
    assert ao.uhlmann_fidelity(spec.initial, spec.target) == pytest.approx(0.5)


def test_krotov_improves_monotonically():
    spec = ao.build_aep()
    grid = ao.TimeGrid(5.0, 200)
    channel = ao.build_channel(ao.NoiseKind.AmplitudeDamping, 2, 0.05)
    options = ao.KrotovOptions()
    options.lambda_ = 0.1
    options.shape = ao.UpdateShape.Flat
    options.max_iters = 15
    result = ao.optimize(spec, channel, grid, options)
    trace = np.asarray(result.objective_trace)
    assert len(trace) == result.iterations_used + 1
    assert np.all(np.diff(trace) >= -1e-10)
    assert trace[-1] > trace[0]
    assert result.controls.shape == (2, 200)

    again = ao.optimize(spec, channel, grid, options, guess=result.controls)
    assert again.objective_trace[0] == pytest.approx(trace[-1], abs=1e-12)


def test_mean_teleport_fidelity_is_seeded():
    cfg = ao.default_config(ao.ProtocolKind.Atp3)
    spec, grid = cfg.protocol_spec(), cfg.grid()
    controls = cfg.initial_controls()
    channel = cfg.channel(0.1)
    a = ao.mean_teleport_fidelity(spec, controls, grid, channel, 200, 7)
    b = ao.mean_teleport_fidelity(spec, controls, grid, channel, 200, 7)
    assert a == b
    assert 0.0 <= a <= 1.0


def test_config_parsing_and_errors():
    cfg = ao.parse_config(
        "[scenario]\nprotocol = atp3\nlocal_field = y2\nnoise = amplitude_damping\ngamma = 0:0.1:3\n"
        "[krotov]\nshape = flat\n"
    )
    assert cfg.protocol == ao.ProtocolKind.Atp3
    assert cfg.local_field.label == "y2"
    assert cfg.gamma_values == pytest.approx([0.0, 0.05, 0.1])
    assert cfg.shape == ao.UpdateShape.Flat
    assert cfg.tag() == "atp3-y2_amplitude_damping"

    with pytest.raises(ao.Error, match="ConfigError"):
        ao.parse_config("[scenario]\nbogus = 1\n")
    with pytest.raises(ao.Error):
        ao.build_channel(ao.NoiseKind.Dephasing, 2, -1.0)


def test_sweep_and_csv():
    cfg = ao.default_config(ao.ProtocolKind.Aep)
    cfg.gamma_values = [0.0, 0.1]
    cfg.n_steps = 50
    cfg.max_iters = 3
    records = ao.run_sweep(cfg)
    assert [r.gamma for r in records] == [0.0, 0.1]
    assert all(r.fidelity_nonunitary_opt is not None for r in records)
    text = ao.sweep_csv(cfg, records)
    lines = text.splitlines()
    assert lines[0].startswith("# adiabopt")
    header = next(line for line in lines if not line.startswith("#"))
    assert header.startswith("gamma,fidelity_unitary_opt,fidelity_nonunitary_opt")
    assert ao.sweep_csv(cfg, ao.run_sweep(cfg)) == text
