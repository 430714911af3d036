import numpy as np
import pytest

from qecsim import debug_logger
from qecsim.circuit import Circuit, Layer, from_gates, run, transversal
from qecsim.errors import UsageError
from qecsim.gates import apply_gate, cnot, gate, rotation, toffoli
from qecsim.noise import NOISELESS, NoiseConfig, ScriptedStream, derive_stream
from qecsim.statevector import H, X, apply_controlled, apply_single, from_amplitudes, new_state


def fig1_circuit() -> Circuit:
    circuit = Circuit(2)
    circuit.append_gate(gate("H", 0))
    circuit.append_gate(cnot(0, 1))
    circuit.append_gate(gate("H", 0))
    return circuit.append_measure([0])


def random_state(n: int, seed: int):
    rng = np.random.default_rng(seed)
    return from_amplitudes(rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n))


def test_depth_and_packing():
    assert Circuit(2).depth() == 0
    assert Circuit(2).append_gate(gate("H", 0)).depth() == 1
    assert Circuit(2).append_gate(gate("H", 0)).append_gate(gate("H", 1)).depth() == 1
    assert Circuit(2).append_gate(gate("H", 0)).append_gate(gate("X", 0)).depth() == 2
    assert Circuit(2).append_gate(gate("H", 0)).append_gate(gate("H", 1), "new_layer").depth() == 2


def test_greedy_packs_behind_conflicts_only():
    circuit = from_gates(3, [cnot(0, 1), gate("H", 2), gate("X", 1), gate("Z", 2)])
    assert circuit.depth() == 2
    assert all(layer.is_disjoint() for layer in circuit.layers)


def test_sample_circuit_depth():
    assert fig1_circuit().depth() == 4


def test_out_of_range_qubit():
    with pytest.raises(UsageError):
        Circuit(2).append_gate(gate("H", 2))
    with pytest.raises(UsageError):
        Circuit(2).append_measure([5])


def test_run_width_mismatch():
    with pytest.raises(UsageError):
        run(Circuit(3), new_state(2), NOISELESS, ScriptedStream())


def test_sample_circuit_measurement_is_fair():
    _, record = run(fig1_circuit(), new_state(2), NOISELESS, ScriptedStream())
    assert len(record) == 1
    assert record[0].probability == pytest.approx(0.5)


def test_noiseless_run_matches_kernels():
    circuit = from_gates(3, [gate("H", 0), cnot(0, 2), rotation((0.1, 0.2, 0.3, 0.4), 1), toffoli(0, 1, 2)])
    ran, _ = run(circuit, random_state(3, 1), NOISELESS, derive_stream(0, 0))
    direct = random_state(3, 1)
    for layer in circuit.layers:
        for g in layer.gates:
            apply_gate(direct, g)
    assert np.allclose(ran.amplitudes, direct.amplitudes, atol=1e-12)


def test_forced_error_on_idle_layer():
    state = random_state(1, 2)
    expected = apply_single(state.copy(), X, 0)
    circuit = Circuit(1).append_idle()
    run(circuit, state, NoiseConfig(p=1.0), ScriptedStream(p=1.0, default_pauli="X"))
    assert np.allclose(state.amplitudes, expected.amplitudes)


def test_one_depolarizing_step_per_layer():
    circuit = fig1_circuit().append_reset([1]).append_idle()
    stream = ScriptedStream(p=0.5)
    run(circuit, new_state(2), NoiseConfig(p=0.5), stream)
    assert stream.depolarizing_calls == circuit.depth()


def test_gate_order_inside_a_layer_is_irrelevant():
    layer = Layer([gate("H", 0), cnot(1, 2), rotation((0.3, 0.1, 0.2, 0.5), 3)])
    swapped = Layer(list(reversed(layer.gates)))
    a, _ = run(Circuit(4, [layer]), random_state(4, 3), NOISELESS, ScriptedStream())
    b, _ = run(Circuit(4, [swapped]), random_state(4, 3), NOISELESS, ScriptedStream())
    assert np.allclose(a.amplitudes, b.amplitudes, atol=1e-12)


def test_runs_are_deterministic():
    circuit = fig1_circuit().append_reset([1])
    noise = NoiseConfig(p=0.2, sigma=0.05)
    first = run(circuit, new_state(2), noise, derive_stream(11, 4))
    second = run(circuit, new_state(2), noise, derive_stream(11, 4))
    assert first[1] == second[1]
    assert np.array_equal(first[0].amplitudes, second[0].amplitudes)


def test_reset_returns_zero():
    state = apply_single(new_state(1), H, 0)
    run(Circuit(1).append_reset([0]), state, NOISELESS, ScriptedStream(outcomes=[1]))
    assert abs(state.amplitudes[0]) == pytest.approx(1.0)


def test_inverse():
    circuit = from_gates(3, [gate("H", 0), gate("S", 1), cnot(0, 2), toffoli(0, 1, 2)])
    state = random_state(3, 5)
    before = state.amplitudes.copy()
    run(circuit, state, NOISELESS, ScriptedStream())
    run(circuit.inverse(), state, NOISELESS, ScriptedStream())
    assert np.allclose(state.amplitudes, before, atol=1e-12)
    with pytest.raises(UsageError):
        fig1_circuit().inverse()


def test_transversal_is_one_layer():
    assert transversal("H", range(7), 8).depth() == 1


def test_dump_lists_every_operation():
    text = fig1_circuit().dump()
    assert "CX 0,1" in text
    assert "M 0" in text
    assert text.count("\n") == 8


def test_cnot_layer_via_kernel():
    state = run(from_gates(2, [cnot(0, 1)]), from_amplitudes([0, 1, 0, 0]), NOISELESS, ScriptedStream())[0]
    assert np.allclose(state.amplitudes, apply_controlled(from_amplitudes([0, 1, 0, 0]), X, 0, 1).amplitudes)


def test_debug_dump_only_when_enabled(monkeypatch, capsys):
    circuit = fig1_circuit()
    debug_logger.log_circuit("sample", circuit)
    assert capsys.readouterr().out == ""
    monkeypatch.setattr(debug_logger, "DEBUG_CIRCUITS", True)
    debug_logger.log_circuit("sample", circuit)
    out = capsys.readouterr().out
    assert "--- sample (depth 4) ---" in out
    assert "M 0" in out
