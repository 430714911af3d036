import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qecsim.errors import UsageError
from qecsim.gates import CANONICAL_ANGLES, apply_gate, cnot, euler_unitary, gate, rotation, toffoli
from qecsim.statevector import H, S, X, Y, Z, apply_controlled, apply_double_controlled, apply_single, from_amplitudes

NAMED = {"I": np.eye(2), "H": H, "X": X, "Y": Y, "Z": Z, "S": S}


@pytest.mark.parametrize("kind", sorted(CANONICAL_ANGLES))
def test_canonical_angles_rebuild_named_gates(kind):
    assert np.allclose(gate(kind, 0).unitary(), NAMED[kind], atol=1e-12)


@given(st.tuples(*[st.floats(-10, 10, allow_nan=False)] * 4))
def test_any_angles_give_a_unitary(a):
    u = euler_unitary(*a)
    assert np.allclose(u.conj().T @ u, np.eye(2), atol=1e-12)


@given(st.tuples(*[st.floats(-10, 10, allow_nan=False)] * 4))
def test_adjoint_inverts(a):
    g = rotation(a, 0)
    assert np.allclose(g.adjoint().unitary() @ g.unitary(), np.eye(2), atol=1e-12)


def test_hermitian_gates_are_their_own_adjoint():
    assert gate("H", 1).adjoint() == gate("H", 1)
    s = gate("S", 0)
    assert np.allclose(s.adjoint().unitary(), S.conj().T, atol=1e-12)


def test_controls_first_target_last():
    g = toffoli(0, 1, 2)
    assert g.controls == (0, 1)
    assert g.target == 2
    assert g.arity == 2
    assert cnot(3, 1).describe().startswith("CX 3,1")


def test_bad_gates():
    with pytest.raises(UsageError):
        gate("T", 0)
    with pytest.raises(UsageError):
        gate("X", 0, 1, 2, 3)


def test_apply_gate_dispatch():
    rng = np.random.default_rng(4)
    amplitudes = rng.normal(size=8) + 1j * rng.normal(size=8)
    for g, reference in [
        (gate("Y", 1), lambda s: apply_single(s, Y, 1)),
        (gate("H", 2), lambda s: apply_single(s, H, 2)),
        (cnot(2, 0), lambda s: apply_controlled(s, X, 2, 0)),
        (toffoli(0, 2, 1), lambda s: apply_double_controlled(s, X, 0, 2, 1)),
        (rotation((0.1, 0.2, 0.3, 0.4), 0), lambda s: apply_single(s, euler_unitary(0.1, 0.2, 0.3, 0.4), 0)),
    ]:
        fast = apply_gate(from_amplitudes(amplitudes), g)
        slow = reference(from_amplitudes(amplitudes))
        assert np.allclose(fast.amplitudes, slow.amplitudes, atol=1e-12), g.describe()
