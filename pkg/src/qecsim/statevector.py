"""
Dense pure-state storage and the gate kernels that act on it.

Basis convention: for basis index b, bit k of b is the value of qubit k
(qubit 0 is the least significant bit). Every circuit in the package is
written against this convention.
"""
from dataclasses import dataclass
from typing import Iterator, Sequence, Tuple

import numpy as np

from .config import KERNEL_BLOCK_QUBITS, MAX_QUBITS
from .errors import ConfigurationError, NumericalError, UsageError

DEGENERATE_NORM = 1e-12

# Single-qubit matrices
X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
H = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2.0)
S = np.array([[1, 0], [0, 1j]], dtype=np.complex128)


@dataclass
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.amplitudes, self.amplitudes).real))

    def tensor(self) -> np.ndarray:
        """View of the amplitudes as an n-axis (2, 2, ..., 2) array; axis n-1-k is qubit k."""
        return self.amplitudes.reshape((2,) * self.n_qubits)


def _axis(n_qubits: int, qubit: int) -> int:
    return n_qubits - 1 - qubit


def _check_qubit(state: StateVector, qubit: int) -> None:
    if not 0 <= qubit < state.n_qubits:
        raise UsageError(f"qubit {qubit} out of range for a {state.n_qubits}-qubit register")


def _check_distinct(state: StateVector, qubits: Sequence[int]) -> None:
    for q in qubits:
        _check_qubit(state, q)
    if len(set(qubits)) != len(qubits):
        raise UsageError(f"qubit indices must be pairwise distinct, got {list(qubits)}")


def new_state(n_qubits: int) -> StateVector:
    """Return |0...0> on `n_qubits` qubits."""
    if not 1 <= n_qubits <= MAX_QUBITS:
        raise ConfigurationError(f"n_qubits must be in [1, {MAX_QUBITS}], got {n_qubits}")
    amplitudes = np.zeros(1 << n_qubits, dtype=np.complex128)
    amplitudes[0] = 1.0
    return StateVector(n_qubits, amplitudes)


def from_amplitudes(amplitudes: Sequence[complex]) -> StateVector:
    """Wrap (and normalise) an explicit amplitude list."""
    arr = np.array(amplitudes, dtype=np.complex128)
    size = arr.shape[0]
    if size < 2 or size & (size - 1):
        raise ConfigurationError(f"amplitude count must be a power of two >= 2, got {size}")
    norm = np.linalg.norm(arr)
    if norm < DEGENERATE_NORM:
        raise NumericalError("cannot build a state from a zero vector")
    return StateVector(size.bit_length() - 1, arr / norm)


def _blocks(view: np.ndarray) -> Iterator[Tuple[int, ...]]:
    """Indices that cut `view` into blocks of at most 2**KERNEL_BLOCK_QUBITS amplitudes."""
    return np.ndindex(*view.shape[: max(view.ndim - KERNEL_BLOCK_QUBITS, 0)])


def _block_scratch(view: np.ndarray) -> np.ndarray:
    return np.empty(view.shape[max(view.ndim - KERNEL_BLOCK_QUBITS, 0):], dtype=view.dtype)


def _halves(state: StateVector, target: int, controls: Tuple[int, ...] = ()) -> Tuple[np.ndarray, np.ndarray]:
    """
    Views of the amplitudes with the target bit 0 and 1.

    Controls pin their axes to 1. The target axis is kept (length 1) so both
    halves stay writable views even on a one-qubit register.
    """
    n = state.n_qubits
    index = [slice(None)] * n
    for c in controls:
        index[_axis(n, c)] = 1
    index0 = list(index)
    index1 = list(index)
    index0[_axis(n, target)] = slice(0, 1)
    index1[_axis(n, target)] = slice(1, 2)
    tensor = state.tensor()
    return tensor[tuple(index0)], tensor[tuple(index1)]


def _apply_on_subspace(state: StateVector, u: np.ndarray, target: int, controls: Tuple[int, ...]) -> None:
    # Pairs (i0, i1) differ only in the target bit; updated block by block in place.
    half0, half1 = _halves(state, target, controls)
    saved = _block_scratch(half0)
    term = np.empty_like(saved)
    for idx in _blocks(half0):
        a0, a1 = half0[idx], half1[idx]
        np.copyto(saved, a0)
        np.multiply(a1, u[0, 1], out=term)
        a0 *= u[0, 0]
        a0 += term
        np.multiply(saved, u[1, 0], out=term)
        a1 *= u[1, 1]
        a1 += term


def apply_single(state: StateVector, u: np.ndarray, target: int) -> StateVector:
    """Apply the 2x2 unitary `u` to `target` (I x ... x U x ... x I), in place."""
    _check_qubit(state, target)
    _apply_on_subspace(state, u, target, ())
    return state


def apply_controlled(state: StateVector, u: np.ndarray, control: int, target: int) -> StateVector:
    """Apply `u` to `target` on the subspace where `control` is 1."""
    _check_distinct(state, (control, target))
    _apply_on_subspace(state, u, target, (control,))
    return state


def apply_double_controlled(state: StateVector, u: np.ndarray, c1: int, c2: int, target: int) -> StateVector:
    """Apply `u` to `target` where both `c1` and `c2` are 1 (Toffoli for u = X)."""
    _check_distinct(state, (c1, c2, target))
    _apply_on_subspace(state, u, target, (c1, c2))
    return state


def apply_x(state: StateVector, target: int) -> StateVector:
    _check_qubit(state, target)
    half0, half1 = _halves(state, target)
    saved = _block_scratch(half0)
    for idx in _blocks(half0):
        np.copyto(saved, half0[idx])
        np.copyto(half0[idx], half1[idx])
        np.copyto(half1[idx], saved)
    return state


def apply_z(state: StateVector, target: int) -> StateVector:
    _check_qubit(state, target)
    index = [slice(None)] * state.n_qubits
    index[_axis(state.n_qubits, target)] = 1
    state.tensor()[tuple(index)] *= -1
    return state


def apply_y(state: StateVector, target: int) -> StateVector:
    # Y = i X Z
    apply_z(state, target)
    apply_x(state, target)
    state.amplitudes *= 1j
    return state


PAULI_KERNELS = {"X": apply_x, "Y": apply_y, "Z": apply_z}


def apply_pauli(state: StateVector, pauli: str, target: int) -> StateVector:
    if pauli == "I":
        return state
    return PAULI_KERNELS[pauli](state, target)


def probability_of_zero(state: StateVector, q: int) -> float:
    _check_qubit(state, q)
    half, _ = _halves(state, q)
    return float(sum(np.vdot(half[idx], half[idx]).real for idx in _blocks(half)))


def collapse(state: StateVector, q: int, bit: int) -> float:
    """Project qubit `q` onto `bit` and renormalise; returns the branch probability."""
    n = state.n_qubits
    index = [slice(None)] * n
    index[_axis(n, q)] = 1 - bit
    tensor = state.tensor()
    tensor[tuple(index)] = 0.0
    norm = state.norm()
    if norm < DEGENERATE_NORM:
        raise NumericalError(f"collapsing qubit {q} onto {bit} leaves a zero-norm state")
    state.amplitudes /= norm
    return float(norm * norm)


def measure(state: StateVector, q: int, r: float) -> Tuple[int, StateVector]:
    """
    Projective Z measurement of qubit `q`.

    Args:
        state: normalised register, collapsed in place.
        q: qubit to measure.
        r: uniform draw in [0, 1); the outcome is 0 iff r < P(q = 0).

    Returns:
        (bit, state) with the state renormalised to 1.
    """
    p0 = probability_of_zero(state, q)
    bit = 0 if r < p0 else 1
    collapse(state, q, bit)
    return bit, state


def data_fidelity(
    state: StateVector,
    reference: StateVector,
    data_qubits: Sequence[int],
    ancilla_qubits: Sequence[int],
) -> float:
    """
    Overlap of `state` with `reference` on `data_qubits`, ancillas traced out.

    Computes sum_a |<reference (x) a | state>|^2 over ancilla basis states a by
    contracting the amplitude tensor; `state` is left untouched. Bit j of a
    reference index is the value of data_qubits[j].
    """
    data_qubits = list(data_qubits)
    ancilla_qubits = list(ancilla_qubits)
    n = state.n_qubits
    if sorted(data_qubits + ancilla_qubits) != list(range(n)):
        raise UsageError("data and ancilla qubits must partition the register")
    if reference.n_qubits != len(data_qubits):
        raise UsageError(
            f"reference has {reference.n_qubits} qubits but {len(data_qubits)} data qubits were given"
        )
    # Most significant data qubit first so the flattened index matches the reference.
    order = [_axis(n, q) for q in reversed(data_qubits)] + [_axis(n, q) for q in reversed(ancilla_qubits)]
    matrix = np.transpose(state.tensor(), order).reshape(1 << len(data_qubits), -1)
    projected = reference.amplitudes.conj() @ matrix
    return float(min(1.0, np.vdot(projected, projected).real))
