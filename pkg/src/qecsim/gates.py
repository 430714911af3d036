"""
Gate descriptions.

Every single-qubit gate is stored as four angles (alpha, beta, gamma, delta)
with U = exp(i*alpha) Rz(beta) Ry(gamma) Rz(delta), so operational noise can
perturb any gate, named or not. Controls come first in `qubits`, the target last.
"""
import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Dict, Tuple

import numpy as np

from .errors import UsageError
from .statevector import (
    StateVector,
    apply_controlled,
    apply_double_controlled,
    apply_pauli,
    apply_single,
)

Angles = Tuple[float, float, float, float]

PI = math.pi

CANONICAL_ANGLES: Dict[str, Angles] = {
    "I": (0.0, 0.0, 0.0, 0.0),
    "H": (PI / 2, 0.0, PI / 2, PI),
    "X": (PI / 2, 0.0, PI, PI),
    "Y": (PI / 2, 0.0, PI, 0.0),
    "Z": (PI / 2, PI, 0.0, 0.0),
    "S": (PI / 4, PI / 2, 0.0, 0.0),
}
HERMITIAN_KINDS = {"I", "H", "X", "Y", "Z"}


def euler_unitary(alpha: float, beta: float, gamma: float, delta: float) -> np.ndarray:
    """exp(i*alpha) Rz(beta) Ry(gamma) Rz(delta); unitary for every angle."""
    c = math.cos(gamma / 2)
    s = math.sin(gamma / 2)
    plus = (beta + delta) / 2
    minus = (beta - delta) / 2
    u = np.exp(1j * alpha) * np.array(
        [
            [np.exp(-1j * plus) * c, -np.exp(-1j * minus) * s],
            [np.exp(1j * minus) * s, np.exp(1j * plus) * c],
        ],
        dtype=np.complex128,
    )
    return u


@lru_cache(maxsize=None)
def _cached_unitary(angles: Angles) -> np.ndarray:
    u = euler_unitary(*angles)
    u.setflags(write=False)
    return u


@dataclass(frozen=True)
class GateSpec:
    kind: str
    qubits: Tuple[int, ...]
    angles: Angles

    @property
    def arity(self) -> int:
        """Number of controls (0, 1 or 2)."""
        return len(self.qubits) - 1

    @property
    def target(self) -> int:
        return self.qubits[-1]

    @property
    def controls(self) -> Tuple[int, ...]:
        return self.qubits[:-1]

    def is_ideal(self) -> bool:
        return self.kind in CANONICAL_ANGLES and self.angles == CANONICAL_ANGLES[self.kind]

    def unitary(self) -> np.ndarray:
        if self.is_ideal():
            return _cached_unitary(self.angles)
        return euler_unitary(*self.angles)

    def adjoint(self) -> "GateSpec":
        if self.kind in HERMITIAN_KINDS and self.is_ideal():
            return self
        alpha, beta, gamma, delta = self.angles
        return replace(self, kind="ROT", angles=(-alpha, -delta, -gamma, -beta))

    def describe(self) -> str:
        prefix = "C" * self.arity
        qubits = ",".join(str(q) for q in self.qubits)
        angles = " ".join(f"{a:+.6f}" for a in self.angles)
        return f"{prefix}{self.kind} {qubits} {angles}"


def gate(kind: str, *qubits: int) -> GateSpec:
    """Named gate on `qubits` (controls first, target last)."""
    if kind not in CANONICAL_ANGLES:
        raise UsageError(f"unknown gate kind {kind!r}")
    if not 1 <= len(qubits) <= 3:
        raise UsageError("a gate acts on one target and at most two controls")
    return GateSpec(kind, tuple(qubits), CANONICAL_ANGLES[kind])


def rotation(angles: Angles, *qubits: int) -> GateSpec:
    return GateSpec("ROT", tuple(qubits), tuple(float(a) for a in angles))


def cnot(control: int, target: int) -> GateSpec:
    return gate("X", control, target)


def cz(control: int, target: int) -> GateSpec:
    return gate("Z", control, target)


def toffoli(c1: int, c2: int, target: int) -> GateSpec:
    return gate("X", c1, c2, target)


def apply_gate(state: StateVector, g: GateSpec) -> StateVector:
    if g.arity == 0:
        if g.kind in ("X", "Y", "Z", "I") and g.is_ideal():
            return apply_pauli(state, g.kind, g.target)
        return apply_single(state, g.unitary(), g.target)
    if g.arity == 1:
        return apply_controlled(state, g.unitary(), g.controls[0], g.target)
    return apply_double_controlled(state, g.unitary(), g.controls[0], g.controls[1], g.target)
