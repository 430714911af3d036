"""
Error models: the per-step depolarizing channel and Gaussian angle noise,
plus the per-trial random streams that drive them.
"""
from dataclasses import replace
from typing import Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .gates import GateSpec
from .statevector import StateVector, apply_pauli

# Order of the error branches inside one depolarizing draw: [0, p/3) -> X, ...
DEPOLARIZING_BRANCHES = ("X", "Z", "Y")

# Measurement draws that make an outcome preferred whenever its probability exceeds 1e-9.
PREFER_ZERO = 1e-9
PREFER_ONE = 1.0 - 1e-9


class NoiseConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    p: float = Field(default=0.0, ge=0.0, le=1.0, description="depolarizing probability per qubit per layer")
    sigma: float = Field(default=0.0, ge=0.0, description="std-dev of the angle error in radians")
    master_seed: int = Field(default=0, ge=0, lt=2**64)


NOISELESS = NoiseConfig()


class RngStream:
    """Deterministic random source owned by one trial."""

    def __init__(self, generator: np.random.Generator):
        self._generator = generator

    def depolarizing_draws(self, n: int) -> np.ndarray:
        return self._generator.random(n)

    def measurement_draw(self) -> float:
        return float(self._generator.random())

    def normal(self, scale: float, size: int) -> np.ndarray:
        return self._generator.normal(0.0, scale, size)

    def uniform(self, size: int) -> np.ndarray:
        return self._generator.random(size)


def derive_stream(master_seed: int, trial_index: int) -> RngStream:
    """Independent stream for one trial; a pure function of (master_seed, trial_index)."""
    seed_sequence = np.random.SeedSequence(entropy=master_seed, spawn_key=(trial_index,))
    return RngStream(np.random.default_rng(seed_sequence))


def forced_branch_value(pauli: Optional[str], p: float) -> float:
    """A depolarizing draw that selects `pauli` (None: no error) at probability `p`."""
    if pauli is None:
        return 1.0
    return p * (2 * DEPOLARIZING_BRANCHES.index(pauli) + 1) / 6


class ScriptedStream(RngStream):
    """
    Stream with scripted draws, used to force noise branches and measurement outcomes.

    Args:
        p: depolarizing probability the scripted draws are calibrated for.
        faults: {slot: {qubit: pauli}}; slot counts depolarizing steps from 0.
        default_pauli: error every other qubit gets (None: no error).
        outcomes: preferred measurement outcomes, consumed in order; 0 afterwards.
    """

    def __init__(
        self,
        p: float = 1.0,
        faults: Optional[Dict[int, Dict[int, str]]] = None,
        default_pauli: Optional[str] = None,
        outcomes: Sequence[int] = (),
    ):
        super().__init__(np.random.default_rng(0))
        self.p = p
        self.faults = faults or {}
        self.default_pauli = default_pauli
        self.outcomes: List[int] = list(outcomes)
        self.depolarizing_calls = 0
        self.measurement_calls = 0

    def depolarizing_draws(self, n: int) -> np.ndarray:
        draws = np.full(n, forced_branch_value(self.default_pauli, self.p))
        for qubit, pauli in self.faults.get(self.depolarizing_calls, {}).items():
            if qubit < n:
                draws[qubit] = forced_branch_value(pauli, self.p)
        self.depolarizing_calls += 1
        return draws

    def measurement_draw(self) -> float:
        index = self.measurement_calls
        self.measurement_calls += 1
        preferred = self.outcomes[index] if index < len(self.outcomes) else 0
        return PREFER_ONE if preferred else PREFER_ZERO

    def normal(self, scale: float, size: int) -> np.ndarray:
        return np.zeros(size)


def depolarizing_branch(u: float, p: float) -> Optional[str]:
    """Pauli picked by a uniform draw: [0, p/3) X, [p/3, 2p/3) Z, [2p/3, p) Y, otherwise none."""
    if u >= p:
        return None
    return DEPOLARIZING_BRANCHES[min(int(u / (p / 3)), 2)]


def depolarize_step(state: StateVector, p: float, rng: RngStream) -> StateVector:
    """With probability p/3 each apply X, Z or Y to every qubit independently."""
    if p <= 0.0:
        return state
    draws = rng.depolarizing_draws(state.n_qubits)
    for q in np.flatnonzero(draws < p):
        apply_pauli(state, depolarizing_branch(float(draws[q]), p), int(q))
    return state


def perturb_angles(gate: GateSpec, sigma: float, rng: RngStream) -> GateSpec:
    """Add an independent N(0, sigma^2) deviation to each of the gate's four angles."""
    if sigma <= 0.0:
        return gate
    deltas = rng.normal(sigma, 4)
    angles = tuple(float(a + d) for a, d in zip(gate.angles, deltas))
    return replace(gate, angles=angles)
