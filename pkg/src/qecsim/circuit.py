"""
Depth-layered gate schedules.

Depth is the noise clock: after every layer, gates included, measured and
reset qubits included, one depolarizing step hits every qubit of the register.
"""
from dataclasses import dataclass, field
from typing import Iterable, List, Literal, Optional, Sequence, Set, Tuple

from .errors import UsageError
from .gates import GateSpec, apply_gate, gate
from .noise import NoiseConfig, RngStream, depolarize_step, perturb_angles
from .statevector import StateVector, apply_x, measure, probability_of_zero

Packing = Literal["greedy", "new_layer"]


@dataclass(frozen=True)
class Outcome:
    """One measurement (or reset) result and the probability of the branch taken."""

    qubit: int
    bit: int
    probability: float
    kind: str = "measure"


@dataclass
class Layer:
    gates: List[GateSpec] = field(default_factory=list)
    measures: List[int] = field(default_factory=list)
    resets: List[int] = field(default_factory=list)

    def qubits(self) -> Set[int]:
        used: Set[int] = set(self.measures) | set(self.resets)
        for g in self.gates:
            used.update(g.qubits)
        return used

    def is_disjoint(self) -> bool:
        seen: Set[int] = set()
        touched = [q for g in self.gates for q in g.qubits] + self.measures + self.resets
        for q in touched:
            if q in seen:
                return False
            seen.add(q)
        return True


@dataclass
class Circuit:
    n_qubits: int
    layers: List[Layer] = field(default_factory=list)

    def depth(self) -> int:
        return len(self.layers)

    def _check(self, qubits: Iterable[int]) -> None:
        for q in qubits:
            if not 0 <= q < self.n_qubits:
                raise UsageError(f"qubit {q} out of range for a {self.n_qubits}-qubit circuit")

    def _slot(self, qubits: Set[int], packing: Packing) -> Layer:
        if packing == "new_layer" or not self.layers:
            self.layers.append(Layer())
            return self.layers[-1]
        # Walk back from the end until a layer touches one of our qubits.
        index = len(self.layers)
        while index > 0 and not (self.layers[index - 1].qubits() & qubits):
            index -= 1
        if index == len(self.layers):
            self.layers.append(Layer())
        return self.layers[index]

    def append_gate(self, g: GateSpec, packing: Packing = "greedy") -> "Circuit":
        self._check(g.qubits)
        if len(set(g.qubits)) != len(g.qubits):
            raise UsageError(f"gate {g.describe()} repeats a qubit")
        self._slot(set(g.qubits), packing).gates.append(g)
        return self

    def append_measure(self, qubits: Sequence[int], packing: Packing = "greedy") -> "Circuit":
        self._check(qubits)
        layer = self._slot(set(qubits), packing)
        layer.measures.extend(qubits)
        return self

    def append_reset(self, qubits: Sequence[int], packing: Packing = "greedy") -> "Circuit":
        self._check(qubits)
        layer = self._slot(set(qubits), packing)
        layer.resets.extend(qubits)
        return self

    def append_idle(self) -> "Circuit":
        """An empty layer: nothing happens but the register still decoheres once."""
        self.layers.append(Layer())
        return self

    def extend(self, other: "Circuit", packing: Packing = "new_layer") -> "Circuit":
        """Append every operation of `other`, layer by layer."""
        if other.n_qubits > self.n_qubits:
            raise UsageError("cannot extend a circuit with a wider one")
        for layer in other.layers:
            if packing == "new_layer":
                self.layers.append(
                    Layer(list(layer.gates), list(layer.measures), list(layer.resets))
                )
                continue
            for g in layer.gates:
                self.append_gate(g, packing)
            if layer.measures:
                self.append_measure(layer.measures, packing)
            if layer.resets:
                self.append_reset(layer.resets, packing)
        return self

    def inverse(self) -> "Circuit":
        """Layers reversed, every gate replaced by its adjoint (unitary circuits only)."""
        inverted = Circuit(self.n_qubits)
        for layer in reversed(self.layers):
            if layer.measures or layer.resets:
                raise UsageError("a circuit with measurements has no inverse")
            inverted.layers.append(Layer([g.adjoint() for g in reversed(layer.gates)]))
        return inverted

    def dump(self) -> str:
        """One gate per line: kind, qubits, angles; measurements and resets as M / R lines."""
        lines = [f"# qubits {self.n_qubits} depth {self.depth()}"]
        for index, layer in enumerate(self.layers):
            lines.append(f"layer {index}")
            lines.extend(g.describe() for g in layer.gates)
            lines.extend(f"M {q}" for q in layer.measures)
            lines.extend(f"R {q}" for q in layer.resets)
        return "\n".join(lines)


def from_gates(n_qubits: int, gates: Iterable[GateSpec], packing: Packing = "greedy") -> Circuit:
    circuit = Circuit(n_qubits)
    for g in gates:
        circuit.append_gate(g, packing)
    return circuit


def transversal(kind: str, qubits: Sequence[int], n_qubits: int) -> Circuit:
    """Depth-1 circuit applying `kind` to every qubit in `qubits`."""
    return from_gates(n_qubits, (gate(kind, q) for q in qubits))


def _measure(state: StateVector, q: int, rng: RngStream, kind: str) -> Outcome:
    p0 = probability_of_zero(state, q)
    bit, _ = measure(state, q, rng.measurement_draw())
    return Outcome(q, bit, p0 if bit == 0 else 1.0 - p0, kind)


def run(
    circuit: Circuit,
    state: StateVector,
    noise: NoiseConfig,
    rng: RngStream,
    record: Optional[List[Outcome]] = None,
) -> Tuple[StateVector, List[Outcome]]:
    """
    Execute `circuit` on `state` in place.

    For each layer: gates (angle-perturbed when sigma > 0), then measurements
    and resets, then one depolarizing step over the whole register.

    Returns:
        (state, record) where record lists every measurement/reset outcome;
        outcomes are appended to `record` when one is passed in.
    """
    if state.n_qubits != circuit.n_qubits:
        raise UsageError(
            f"circuit is {circuit.n_qubits} qubits wide but the state has {state.n_qubits}"
        )
    if record is None:
        record = []
    for layer in circuit.layers:
        for g in layer.gates:
            apply_gate(state, perturb_angles(g, noise.sigma, rng))
        for q in layer.measures:
            record.append(_measure(state, q, rng, "measure"))
        for q in layer.resets:
            outcome = _measure(state, q, rng, "reset")
            if outcome.bit:
                apply_x(state, q)
            record.append(outcome)
        depolarize_step(state, noise.p, rng)
    return state, record
