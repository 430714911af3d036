"""
The three distance-3 codes as executable circuit bundles.

Register layout: block qubits 0..n_block-1, syndrome ancillas after them.
Circuit reconstructions (depths are what the circuits measure, not targets):

  nine   data on qubit 0; encoder depth 5, decode+majority-vote depth 7.
  seven  data on qubit 2, pivots 0, 1, 3; encoder depth 5; decoder = encoder reversed.
  five   data on qubit 0; encoder depth 8; decoder = encoder reversed.
"""
import logging
from dataclasses import dataclass, replace
from functools import lru_cache
from itertools import product
from typing import Dict, List, Literal, Optional, Sequence, Tuple

from tenacity import RetryError, Retrying, after_log, retry_if_exception_type, stop_after_attempt

from .circuit import Circuit, Layer, Outcome, from_gates, run, transversal
from .config import SHOR_MAX_ATTEMPTS
from .debug_logger import log_circuit
from .errors import ConfigurationError, ShorPreparationError, UsageError
from .gates import GateSpec, cnot, cz, gate, toffoli
from .noise import NOISELESS, NoiseConfig, RngStream, ScriptedStream
from .statevector import StateVector, apply_x, data_fidelity, new_state

log = logging.getLogger("qecsim.codes")

CodeName = Literal["five", "seven", "nine"]
AncillaMode = Literal["one_qubit", "four_qubit_shor"]
Correction = Tuple[str, int]

SHOR_STATE_SIZE = 4


@dataclass(frozen=True)
class CodeSpec:
    name: str
    ancilla_mode: str
    n_block: int
    n_ancilla: int
    data_qubit: int
    encoder: Circuit
    decoder: Circuit
    generators: Tuple[str, ...]
    syndrome_rounds: Tuple[Circuit, ...]
    correction_table: Dict[Tuple[int, ...], Tuple[Correction, ...]]
    logical_zero: StateVector
    logical_one: StateVector

    @property
    def n_total(self) -> int:
        return self.n_block + self.n_ancilla

    @property
    def block_qubits(self) -> Tuple[int, ...]:
        return tuple(range(self.n_block))

    @property
    def ancilla_qubits(self) -> Tuple[int, ...]:
        return tuple(range(self.n_block, self.n_total))


@dataclass(frozen=True)
class SyndromeRecord:
    bits: Tuple[int, ...]
    applied_correction: Tuple[Correction, ...] = ()
    outcomes: Tuple[Outcome, ...] = ()


class _ShorStateRejected(Exception):
    pass


# ------------- PAULI ALGEBRA -------------

def _anticommutes(a: str, b: str) -> bool:
    clashes = sum(1 for x, y in zip(a, b) if x != "I" and y != "I" and x != y)
    return clashes % 2 == 1


def pauli_syndrome(generators: Sequence[str], error: str) -> Tuple[int, ...]:
    """Syndrome bit i is 1 when `error` anticommutes with generator i (eigenvalue -1)."""
    return tuple(int(_anticommutes(g, error)) for g in generators)


def _single_error(n: int, pauli: str, qubit: int) -> str:
    return "I" * qubit + pauli + "I" * (n - qubit - 1)


def _lookup_table_by_enumeration(generators: Sequence[str], n: int) -> Dict[Tuple[int, ...], Tuple[Correction, ...]]:
    """Syndrome -> correction for the identity and all 3n single-qubit Paulis."""
    table: Dict[Tuple[int, ...], Tuple[Correction, ...]] = {pauli_syndrome(generators, "I" * n): ()}
    for qubit in range(n):
        for pauli in "XZY":
            syndrome = pauli_syndrome(generators, _single_error(n, pauli, qubit))
            if syndrome in table:
                raise ConfigurationError(f"syndrome {syndrome} is ambiguous for {pauli}{qubit}")
            table[syndrome] = ((pauli, qubit),)
    return table


def _css_lookup_table(generators: Sequence[str], n: int) -> Dict[Tuple[int, ...], Tuple[Correction, ...]]:
    """Independent X and Z decoding: one X and one Z correction per round."""
    table: Dict[Tuple[int, ...], Tuple[Correction, ...]] = {}
    for x_pos, z_pos in product([None, *range(n)], repeat=2):
        error = ["I"] * n
        corrections: List[Correction] = []
        if x_pos is not None:
            error[x_pos] = "X"
        if z_pos is not None:
            error[z_pos] = "Y" if error[z_pos] == "X" else "Z"
        for qubit, pauli in enumerate(error):
            if pauli != "I":
                corrections.append((pauli, qubit))
        syndrome = pauli_syndrome(generators, "".join(error))
        if syndrome in table:
            raise ConfigurationError(f"CSS syndrome {syndrome} is ambiguous")
        table[syndrome] = tuple(corrections)
    return table


# ------------- ENCODERS -------------

def _nine_encoder(width: int) -> Circuit:
    return from_gates(width, [
        cnot(0, 3), cnot(0, 6),
        gate("H", 0), gate("H", 3), gate("H", 6),
        cnot(0, 1), cnot(3, 4), cnot(6, 7),
        cnot(0, 2), cnot(3, 5), cnot(6, 8),
    ])


def _nine_decoder(width: int) -> Circuit:
    # Bit-flip decode with majority vote per block, then the same for phase flips.
    return from_gates(width, [
        cnot(0, 2), cnot(3, 5), cnot(6, 8),
        cnot(0, 1), cnot(3, 4), cnot(6, 7),
        toffoli(1, 2, 0), toffoli(4, 5, 3), toffoli(7, 8, 6),
        gate("H", 0), gate("H", 3), gate("H", 6),
        cnot(0, 3), cnot(0, 6),
        toffoli(3, 6, 0),
    ])


def _seven_encoder(width: int) -> Circuit:
    # Data on qubit 2 fans out to the logical-X support {2, 4, 5}; pivots 0, 1, 3
    # then add the three rows of the Hamming parity-check matrix.
    return from_gates(width, [
        cnot(2, 4), gate("H", 0), gate("H", 1), gate("H", 3),
        cnot(2, 5), cnot(0, 6), cnot(3, 4),
        cnot(0, 4), cnot(1, 2), cnot(3, 5),
        cnot(0, 2), cnot(1, 5), cnot(3, 6),
        cnot(1, 6),
    ])


def _five_encoder(width: int) -> Circuit:
    gates: List[GateSpec] = [gate("Z", 0)]
    gates += [gate("H", q) for q in range(1, 5)]
    gates += [cnot(q, 0) for q in (4, 3, 2, 1)]
    gates += [cz(0, 4), cz(1, 2), cz(3, 4), cz(0, 1), cz(2, 3)]
    return from_gates(width, gates)


HAMMING_ROWS = ((0, 2, 4, 6), (1, 2, 5, 6), (3, 4, 5, 6))


def _support_string(n: int, pauli: str, support: Sequence[int]) -> str:
    return "".join(pauli if q in support else "I" for q in range(n))


SEVEN_GENERATORS = tuple(
    [_support_string(7, "Z", row) for row in HAMMING_ROWS]
    + [_support_string(7, "X", row) for row in HAMMING_ROWS]
)
FIVE_GENERATORS = ("XZZXI", "IXZZX", "XIXZZ", "ZXIXZ")


# ------------- SYNDROME ROUNDS -------------

def _one_ancilla_round(generator: str, ancilla: int, width: int) -> Circuit:
    """
    Reset, couple the generator into the ancilla, measure it.

    Every generator goes through H, controlled-P from the ancilla, H, so a
    Z-type round is the transversal-H image of the matching X-type round.
    """
    circuit = Circuit(width).append_reset([ancilla]).append_gate(gate("H", ancilla))
    for q, pauli in enumerate(generator):
        if pauli != "I":
            circuit.append_gate(gate(pauli, ancilla, q))
    circuit.append_gate(gate("H", ancilla))
    return circuit.append_measure([ancilla])


def _shor_coupling_round(generator: str, ancillas: Sequence[int], width: int) -> Circuit:
    """Transversal coupling of one weight-4 CSS generator into a prepared Shor state."""
    support = [q for q, p in enumerate(generator) if p != "I"]
    if len(support) != SHOR_STATE_SIZE:
        raise ConfigurationError("Shor-state extraction needs weight-4 generators")
    # Shor state -> cat state, controlled-P onto the block, back to the X basis.
    circuit = Circuit(width)
    for a in ancillas:
        circuit.append_gate(gate("H", a))
    for q, a in zip(support, ancillas):
        circuit.append_gate(gate(generator[q], a, q))
    for a in ancillas:
        circuit.append_gate(gate("H", a))
    return circuit.append_measure(list(ancillas))


def _shor_verification(ancillas: Sequence[int], width: int) -> Circuit:
    # Three-qubit cat on a0..a2, a3 checks a0 xor a2.
    a0, a1, a2, a3 = ancillas
    circuit = Circuit(width).append_reset(list(ancillas))
    circuit.append_gate(gate("H", a0))
    circuit.append_gate(cnot(a0, a1))
    circuit.append_gate(cnot(a1, a2))
    circuit.append_gate(cnot(a0, a3))
    circuit.append_gate(cnot(a2, a3))
    return circuit.append_measure([a3])


def _shor_completion(ancillas: Sequence[int], width: int) -> Circuit:
    circuit = Circuit(width).append_gate(cnot(ancillas[2], ancillas[3]))
    for a in ancillas:
        circuit.append_gate(gate("H", a))
    return circuit


# ------------- BUILD -------------

def _logical_states(encoder: Circuit, n_block: int, data_qubit: int) -> Tuple[StateVector, StateVector]:
    block_encoder = Circuit(n_block, encoder.layers)
    zero, _ = run(block_encoder, new_state(n_block), NOISELESS, ScriptedStream())
    one_input = apply_x(new_state(n_block), data_qubit)
    one, _ = run(block_encoder, one_input, NOISELESS, ScriptedStream())
    return zero, one


@lru_cache(maxsize=None)
def build_code(name: CodeName, ancilla_mode: AncillaMode = "one_qubit") -> CodeSpec:
    """
    Assemble a CodeSpec.

    Register widths are 9 / 8 / 6 for nine / seven / five with one ancilla
    (none for nine), and 11 for the Steane code with a four-qubit Shor ancilla.
    """
    if ancilla_mode not in ("one_qubit", "four_qubit_shor"):
        raise ConfigurationError(f"unknown ancilla mode {ancilla_mode!r}")
    if ancilla_mode == "four_qubit_shor" and name != "seven":
        raise ConfigurationError("the four-qubit Shor ancilla is only available for the seven qubit code")

    if name == "nine":
        n_block, n_ancilla, data_qubit = 9, 0, 0
        encoder = _nine_encoder(n_block)
        decoder = _nine_decoder(n_block)
        generators: Tuple[str, ...] = ()
        rounds: Tuple[Circuit, ...] = ()
        table: Dict[Tuple[int, ...], Tuple[Correction, ...]] = {}
    elif name == "seven":
        n_block, data_qubit = 7, 2
        n_ancilla = 1 if ancilla_mode == "one_qubit" else SHOR_STATE_SIZE
        width = n_block + n_ancilla
        encoder = _seven_encoder(width)
        decoder = encoder.inverse()
        generators = SEVEN_GENERATORS
        ancillas = list(range(n_block, width))
        if ancilla_mode == "one_qubit":
            rounds = tuple(_one_ancilla_round(g, ancillas[0], width) for g in generators)
        else:
            rounds = tuple(_shor_coupling_round(g, ancillas, width) for g in generators)
        table = _css_lookup_table(generators, n_block)
    elif name == "five":
        n_block, n_ancilla, data_qubit = 5, 1, 0
        width = n_block + n_ancilla
        encoder = _five_encoder(width)
        decoder = encoder.inverse()
        generators = FIVE_GENERATORS
        rounds = tuple(_one_ancilla_round(g, n_block, width) for g in generators)
        table = _lookup_table_by_enumeration(generators, n_block)
    else:
        raise ConfigurationError(f"unknown code {name!r}")

    zero, one = _logical_states(encoder, n_block, data_qubit)
    spec = CodeSpec(
        name=name,
        ancilla_mode=ancilla_mode,
        n_block=n_block,
        n_ancilla=n_ancilla,
        data_qubit=data_qubit,
        encoder=encoder,
        decoder=decoder,
        generators=generators,
        syndrome_rounds=rounds,
        correction_table=table,
        logical_zero=zero,
        logical_one=one,
    )
    log.debug("built %s code (%s): %d qubits, encoder depth %d", name, ancilla_mode, spec.n_total, encoder.depth())
    log_circuit(f"{name} encoder", encoder)
    log_circuit(f"{name} decoder", decoder)
    for index, round_circuit in enumerate(rounds):
        log_circuit(f"{name} syndrome round {index}", round_circuit)
    return spec


def strip_ancillas(spec: CodeSpec) -> CodeSpec:
    """Same code on the bare block (no syndrome extraction possible)."""
    return replace(
        spec,
        n_ancilla=0,
        encoder=Circuit(spec.n_block, spec.encoder.layers),
        decoder=Circuit(spec.n_block, spec.decoder.layers),
        syndrome_rounds=(),
        correction_table={},
    )


# ------------- OPERATIONS -------------

def encode(
    spec: CodeSpec,
    state: StateVector,
    noise: NoiseConfig = NOISELESS,
    rng: Optional[RngStream] = None,
    record: Optional[List[Outcome]] = None,
) -> StateVector:
    """Map a|0>+b|1> on the data qubit (block otherwise |0>) to a|0_L>+b|1_L>."""
    run(spec.encoder, state, noise, rng or ScriptedStream(), record)
    return state


def decode(
    spec: CodeSpec,
    state: StateVector,
    noise: NoiseConfig = NOISELESS,
    rng: Optional[RngStream] = None,
    record: Optional[List[Outcome]] = None,
) -> StateVector:
    run(spec.decoder, state, noise, rng or ScriptedStream(), record)
    return state


def decode_and_recover_nine(
    spec: CodeSpec,
    state: StateVector,
    noise: NoiseConfig = NOISELESS,
    rng: Optional[RngStream] = None,
    record: Optional[List[Outcome]] = None,
) -> StateVector:
    """Shor-code decode fused with majority-vote recovery; the data ends on qubit 0."""
    if spec.name != "nine":
        raise UsageError("decode_and_recover_nine only applies to the nine qubit code")
    return decode(spec, state, noise, rng, record)


def logical_hadamard_seven(spec: CodeSpec) -> Circuit:
    """Transversal H on the Steane block."""
    if spec.name != "seven":
        raise UsageError("only the seven qubit code has a transversal Hadamard here")
    return transversal("H", spec.block_qubits, spec.n_total)


def prepare_shor_ancilla(
    state: StateVector,
    ancilla_qubits: Sequence[int],
    noise: NoiseConfig,
    rng: RngStream,
    record: Optional[List[Outcome]] = None,
) -> StateVector:
    """
    Put four ancillas into the Shor state (even-parity strings, amplitude 1/sqrt(8)).

    A cat state is built on three ancillas and its parity checked on the fourth;
    preparation repeats until the check passes or the retry budget runs out.
    """
    if len(ancilla_qubits) != SHOR_STATE_SIZE or len(set(ancilla_qubits)) != SHOR_STATE_SIZE:
        raise UsageError("the Shor state needs four distinct ancilla qubits")
    width = state.n_qubits
    verification = _shor_verification(ancilla_qubits, width)

    try:
        for attempt in Retrying(
            stop=stop_after_attempt(SHOR_MAX_ATTEMPTS),
            retry=retry_if_exception_type(_ShorStateRejected),
            after=after_log(log, logging.DEBUG),
        ):
            with attempt:
                _, outcomes = run(verification, state, noise, rng, record)
                if outcomes[-1].bit:
                    raise _ShorStateRejected()
    except RetryError as e:
        raise ShorPreparationError(
            f"Shor-state verification failed {SHOR_MAX_ATTEMPTS} times in a row"
        ) from e

    run(_shor_completion(ancilla_qubits, width), state, noise, rng, record)
    return state


def _correction_circuit(spec: CodeSpec, corrections: Sequence[Correction]) -> Circuit:
    layer = Layer(
        gates=[gate(pauli, qubit) for pauli, qubit in corrections],
        resets=list(spec.ancilla_qubits),
    )
    return Circuit(spec.n_total, [layer])


def syndrome_and_recover(
    spec: CodeSpec,
    state: StateVector,
    noise: NoiseConfig,
    rng: RngStream,
    record: Optional[List[Outcome]] = None,
) -> Tuple[StateVector, SyndromeRecord]:
    """
    Measure every stabilizer generator, look the syndrome up, apply the Pauli fix.

    Each round resets its ancilla(s) first; the final correction layer resets
    them again, so they leave the procedure in |0>.
    """
    if spec.name == "nine":
        raise UsageError("the nine qubit recovery cannot be used without its decoding circuit")
    if state.n_qubits != spec.n_total:
        raise UsageError(f"{spec.name} code expects a {spec.n_total}-qubit register")

    outcomes: List[Outcome] = []
    bits: List[int] = []
    for round_circuit in spec.syndrome_rounds:
        round_record: List[Outcome] = []
        if spec.ancilla_mode == "four_qubit_shor":
            prepare_shor_ancilla(state, spec.ancilla_qubits, noise, rng, round_record)
        start = len(round_record)
        run(round_circuit, state, noise, rng, round_record)
        measured = [o.bit for o in round_record[start:] if o.kind == "measure"]
        bits.append(sum(measured) % 2)
        outcomes.extend(round_record)

    corrections = spec.correction_table[tuple(bits)]
    run(_correction_circuit(spec, corrections), state, noise, rng, outcomes)
    if record is not None:
        record.extend(outcomes)
    return state, SyndromeRecord(tuple(bits), tuple(corrections), tuple(outcomes))


def probe_fidelity(spec: CodeSpec, state: StateVector, reference: StateVector) -> float:
    """
    Logical fidelity of an encoded register, leaving `state` untouched.

    A copy is decoded noise-free and the data qubit is compared with the
    one-qubit `reference`; every other qubit is traced out.
    """
    decoded = decode(spec, state.copy())
    others = [q for q in range(state.n_qubits) if q != spec.data_qubit]
    return data_fidelity(decoded, reference, [spec.data_qubit], others)


# ------------- DEPTH ACCOUNTING -------------

def main_gate_circuit(spec: CodeSpec) -> Circuit:
    """One logical Hadamard: transversal for seven, decode / H / encode for five and nine."""
    if spec.name == "seven":
        return logical_hadamard_seven(spec)
    circuit = Circuit(spec.n_total).extend(spec.decoder)
    freed = [q for q in spec.block_qubits if q != spec.data_qubit]
    circuit.append_gate(gate("H", spec.data_qubit), "new_layer")
    circuit.append_reset(freed)
    return circuit.extend(spec.encoder, "greedy")


def main_gate_depth(spec: CodeSpec) -> int:
    return main_gate_circuit(spec).depth()


def syndrome_depth(spec: CodeSpec) -> int:
    """Layers of one noise-free recovery round (nine: the majority-vote part of its decoder)."""
    if spec.name == "nine":
        return spec.decoder.depth() - spec.encoder.depth()
    depth = sum(r.depth() for r in spec.syndrome_rounds) + 1
    if spec.ancilla_mode == "four_qubit_shor":
        per_state = _shor_verification(spec.ancilla_qubits, spec.n_total).depth()
        per_state += _shor_completion(spec.ancilla_qubits, spec.n_total).depth()
        depth += per_state * len(spec.syndrome_rounds)
    return depth


def circuit_area(spec: CodeSpec) -> int:
    """Register width times recovery depth."""
    return spec.n_total * syndrome_depth(spec)
