"""
Monte Carlo harness: logical Hadamards interleaved with error-correction
rounds, averaged over independent trials, plus the single-fault oracle that
counts which error locations actually degrade a circuit unit.
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Callable, List, Literal, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .circuit import Circuit, Outcome, run, transversal
from .codes import (
    AncillaMode,
    CodeSpec,
    build_code,
    encode,
    main_gate_circuit,
    probe_fidelity,
    strip_ancillas,
    syndrome_and_recover,
)
from .config import WORKERS
from .errors import ConfigurationError, validated
from .noise import NoiseConfig, RngStream, ScriptedStream, derive_stream
from .statevector import StateVector, data_fidelity, new_state

log = logging.getLogger("qecsim.experiment")

CodeChoice = Literal["physical", "five", "seven", "nine"]

# Branches below this probability are not explored by the fault oracle.
BRANCH_CUTOFF = 1e-9
DEGRADED_BELOW = 1.0 - 1e-9


class ExperimentConfig(BaseModel):
    """One fidelity-vs-gates experiment. qec_period=None means no error correction."""

    model_config = ConfigDict(frozen=True)

    code: CodeChoice
    ancilla_mode: AncillaMode = "one_qubit"
    p: float = Field(default=0.0, ge=0.0, le=1.0)
    sigma: float = Field(default=0.0, ge=0.0)
    qec_period: Optional[int] = Field(default=None, ge=1)
    n_main_gates: int = Field(default=4000, ge=0)
    trials: int = Field(default=10_000, ge=1)
    master_seed: int = Field(default=0, ge=0, lt=2**64)
    sample_stride: int = Field(default=2, ge=2)

    @model_validator(mode="before")
    @classmethod
    def _nine_corrects_every_gate(cls, data):
        if isinstance(data, dict) and data.get("code") == "nine":
            data = {**data, "qec_period": 1}
        return data

    @model_validator(mode="after")
    def _check(self):
        if self.n_main_gates % 2:
            raise ValueError("n_main_gates must be even")
        if self.sample_stride % 2:
            raise ValueError("sample_stride must be even")
        if self.ancilla_mode == "four_qubit_shor" and self.code != "seven":
            raise ValueError("the four-qubit ancilla is only available for the seven qubit code")
        if self.code == "physical" and self.qec_period is not None:
            raise ValueError("the physical baseline has no error correction")
        return self

    @property
    def noise(self) -> NoiseConfig:
        return NoiseConfig(p=self.p, sigma=self.sigma, master_seed=self.master_seed)

    def label(self) -> str:
        period = "never" if self.qec_period is None else str(self.qec_period)
        mode = "four" if self.ancilla_mode == "four_qubit_shor" else "one"
        return f"{self.code}-{mode}-p{self.p:g}-s{self.sigma:g}-y{period}-n{self.n_main_gates}"


def experiment_config(**fields) -> ExperimentConfig:
    return validated(ExperimentConfig, **fields)


class SeriesPoint(NamedTuple):
    gate_index: int
    mean_fidelity: float
    std_error: float


@dataclass(frozen=True)
class FidelitySeries:
    config: ExperimentConfig
    points: Tuple[SeriesPoint, ...]

    @property
    def final(self) -> SeriesPoint:
        return self.points[-1]


def sample_indices(config: ExperimentConfig) -> List[int]:
    return list(range(config.sample_stride, config.n_main_gates + 1, config.sample_stride))


# ------------- TRIALS -------------

def _physical_trial(config: ExperimentConfig, trial_index: int) -> np.ndarray:
    rng = derive_stream(config.master_seed, trial_index)
    noise = config.noise
    state = new_state(1)
    reference = new_state(1)
    hadamard = transversal("H", [0], 1)
    samples = []
    for g in range(1, config.n_main_gates + 1):
        run(hadamard, state, noise, rng)
        if g % config.sample_stride == 0:
            samples.append(data_fidelity(state, reference, [0], []))
    return np.array(samples, dtype=np.float64)


def _encoded_trial(config: ExperimentConfig, trial_index: int) -> np.ndarray:
    rng = derive_stream(config.master_seed, trial_index)
    noise = config.noise
    spec = build_code(config.code, config.ancilla_mode)
    main_gate = main_gate_circuit(spec)
    reference = new_state(1)
    corrects = spec.name != "nine" and config.qec_period is not None

    state = encode(spec, new_state(spec.n_total), noise, rng)
    samples = []
    for g in range(1, config.n_main_gates + 1):
        run(main_gate, state, noise, rng)
        if corrects and g % config.qec_period == 0:
            syndrome_and_recover(spec, state, noise, rng)
        if g % config.sample_stride == 0:
            samples.append(probe_fidelity(spec, state, reference))
    return np.array(samples, dtype=np.float64)


def _run_trials(
    config: ExperimentConfig,
    trial: Callable[[ExperimentConfig, int], np.ndarray],
    workers: Optional[int],
) -> FidelitySeries:
    workers = workers or WORKERS
    indices = range(config.trials)
    log.info("running %s: %d trials on %d worker(s)", config.label(), config.trials, workers)
    if workers == 1:
        rows = [trial(config, i) for i in indices]
    else:
        chunksize = max(1, config.trials // (workers * 8))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(partial(trial, config), indices, chunksize=chunksize))

    gate_indices = sample_indices(config)
    if not gate_indices:
        return FidelitySeries(config, ())
    matrix = np.vstack(rows)
    mean = matrix.mean(axis=0)
    if config.trials > 1:
        std_error = matrix.std(axis=0, ddof=1) / math.sqrt(config.trials)
    else:
        std_error = np.zeros_like(mean)
    points = tuple(
        SeriesPoint(k, float(m), float(s)) for k, m, s in zip(gate_indices, mean, std_error)
    )
    log.info("%s final fidelity %.4f +- %.4f", config.label(), points[-1].mean_fidelity, points[-1].std_error)
    return FidelitySeries(config, points)


def run_physical_baseline(config: ExperimentConfig, workers: Optional[int] = None) -> FidelitySeries:
    """One bare qubit, one Hadamard and one depolarizing step per main gate."""
    if config.code != "physical":
        raise ConfigurationError(f"expected a physical config, got {config.code}")
    return _run_trials(config, _physical_trial, workers)


def run_encoded_experiment(config: ExperimentConfig, workers: Optional[int] = None) -> FidelitySeries:
    """
    Noisy encode of |0_L>, then n logical Hadamards with a recovery round every
    qec_period gates; fidelity is probed every sample_stride gates, after any
    recovery round that falls on the same gate.
    """
    if config.code == "physical":
        raise ConfigurationError("use run_physical_baseline for the physical qubit")
    return _run_trials(config, _encoded_trial, workers)


def run_experiment(config: ExperimentConfig, workers: Optional[int] = None) -> FidelitySeries:
    if config.code == "physical":
        return run_physical_baseline(config, workers)
    return run_encoded_experiment(config, workers)


# ------------- FAULT ORACLE -------------

QEC_ROUND = "qec"
UnitOperation = Union[Circuit, str]


@dataclass(frozen=True)
class Unit:
    """A circuit fragment starting from a noise-free |0_L>: circuits and recovery rounds in order."""

    spec: CodeSpec
    operations: Tuple[UnitOperation, ...] = ()

    @property
    def width(self) -> int:
        return self.spec.n_total

    def initial_state(self) -> StateVector:
        block = new_state(self.spec.n_total)
        return encode(self.spec, block)

    def execute(self, state: StateVector, noise: NoiseConfig, rng: RngStream, record: List[Outcome]) -> StateVector:
        for operation in self.operations:
            if operation == QEC_ROUND:
                syndrome_and_recover(self.spec, state, noise, rng, record)
            else:
                run(operation, state, noise, rng, record)
        return state


def two_hadamard_unit() -> Unit:
    """Two transversal H layers on a bare Steane block, no recovery."""
    spec = strip_ancillas(build_code("seven"))
    layer = transversal("H", spec.block_qubits, spec.n_total)
    return Unit(spec, (layer, layer))


def periodic_qec_unit(y: int, ancilla_mode: AncillaMode = "one_qubit") -> Unit:
    """y H layers, recovery, y H layers, recovery: the repeating block of a period-y run."""
    if y < 1:
        raise ConfigurationError("the QEC period must be at least 1")
    spec = build_code("seven", ancilla_mode)
    layer = transversal("H", spec.block_qubits, spec.n_total)
    half = (layer,) * y + (QEC_ROUND,)
    return Unit(spec, half + half)


# Fault injection: p = 1 makes every scripted draw decide the branch.
_FAULT_NOISE = NoiseConfig(p=1.0)


def count_slots(unit: Unit) -> int:
    """Depolarizing steps the unit takes on its fault-free path."""
    stream = ScriptedStream(p=1.0)
    unit.execute(unit.initial_state(), _FAULT_NOISE, stream, [])
    return stream.depolarizing_calls


def expected_fidelity(unit: Unit, reference: StateVector, faults: Optional[dict] = None) -> float:
    """
    Probe fidelity averaged over every measurement branch with probability above
    BRANCH_CUTOFF, with `faults` ({slot: {qubit: pauli}}) injected.
    """
    total = 0.0
    pending: List[Tuple[int, ...]] = [()]
    while pending:
        prefix = pending.pop()
        stream = ScriptedStream(p=1.0, faults=faults, outcomes=prefix)
        record: List[Outcome] = []
        state = unit.execute(unit.initial_state(), _FAULT_NOISE, stream, record)
        for i in range(len(prefix), len(record)):
            if record[i].bit == 0 and record[i].probability < 1.0 - BRANCH_CUTOFF:
                pending.append(tuple(o.bit for o in record[:i]) + (1,))
        weight = math.prod(o.probability for o in record)
        total += weight * probe_fidelity(unit.spec, state, reference)
    return total


def count_degrading_errors(unit: Unit, reference: StateVector) -> Tuple[int, int]:
    """
    Inject each single (slot, qubit, Pauli) fault and count those that leave
    the expected end-of-unit fidelity below 1 - 1e-9.

    Returns:
        (count, locations) where locations = slots * register width.
    """
    slots = count_slots(unit)
    count = 0
    for slot in range(slots):
        for qubit in range(unit.width):
            for pauli in ("X", "Z", "Y"):
                fidelity = expected_fidelity(unit, reference, {slot: {qubit: pauli}})
                if fidelity < DEGRADED_BELOW:
                    count += 1
        log.debug("slot %d/%d: %d degrading faults so far", slot + 1, slots, count)
    return count, slots * unit.width


def measured_counts(periods: Sequence[int], ancilla_mode: AncillaMode = "one_qubit") -> List[Tuple[int, int, int]]:
    """(y, C, L) for the periodic recovery unit at each period."""
    reference = new_state(1)
    rows = []
    for y in periods:
        count, locations = count_degrading_errors(periodic_qec_unit(y, ancilla_mode), reference)
        log.info("period %d: %d degrading faults over %d locations", y, count, locations)
        rows.append((y, count, locations))
    return rows
