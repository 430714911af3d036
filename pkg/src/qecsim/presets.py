"""
Named experiment grids, their analytic overlays, and CSV output.
"""
import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .analysis import (
    REFERENCE_DEGRADING_COUNT,
    approx_params,
    encoded_noqec_fidelity,
    reference_locations,
    physical_fidelity,
    qec_period_fidelity,
)
from .codes import build_code, circuit_area, main_gate_depth, syndrome_depth
from .errors import ConfigurationError
from .experiment import (
    ExperimentConfig,
    FidelitySeries,
    count_degrading_errors,
    experiment_config,
    measured_counts,
    sample_indices,
    two_hadamard_unit,
)
from .statevector import new_state

log = logging.getLogger("qecsim.presets")

DECOHERENCE_RATES = (1e-5, 1e-4, 1e-3)
TABLE2_PERIODS = (1, 50, 100, 200, 2000)
FIGURE_PERIODS = (50, 100, 200, 2000)
OPERATIONAL_SIGMAS = (1e-3, 1e-2)
ORACLE_PERIODS = (1, 2, 5)

Overlay = Dict[int, float]
# period -> (C, L) measured by the fault oracle
Counts = Dict[int, Tuple[int, int]]


@dataclass
class Preset:
    name: str
    configs: List[ExperimentConfig]
    analytic: bool = False
    counts: Counts = field(default_factory=dict)


def _grid(
    trials: int,
    seed: int,
    gates: int,
    rows: Iterable[dict],
) -> List[ExperimentConfig]:
    return [
        experiment_config(trials=trials, master_seed=seed, n_main_gates=gates, **row)
        for row in rows
    ]


def _decoherence_rows(code: str, periods: Sequence[int]) -> List[dict]:
    rows = []
    for p in DECOHERENCE_RATES:
        rows.append({"code": "physical", "p": p})
        rows.extend({"code": code, "p": p, "qec_period": y} for y in periods)
    return rows


def preset_rows(name: str) -> Tuple[List[dict], bool]:
    """Config fields for each run of preset `name`, and whether it carries analytic overlays."""
    if name == "table2":
        return [
            {"code": "seven", "ancilla_mode": mode, "p": p, "qec_period": y}
            for mode in ("one_qubit", "four_qubit_shor")
            for p in DECOHERENCE_RATES
            for y in TABLE2_PERIODS
        ], False
    if name == "fig-seven-decoherence":
        return _decoherence_rows("seven", FIGURE_PERIODS), False
    if name == "fig-five-decoherence":
        return _decoherence_rows("five", FIGURE_PERIODS), False
    if name == "fig-operational":
        rows = []
        for sigma in OPERATIONAL_SIGMAS:
            rows.append({"code": "physical", "sigma": sigma})
            rows.append({"code": "seven", "sigma": sigma})
            rows.extend({"code": "seven", "sigma": sigma, "qec_period": y} for y in FIGURE_PERIODS)
        return rows, False
    if name == "fig-combined":
        rows = []
        for p in DECOHERENCE_RATES[:2]:
            for sigma in OPERATIONAL_SIGMAS:
                # the bare qubit only decoheres in this comparison
                rows.append({"code": "physical", "p": p})
                rows.extend(
                    {"code": "seven", "p": p, "sigma": sigma, "qec_period": y} for y in FIGURE_PERIODS
                )
        return rows, False
    if name == "fig-code-comparison":
        rows = []
        for p in DECOHERENCE_RATES:
            rows.append({"code": "physical", "p": p})
            rows.extend({"code": code, "p": p, "qec_period": 1} for code in ("nine", "seven", "five"))
        return rows, False
    if name == "fig-approximation":
        return [
            {"code": "physical", "p": 1e-5},
            {"code": "seven", "p": 1e-5},
            {"code": "seven", "p": 1e-5, "qec_period": 50},
        ], True
    raise ConfigurationError(f"unknown preset {name!r}")


PRESET_NAMES = (
    "table2",
    "fig-seven-decoherence",
    "fig-five-decoherence",
    "fig-operational",
    "fig-combined",
    "fig-code-comparison",
    "fig-approximation",
    "oracle-counts",
)
DEFAULT_GATES = {"fig-approximation": 2000}


def build_preset(
    name: str,
    trials: int = 10_000,
    seed: int = 0,
    gates: Optional[int] = None,
    measure_counts: bool = False,
) -> Preset:
    if name == "oracle-counts":
        return Preset(name, [])
    rows, analytic = preset_rows(name)
    gates = gates if gates is not None else DEFAULT_GATES.get(name, 4000)
    preset = Preset(name, _grid(trials, seed, gates, rows), analytic)
    if analytic and measure_counts:
        periods = sorted({c.qec_period for c in preset.configs if c.qec_period is not None})
        preset.counts = {y: (count, locations) for y, count, locations in measured_counts(periods)}
    return preset


def analytic_overlay(config: ExperimentConfig, counts: Optional[Counts] = None) -> Optional[Overlay]:
    """
    Closed-form fidelity at each sampled gate index, or None when no
    first-order form applies (angle noise, or codes other than seven).
    """
    if config.sigma > 0:
        return None
    ks = sample_indices(config)
    if config.code == "physical":
        return {k: physical_fidelity(config.p, k) for k in ks}
    if config.code != "seven" or config.ancilla_mode != "one_qubit":
        return None
    if config.qec_period is None:
        return {k: encoded_noqec_fidelity(config.p, k) for k in ks}
    y = config.qec_period
    C, L = (counts or {}).get(y, (REFERENCE_DEGRADING_COUNT, reference_locations(y)))
    return {k: qec_period_fidelity(approx_params(p=config.p, n=k, y=y, C=C, L=L)) for k in ks}


def config_id(index: int, config: ExperimentConfig) -> str:
    return f"{index:02d}:{config.label()}"


def emit_csv(
    series: Sequence[FidelitySeries],
    overlays: Sequence[Optional[Overlay]],
    path: Union[str, Path],
    metadata: Sequence[str] = (),
) -> Path:
    """
    Write one row per sampled point, rows ordered by config then gate index.

    Lines starting with `#` hold metadata: the free-form lines passed in,
    then one line per config with its full settings.
    """
    path = Path(path)
    with_analytic = any(o is not None for o in overlays)
    header = ["config_id", "gate_index", "mean_fidelity", "std_error"]
    if with_analytic:
        header.append("analytic")

    with path.open("w", newline="") as f:
        for line in metadata:
            f.write(f"# {line}\n")
        for index, s in enumerate(series):
            f.write(f"# {config_id(index, s.config)} {s.config.model_dump_json()}\n")
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for index, (s, overlay) in enumerate(zip(series, overlays)):
            for point in s.points:
                row = [
                    config_id(index, s.config),
                    point.gate_index,
                    f"{point.mean_fidelity:.10f}",
                    f"{point.std_error:.10f}",
                ]
                if with_analytic:
                    row.append("" if overlay is None else f"{overlay[point.gate_index]:.10f}")
                writer.writerow(row)
    log.info("wrote %d series to %s", len(series), path)
    return path


def oracle_count_rows(periods: Sequence[int] = ORACLE_PERIODS) -> List[dict]:
    """(C, L) for the two-H unit and for the periodic recovery unit at each period."""
    rows = []
    count, locations = count_degrading_errors(two_hadamard_unit(), new_state(1))
    rows.append({"unit": "two-hadamard", "y": 0, "count": count, "locations": locations})
    for y, count, locations in measured_counts(periods):
        rows.append({"unit": "periodic-qec", "y": y, "count": count, "locations": locations})
    return rows


def depth_rows() -> List[dict]:
    rows = []
    for name, mode in (("nine", "one_qubit"), ("seven", "one_qubit"), ("seven", "four_qubit_shor"), ("five", "one_qubit")):
        spec = build_code(name, mode)
        rows.append({
            "unit": f"{name}-{mode}",
            "qubits": spec.n_total,
            "encoder_depth": spec.encoder.depth(),
            "recovery_depth": syndrome_depth(spec),
            "area": circuit_area(spec),
            "main_gate_depth": main_gate_depth(spec),
        })
    return rows


def emit_oracle_csv(rows: Sequence[dict], depths: Sequence[dict], path: Union[str, Path], metadata: Sequence[str] = ()) -> Path:
    path = Path(path)
    with path.open("w", newline="") as f:
        for line in metadata:
            f.write(f"# {line}\n")
        for d in depths:
            f.write("# " + " ".join(f"{k}={v}" for k, v in d.items()) + "\n")
        writer = csv.DictWriter(f, fieldnames=["unit", "y", "count", "locations"], lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    log.info("wrote %d oracle rows to %s", len(rows), path)
    return path
