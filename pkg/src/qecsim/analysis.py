"""
First-order fidelity approximations for repeated Hadamards under depolarizing noise.

Each form is (1 + s^k) / 2 where s is the survival factor of one step. The
bases are clamped to [0, 1], so every value lies in [1/2, 1] for p in [0, 3/4].
"""
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import ConfigurationError, validated

REFERENCE_DEGRADING_COUNT = 272
MAX_DEPOLARIZING_P = 0.75


def reference_locations(y: int) -> int:
    """Single-error locations of the period-y unit for a depth-32 recovery round."""
    return 448 + 14 * y


class ApproxParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    p: float
    n: int = Field(ge=0)
    y: int = Field(ge=1)
    C: int = Field(default=REFERENCE_DEGRADING_COUNT, ge=0)
    L: Optional[int] = Field(default=None, ge=1)

    @property
    def locations(self) -> int:
        return self.L if self.L is not None else reference_locations(self.y)

    @model_validator(mode="after")
    def _check(self):
        if self.n % 2:
            raise ValueError("n must be even")
        if self.C > 3 * self.locations:
            raise ValueError(f"C={self.C} exceeds 3*L={3 * self.locations}")
        return self


def approx_params(**fields) -> ApproxParams:
    return validated(ApproxParams, **fields)


def _check_inputs(p: float, n: int) -> None:
    if not 0.0 <= p <= MAX_DEPOLARIZING_P:
        raise ConfigurationError(f"p must be in [0, {MAX_DEPOLARIZING_P}], got {p}")
    if n < 0 or n % 2:
        raise ConfigurationError(f"n must be a non-negative even count, got {n}")


def _half_plus(base: float, exponent: int) -> float:
    base = min(1.0, max(0.0, base))
    return (1.0 + base**exponent) / 2.0


def physical_fidelity(p: float, n: int) -> float:
    """(1 + (1 - 4p/3)^n) / 2: a bare qubit through n noisy Hadamards."""
    _check_inputs(p, n)
    return _half_plus(1.0 - 4.0 * p / 3.0, n)


def encoded_noqec_fidelity(p: float, n: int) -> float:
    """(1 + (1 - 4p)^n) / 2: a Steane block with no recovery, three qubits per step can flip it."""
    _check_inputs(p, n)
    return _half_plus(1.0 - 4.0 * p, n)


def unit_failure(params: ApproxParams) -> float:
    """P = (C/3) p (1-p)^(L-1): exactly one degrading fault in the unit."""
    return params.C / 3.0 * params.p * (1.0 - params.p) ** (params.locations - 1)


def qec_period_fidelity(params: ApproxParams) -> float:
    """
    (1 + (1 - P)^units) / 2 with one unit per 2y main gates; a trailing partial
    unit is dropped (floor(n / 2y)).
    """
    _check_inputs(params.p, params.n)
    units = params.n // (2 * params.y)
    return _half_plus(1.0 - unit_failure(params), units)
