from typing import Type, TypeVar

from pydantic import BaseModel, ValidationError

M = TypeVar("M", bound=BaseModel)


class QecSimError(Exception):
    """Base class for every error raised by the simulator."""


class ConfigurationError(QecSimError, ValueError):
    """Invalid configuration: register sizes, code/mode pairs, experiment settings."""


class UsageError(QecSimError, ValueError):
    """A kernel or procedure was called with arguments it cannot act on."""


class NumericalError(QecSimError, ArithmeticError):
    """A state became numerically degenerate (e.g. collapsing onto a zero-norm branch)."""


class ShorPreparationError(QecSimError, RuntimeError):
    """Shor-state ancilla verification kept failing until the retry budget ran out."""


def validated(model: Type[M], **fields) -> M:
    """Instantiate a pydantic model, reporting validation failures as ConfigurationError."""
    try:
        return model(**fields)
    except ValidationError as e:
        raise ConfigurationError(str(e)) from e
