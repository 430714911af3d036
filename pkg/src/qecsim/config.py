import os

from dotenv import load_dotenv

from .errors import ConfigurationError

################ ENV ################

load_dotenv()


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError as e:
        raise ConfigurationError(f"{name} must be an integer, got {raw!r}") from e


WORKERS = _int_env("QECSIM_WORKERS", 0) or (os.cpu_count() or 1)
LOG_LEVEL = os.getenv("QECSIM_LOG_LEVEL", "INFO").upper()
DEBUG_CIRCUITS = os.getenv("QECSIM_DEBUG_CIRCUITS", "False") == "True"
MAX_QUBITS = _int_env("QECSIM_MAX_QUBITS", 26)
SHOR_MAX_ATTEMPTS = _int_env("QECSIM_SHOR_MAX_ATTEMPTS", 50)
KERNEL_BLOCK_QUBITS = _int_env("QECSIM_KERNEL_BLOCK_QUBITS", 12)

if WORKERS < 1:
    raise ConfigurationError(f"QECSIM_WORKERS must be >= 0, got {WORKERS}")
if SHOR_MAX_ATTEMPTS < 1:
    raise ConfigurationError("QECSIM_SHOR_MAX_ATTEMPTS must be positive")
if KERNEL_BLOCK_QUBITS < 1:
    raise ConfigurationError("QECSIM_KERNEL_BLOCK_QUBITS must be positive")
