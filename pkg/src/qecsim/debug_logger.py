from .config import DEBUG_CIRCUITS


def log_circuit(label: str, circuit, color: str = "\033[94m"):
    """Print a line-oriented dump of `circuit` when QECSIM_DEBUG_CIRCUITS is on."""
    if not DEBUG_CIRCUITS:
        return None
    print(f"{color}\n--- {label} (depth {circuit.depth()}) ---\033[0m")
    try:
        print(circuit.dump())
    except Exception:
        print(circuit)
    print("\033[90m" + "-" * 60 + "\033[0m")
