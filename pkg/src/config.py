"""
Workbench configuration.

Values come from the environment (optionally a .env file at the repository
root) and can be overridden per run by the command line.
"""

import os

from dotenv import load_dotenv

load_dotenv(os.path.join(os.path.dirname(__file__), '..', '.env'))


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise RuntimeError(f"{name} must be an integer, got {raw!r}") from exc


CONFIG = {
    "order_cap": _env_int("QBR_ORDER_CAP", 4096),
    "ideal_cap": _env_int("QBR_IDEAL_CAP", 512),
    "maxreg_cap": _env_int("QBR_MAXREG_CAP", 512),
    "closure_cap": _env_int("QBR_CLOSURE_CAP", 512),
    "sweep_cap": _env_int("QBR_SWEEP_CAP", 64),
    "qi_sweep_cap": _env_int("QBR_QI_SWEEP_CAP", 128),
    "level2_cap": _env_int("QBR_LEVEL2_CAP", 16),
    "degree_bound": _env_int("QBR_DEGREE_BOUND", 6),
    "seed": _env_int("QBR_SEED", 0),
    "random_subsets": 8,
    "reduce_rows": 200,
    "jobs": _env_int("QBR_JOBS", os.cpu_count() or 1),
    "verbose": os.getenv("QBR_VERBOSE", "0").lower() in ("1", "true", "yes"),
}


def override(**values) -> None:
    """Apply command-line overrides; None means keep the configured value."""
    for key, value in values.items():
        if key not in CONFIG:
            raise KeyError(f"Unknown configuration key: {key}")
        if value is not None:
            CONFIG[key] = value
