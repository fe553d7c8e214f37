from __future__ import annotations

import os
from dataclasses import dataclass

# Auto-load .env if python-dotenv exists
try:
    from dotenv import load_dotenv, find_dotenv  # type: ignore
    load_dotenv(find_dotenv(usecwd=True), override=True)
except Exception:
    pass

ENV_PREFIX = "RANK1DET_"


def _get(key: str, default: str | None = None) -> str | None:
    v = os.getenv(ENV_PREFIX + key)
    if v is None:
        return default
    v = v.strip()
    return v if v != "" else default


def _i(key: str, default: int) -> int:
    v = _get(key, None)
    return int(v) if v is not None else int(default)


def _f(key: str, default: float) -> float:
    v = _get(key, None)
    return float(v) if v is not None else float(default)


@dataclass(frozen=True)
class Config:
    # Runtime
    LOG_LEVEL: str = _get("LOG_LEVEL", "WARNING")  # type: ignore[assignment]

    # Float dense path: pivot column is zero when max|col| <= rel * max|A|
    ZERO_PIVOT_REL: float = _f("ZERO_PIVOT_REL", 2.0**-50)

    # Float det_corrected: min|d_k| < rel * max(1, max|d_k|) -> division-free
    FALLBACK_REL: float = _f("FALLBACK_REL", 2.0**-26)

    # Oracle caps
    EXPANSION_MAX_N: int = _i("EXPANSION_MAX_N", 12)
    COFACTOR_MAX_N: int = _i("COFACTOR_MAX_N", 8)

    # Random instances
    ENTRY_BOUND: int = _i("ENTRY_BOUND", 9)
    FLOAT_RTOL: float = _f("FLOAT_RTOL", 1e-9)

    # Fubini-Study checks
    FD_STEP: float = _f("FD_STEP", 1e-4)
    FSCHECK_RADIUS: float = _f("FSCHECK_RADIUS", 1.5)
    FSCHECK_TOL_FACTOR: float = _f("FSCHECK_TOL_FACTOR", 100.0)

    # Bench
    BENCH_AGREE_TOL: float = _f("BENCH_AGREE_TOL", 1e-6)


CFG = Config()
