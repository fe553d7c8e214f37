from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Union

from rank1det.fubini_study import ChartPoint, EinsteinReport
from rank1det.rank1 import Rank1System
from rank1det.scalars import Scalar, ScalarKind, format_scalar

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2

UNDEFINED_ERRONEOUS = "undefined (division by zero)"

__all__ = [
    "SCHEMA_VERSION",
    "EXIT_OK",
    "EXIT_CHECK_FAILED",
    "EXIT_USAGE",
    "UNDEFINED_ERRONEOUS",
    "encode_scalar",
    "encode_system",
    "encode_point",
    "encode_einstein",
    "VerifyReport",
    "ErratumReport",
    "BenchReport",
    "envelope",
    "dumps",
]


def encode_scalar(value: Scalar, kind: ScalarKind) -> Union[str, float]:
    """
    Exact kinds and complex floats as strings in the token grammar, real
    floats as JSON numbers (shortest round-trip repr).
    """
    if kind is ScalarKind.F64:
        return float(value)
    return format_scalar(value, kind)


def encode_system(s: Rank1System) -> Dict[str, Any]:
    return {
        "n": s.n,
        "kind": s.kind.value,
        "x": [encode_scalar(v, s.kind) for v in s.x],
        "a": [encode_scalar(v, s.kind) for v in s.a],
        "b": [encode_scalar(v, s.kind) for v in s.b],
    }


def encode_point(p: ChartPoint) -> Dict[str, Any]:
    return {
        "n": p.n,
        "kind": p.kind.value,
        "chart": p.chart,
        "z": [encode_scalar(v, p.kind) for v in p.z],
    }


def encode_einstein(r: EinsteinReport) -> Dict[str, Any]:
    return {
        "point": encode_point(r.point),
        "fd_step": r.fd_step,
        "max_abs_deviation": r.max_abs_deviation,
        "estimated_constant": r.estimated_constant,
        "expected_constant": r.expected_constant,
    }


@dataclass
class VerifyReport:
    seed: int
    trials: int
    kind: str
    dims: List[int] = field(default_factory=list)
    mismatches: int = 0
    paths_used: Dict[str, int] = field(default_factory=dict)
    expansion_checked: int = 0
    first_mismatch: Optional[Dict[str, Any]] = None

    @property
    def ok(self) -> bool:
        return self.mismatches == 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "seed": self.seed,
            "trials": self.trials,
            "kind": self.kind,
            "dims": list(self.dims),
            "mismatches": self.mismatches,
            "paths_used": dict(sorted(self.paths_used.items())),
            "expansion_checked": self.expansion_checked,
            "first_mismatch": self.first_mismatch,
        }


@dataclass(frozen=True)
class ErratumReport:
    instance: Rank1System
    corrected: Scalar
    erroneous: Optional[Scalar]  # None when the misprinted formula divides by zero
    dense: Scalar
    agree_corrected_dense: bool
    agree_erroneous_dense: bool
    corrected_path: str = ""

    def to_dict(self) -> Dict[str, Any]:
        kind = self.instance.kind
        return {
            "instance": encode_system(self.instance),
            "corrected": encode_scalar(self.corrected, kind),
            "corrected_path": self.corrected_path,
            "erroneous": UNDEFINED_ERRONEOUS if self.erroneous is None else encode_scalar(self.erroneous, kind),
            "dense": encode_scalar(self.dense, kind),
            "agree_corrected_dense": self.agree_corrected_dense,
            "agree_erroneous_dense": self.agree_erroneous_dense,
        }


@dataclass
class BenchReport:
    seed: int
    repeats: int
    sizes: List[int] = field(default_factory=list)
    structured_seconds: List[float] = field(default_factory=list)
    dense_seconds: List[float] = field(default_factory=list)
    max_log_diff: List[float] = field(default_factory=list)
    checksum: float = 0.0

    @property
    def speedups(self) -> List[float]:
        return [d / s if s > 0 else float("inf") for s, d in zip(self.structured_seconds, self.dense_seconds)]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "seed": self.seed,
            "repeats": self.repeats,
            "sizes": list(self.sizes),
            "structured_seconds": list(self.structured_seconds),
            "dense_seconds": list(self.dense_seconds),
            "speedups": self.speedups,
            "max_log_diff": list(self.max_log_diff),
            "checksum": self.checksum,
        }


def envelope(command: Optional[str], body: Dict[str, Any]) -> Dict[str, Any]:
    out: Dict[str, Any] = {"schema": SCHEMA_VERSION, "command": command}
    out.update(body)
    return out


def dumps(doc: Dict[str, Any]) -> str:
    return json.dumps(doc, sort_keys=False)
