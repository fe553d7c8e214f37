from __future__ import annotations

from typing import Any, Dict, List

from rank1det.reports import BenchReport, ErratumReport, VerifyReport


def _mark(ok: bool) -> str:
    return "ok" if ok else "FAIL"


def fmt_verify(r: VerifyReport) -> str:
    lines: list[str] = []
    lines.append(f"VERIFY {r.kind} seed={r.seed} trials={r.trials}  [{_mark(r.ok)}]")
    lines.append(f"dims: {r.dims[0]}..{r.dims[-1]}" if r.dims else "dims: -")
    lines.append(f"mismatches: {r.mismatches} | expansion checked: {r.expansion_checked}")
    lines.append("paths: " + ", ".join(f"{k}={v}" for k, v in sorted(r.paths_used.items())))
    if r.first_mismatch is not None:
        lines.append("")
        lines.append(f"first mismatch (trial {r.first_mismatch['trial']}):")
        lines.append(r.first_mismatch["instance"].rstrip())
        for name, value in r.first_mismatch["values"].items():
            lines.append(f"• {name} = {value}")
    return "\n".join(lines)


def fmt_erratum(r: ErratumReport) -> str:
    d = r.to_dict()
    lines: list[str] = []
    lines.append(f"ERRATUM n={r.instance.n} {r.instance.kind.value}")
    lines.append(f"• corrected  = {d['corrected']}  ({d['corrected_path']}) {_mark(r.agree_corrected_dense)}")
    lines.append(f"• misprinted = {d['erroneous']}  {'agrees' if r.agree_erroneous_dense else 'differs'}")
    lines.append(f"• dense      = {d['dense']}")
    return "\n".join(lines)


def fmt_fscheck(summary: Dict[str, Any], reports: List[Dict[str, Any]]) -> str:
    lines: list[str] = []
    lines.append(
        f"FSCHECK n={summary['n']} points={summary['points']} h={summary['step']:g}  [{_mark(summary['passed'])}]"
    )
    lines.append(f"tolerance={summary['tolerance']:.3e} | max deviation={summary['max_deviation']:.3e}")
    for i, r in enumerate(reports):
        lines.append(
            f"  #{i}: dev={r['max_abs_deviation']:.3e} c={r['estimated_constant']:.9f} (expected {r['expected_constant']})"
        )
    return "\n".join(lines)


def fmt_bench(r: BenchReport) -> str:
    lines: list[str] = []
    lines.append(f"BENCH seed={r.seed} repeats={r.repeats}")
    for n, ts, td, sp, diff in zip(r.sizes, r.structured_seconds, r.dense_seconds, r.speedups, r.max_log_diff):
        lines.append(f"  n={n:<6d} structured={ts:.3e}s dense={td:.3e}s speedup={sp:.1f}x diff={diff:.1e}")
    lines.append(f"checksum={r.checksum:.12g}")
    return "\n".join(lines)


def fmt_det(body: Dict[str, Any]) -> str:
    lines: list[str] = []
    if body["input"] == "dense":
        lines.append(f"DET dense n={body['n']} {body['kind']}")
        lines.append(f"• dense    = {body['dense']}")
        if "cofactor" in body:
            lines.append(f"• cofactor = {body['cofactor']}")
        return "\n".join(lines)
    inst = body["instance"]
    lines.append(f"DET rank1 n={inst['n']} {inst['kind']}  [{_mark(body['agree'])}]")
    for name in ("corrected", "division_free", "expansion", "erroneous", "dense"):
        if name in body:
            lines.append(f"• {name:<13} = {body[name]}")
    lines.append(f"path: {body['corrected_path']}")
    return "\n".join(lines)
