from __future__ import annotations

import re
from typing import List, Tuple, Union

from rank1det.dense import DenseMatrix
from rank1det.errors import ParseError
from rank1det.fubini_study import ChartPoint
from rank1det.rank1 import Rank1System
from rank1det.scalars import Scalar, ScalarKind, format_scalar, parse_scalar

__all__ = [
    "parse_dense",
    "dump_dense",
    "parse_rank1",
    "dump_rank1",
    "parse_chart",
    "dump_chart",
    "parse_any",
]

_TOKEN = re.compile(r"\S+")

# (line number, [(column, token), ...])
_Line = Tuple[int, List[Tuple[int, str]]]


def _lines(text: str) -> List[_Line]:
    """
    Non-blank, non-comment lines with 1-based line/column positions.
    """
    out: List[_Line] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        toks = [(m.start() + 1, m.group()) for m in _TOKEN.finditer(body)]
        if toks:
            out.append((lineno, toks))
    return out


def _kind(token: Tuple[int, str], lineno: int) -> ScalarKind:
    col, txt = token
    try:
        return ScalarKind(txt)
    except ValueError:
        raise ParseError(f"unknown scalar kind {txt!r} (expected f64, c64, q or qi)", line=lineno, column=col) from None


def _dim(token: Tuple[int, str], lineno: int, minimum: int = 0) -> int:
    col, txt = token
    try:
        n = int(txt)
    except ValueError:
        raise ParseError(f"dimension must be an integer, got {txt!r}", line=lineno, column=col) from None
    if n < minimum:
        raise ParseError(f"dimension must be >= {minimum}, got {n}", line=lineno, column=col)
    return n


def _scalars(toks: List[Tuple[int, str]], kind: ScalarKind, lineno: int) -> List[Scalar]:
    out: List[Scalar] = []
    for col, txt in toks:
        try:
            out.append(parse_scalar(txt, kind))
        except (ValueError, ZeroDivisionError) as e:
            raise ParseError(f"bad {kind.value} scalar {txt!r} ({e})", line=lineno, column=col) from None
    return out


def _header(lines: List[_Line], keyword: str, n_tokens: Tuple[int, ...]) -> Tuple[int, List[Tuple[int, str]]]:
    if not lines:
        raise ParseError(f"empty input, expected '{keyword} ...' header", line=1)
    lineno, toks = lines[0]
    if toks[0][1] != keyword:
        raise ParseError(f"expected header keyword {keyword!r}, got {toks[0][1]!r}", line=lineno, column=toks[0][0])
    if len(toks) not in n_tokens:
        raise ParseError(f"malformed {keyword} header", line=lineno, column=toks[0][0])
    return lineno, toks


def _expect_count(values: List, n: int, lineno: int, what: str) -> None:
    if len(values) != n:
        raise ParseError(f"{what}: expected {n} entries, got {len(values)}", line=lineno)


# ============================================================
# dense n KIND
# ============================================================
def parse_dense(text: str) -> DenseMatrix:
    lines = _lines(text)
    lineno, toks = _header(lines, "dense", (3,))
    n = _dim(toks[1], lineno)
    kind = _kind(toks[2], lineno)
    body = lines[1:]
    if len(body) > n:
        raise ParseError(f"expected {n} matrix rows, got {len(body)}", line=body[n][0])
    if len(body) < n:
        last = body[-1][0] if body else lineno
        raise ParseError(f"expected {n} matrix rows, got {len(body)}", line=last + 1)
    rows: List[List[Scalar]] = []
    for row_no, row_toks in body:
        row = _scalars(row_toks, kind, row_no)
        _expect_count(row, n, row_no, "matrix row")
        rows.append(row)
    return DenseMatrix(n, tuple(v for r in rows for v in r), kind)


def dump_dense(m: DenseMatrix) -> str:
    out = [f"dense {m.n} {m.kind.value}"]
    for r in m.rows():
        out.append(" ".join(format_scalar(v, m.kind) for v in r))
    return "\n".join(out) + "\n"


# ============================================================
# rank1 n KIND / x: / a: / b:
# ============================================================
def parse_rank1(text: str) -> Rank1System:
    lines = _lines(text)
    lineno, toks = _header(lines, "rank1", (3,))
    n = _dim(toks[1], lineno)
    kind = _kind(toks[2], lineno)
    vectors = {}
    for row_no, row_toks in lines[1:]:
        col, label = row_toks[0]
        name = label.rstrip(":")
        if not label.endswith(":") or name not in ("x", "a", "b"):
            raise ParseError(f"expected 'x:', 'a:' or 'b:', got {label!r}", line=row_no, column=col)
        if name in vectors:
            raise ParseError(f"duplicate vector {name!r}", line=row_no, column=col)
        vals = _scalars(row_toks[1:], kind, row_no)
        _expect_count(vals, n, row_no, f"vector {name}")
        vectors[name] = vals
    last = lines[-1][0]
    for name in ("x", "a", "b"):
        if name not in vectors:
            raise ParseError(f"missing vector {name!r}", line=last + 1)
    return Rank1System(tuple(vectors["x"]), tuple(vectors["a"]), tuple(vectors["b"]), kind)


def dump_rank1(s: Rank1System) -> str:
    out = [f"rank1 {s.n} {s.kind.value}"]
    for name, vec in (("x", s.x), ("a", s.a), ("b", s.b)):
        out.append(" ".join([f"{name}:"] + [format_scalar(v, s.kind) for v in vec]))
    return "\n".join(out) + "\n"


# ============================================================
# chart n [c64|qi]
# ============================================================
def parse_chart(text: str) -> ChartPoint:
    lines = _lines(text)
    lineno, toks = _header(lines, "chart", (2, 3))
    n = _dim(toks[1], lineno, minimum=1)
    kind = _kind(toks[2], lineno) if len(toks) == 3 else ScalarKind.C64
    if not kind.is_complex:
        raise ParseError(f"chart coordinates are complex, got kind {kind.value}", line=lineno, column=toks[2][0])
    if len(lines) != 2:
        raise ParseError("expected exactly one coordinate line", line=lines[-1][0] if len(lines) > 2 else lineno + 1)
    row_no, row_toks = lines[1]
    z = _scalars(row_toks, kind, row_no)
    _expect_count(z, n, row_no, "chart coordinates")
    return ChartPoint(tuple(z), kind)


def dump_chart(p: ChartPoint) -> str:
    head = f"chart {p.n}" if p.kind is ScalarKind.C64 else f"chart {p.n} {p.kind.value}"
    return head + "\n" + " ".join(format_scalar(v, p.kind) for v in p.z) + "\n"


def parse_any(text: str) -> Union[Rank1System, DenseMatrix]:
    """
    Dispatch on the header keyword: rank1 or dense.
    """
    lines = _lines(text)
    if not lines:
        raise ParseError("empty input", line=1)
    lineno, toks = lines[0]
    keyword = toks[0][1]
    if keyword == "rank1":
        return parse_rank1(text)
    if keyword == "dense":
        return parse_dense(text)
    raise ParseError(f"unknown header {keyword!r} (expected rank1 or dense)", line=lineno, column=toks[0][0])
