from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, NoReturn, Optional, Sequence, Tuple

from rank1det.bench import run_bench
from rank1det.config import CFG
from rank1det.errors import AgreementError, ParseError, UsageError
from rank1det.formats import parse_any, parse_chart, parse_rank1
from rank1det.formatter import fmt_bench, fmt_det, fmt_erratum, fmt_fscheck, fmt_verify
from rank1det.reports import EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE, dumps, envelope
from rank1det.scalars import ScalarKind
from rank1det.verify import encode_fscheck, run_det, run_erratum, run_fscheck, run_verify

logger = logging.getLogger(__name__)


# ============================================================
# Argument parsing
# ============================================================
def _sizes(text: str) -> List[int]:
    try:
        sizes = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not sizes:
        raise argparse.ArgumentTypeError("empty size list")
    return sizes


class _Parser(argparse.ArgumentParser):
    # usage errors go through the JSON envelope instead of exiting
    def error(self, message: str) -> NoReturn:
        raise UsageError(f"[USAGE] {self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="rank1det", description="Determinants of diagonal-plus-rank-one matrices.")
    ap.add_argument("--pretty", action="store_true", help="Human-readable rendering on stderr.")
    ap.add_argument("--log-level", default=None, help=f"Logging level (default {CFG.LOG_LEVEL}).")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="Oracle equivalence over seeded random instances.")
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--trials", type=int, default=1000)
    v.add_argument("--max-n", type=int, default=8)
    v.add_argument("--kind", choices=[k.value for k in ScalarKind], default="q")

    e = sub.add_parser("erratum", help="Corrected vs misprinted formula vs dense oracle.")
    e.add_argument("file", nargs="?", default=None, help="rank1 instance file (default: built-in demo).")

    f = sub.add_parser("fscheck", help="Einstein property of the Fubini-Study metric.")
    f.add_argument("--n", type=int, default=2)
    f.add_argument("--points", type=int, default=5)
    f.add_argument("--step", type=float, default=CFG.FD_STEP)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--point", default=None, help="Extra chart point file.")

    b = sub.add_parser("bench", help="Structured O(n) vs dense O(n^3) log-determinant.")
    b.add_argument("--sizes", type=_sizes, default=[64, 256, 1024])
    b.add_argument("--repeats", type=int, default=5)
    b.add_argument("--seed", type=int, default=0)

    d = sub.add_parser("det", help="Every determinant path on one rank1 or dense file.")
    d.add_argument("file")
    return ap


def _validate(args: argparse.Namespace) -> None:
    if args.command == "verify":
        if args.trials < 1:
            raise UsageError(f"[USAGE] --trials must be >= 1, got {args.trials}")
        if args.max_n < 0:
            raise UsageError(f"[USAGE] --max-n must be >= 0, got {args.max_n}")
    elif args.command == "fscheck":
        if args.n < 1:
            raise UsageError(f"[USAGE] --n must be >= 1, got {args.n}")
        if args.points < 1:
            raise UsageError(f"[USAGE] --points must be >= 1, got {args.points}")
        if not args.step > 0:
            raise UsageError(f"[USAGE] --step must be > 0, got {args.step}")
    elif args.command == "bench":
        if any(n < 1 for n in args.sizes):
            raise UsageError(f"[USAGE] every size must be >= 1, got {args.sizes}")
        if args.repeats < 1:
            raise UsageError(f"[USAGE] --repeats must be >= 1, got {args.repeats}")


def _read(path: str) -> str:
    try:
        raw = Path(path).read_bytes()
    except OSError as e:
        raise UsageError(f"[USAGE] cannot read {path}: {e.strerror or e}") from None
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as e:
        head = raw[: e.start]
        line = head.count(b"\n") + 1
        column = e.start - (head.rfind(b"\n") + 1) + 1
        raise ParseError(f"not valid UTF-8 ({e.reason})", line=line, column=column) from None


# ============================================================
# Commands: each returns (exit code, report body, pretty text)
# ============================================================
def cmd_verify(args: argparse.Namespace) -> Tuple[int, Dict[str, Any], str]:
    report = run_verify(seed=args.seed, trials=args.trials, max_n=args.max_n, kind=ScalarKind(args.kind))
    code = EXIT_OK if report.ok else EXIT_CHECK_FAILED
    return code, report.to_dict(), fmt_verify(report)


def cmd_erratum(args: argparse.Namespace) -> Tuple[int, Dict[str, Any], str]:
    instance = parse_rank1(_read(args.file)) if args.file else None
    report = run_erratum(instance)
    code = EXIT_OK if report.agree_corrected_dense else EXIT_CHECK_FAILED
    return code, report.to_dict(), fmt_erratum(report)


def cmd_fscheck(args: argparse.Namespace) -> Tuple[int, Dict[str, Any], str]:
    extra = []
    if args.point:
        p = parse_chart(_read(args.point))
        if p.n != args.n:
            raise UsageError(f"[USAGE] chart point has n={p.n}, expected --n {args.n}")
        extra.append(p)
    reports, summary = run_fscheck(n=args.n, points=args.points, h=args.step, seed=args.seed, extra_points=extra)
    body = encode_fscheck(reports, summary)
    code = EXIT_OK if summary["passed"] else EXIT_CHECK_FAILED
    return code, body, fmt_fscheck(summary, body["reports"])


def cmd_bench(args: argparse.Namespace) -> Tuple[int, Dict[str, Any], str]:
    try:
        report = run_bench(sizes=args.sizes, repeats=args.repeats, seed=args.seed)
    except AgreementError as e:
        logger.error("bench aborted: %s", e)
        return EXIT_CHECK_FAILED, {"error": str(e), "details": e.details}, str(e)
    return EXIT_OK, report.to_dict(), fmt_bench(report)


def cmd_det(args: argparse.Namespace) -> Tuple[int, Dict[str, Any], str]:
    ok, body = run_det(parse_any(_read(args.file)))
    return (EXIT_OK if ok else EXIT_CHECK_FAILED), body, fmt_det(body)


COMMANDS = {
    "verify": cmd_verify,
    "erratum": cmd_erratum,
    "fscheck": cmd_fscheck,
    "bench": cmd_bench,
    "det": cmd_det,
}


def _setup_logging(level: Optional[str]) -> None:
    name = (level or CFG.LOG_LEVEL).upper()
    if not isinstance(logging.getLevelName(name), int):
        raise UsageError(f"[USAGE] unknown log level {level!r}")
    logging.basicConfig(
        level=name,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )


# ============================================================
# MAIN
# ============================================================
def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # --help
        return int(e.code or 0)
    except UsageError as e:
        command = next((a for a in argv if a in COMMANDS), None)
        parser.print_usage(sys.stderr)
        print(e, file=sys.stderr)
        print(dumps(envelope(command, {"error": str(e)})))
        return EXIT_USAGE

    try:
        _setup_logging(args.log_level)
        _validate(args)
        logger.info("%s: start", args.command)
        code, body, pretty = COMMANDS[args.command](args)
    except ParseError as e:
        logger.error("%s", e)
        print(dumps(envelope(args.command, {"error": str(e), "line": e.line, "column": e.column})))
        return EXIT_USAGE
    except UsageError as e:
        logger.error("%s", e)
        print(dumps(envelope(args.command, {"error": str(e)})))
        return EXIT_USAGE

    print(dumps(envelope(args.command, body)))
    if args.pretty:
        print(pretty, file=sys.stderr)
    logger.info("%s: done, exit %d", args.command, code)
    return code


if __name__ == "__main__":
    sys.exit(main())
