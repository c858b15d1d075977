"""Command-line front end: ``severi-fock <command> [options]``.

Exit codes: 0 success, 1 a check failed, 2 bad input, 3 truncation overflow.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from typing import List, Optional, Sequence

from . import engine
from .cache import ResultCache, cache_key
from .checks import SUITES, run_suite
from .coeffring import Truncation
from .engine import InvariantRecord, TruncationError
from .operators import OperatorConfig
from .partitions import parse_partition

THREADS_ENV = "SEVERI_FOCK_THREADS"

RECORD_FIELDS = ["kind", "k", "d1", "d2", "g", "n", "value", "convention",
                 "muC", "nuC", "muE", "nuE"]


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--convention", choices=("printed", "corrected"), default="corrected",
                   help="weight class of the fiber creation in w_0 and w_1")
    p.add_argument("--u-convention", choices=("printed", "alternate"), default="printed",
                   help="u-exponent of the second sum of M")
    p.add_argument("--threads", type=int, default=None,
                   help=f"worker threads (default: ${THREADS_ENV} or 1)")
    p.add_argument("--cache", metavar="PATH", default=None, help="JSON-lines result cache")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("--trunc-q1", type=int, default=None, help="explicit Q1 truncation")
    p.add_argument("--trunc-q2", type=int, default=None, help="explicit Q2 truncation")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="severi-fock",
        description="Exact Severi degrees and Gromov-Witten invariants of P^2 and F_k.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, helptext in (("gw", "invariant of F_k"),
                           ("transverse", "transverse invariant of F_k")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        _class_args(p)

    p = sub.add_parser("relative", parents=[common], help="relative invariant of F_k")
    _class_args(p)
    for flag in ("--muC", "--nuC", "--muE", "--nuE"):
        p.add_argument(flag, default="", help="partition such as 2+1+1 (free: mu, fixed: nu)")

    p = sub.add_parser("p2", parents=[common], help="Severi degree of P^2")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--genus", type=int, required=True)

    p = sub.add_parser("p2rel", parents=[common], help="relative invariant of P^2")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--mu", default="", help="free tangencies along the line")
    p.add_argument("--nu", default="", help="fixed tangencies along the line")

    p = sub.add_parser("check", parents=[common], help="run a self-check suite")
    p.add_argument("suite", choices=SUITES + ("all",))

    p = sub.add_parser("table", parents=[common], help="batch table of invariants")
    p.add_argument("--surface", choices=("p2", "f0", "f1", "f2", "f3"), required=True)
    p.add_argument("--dmax", type=int, default=0, help="P^2 degree bound")
    p.add_argument("--d1max", type=int, default=0)
    p.add_argument("--d2max", type=int, default=0)
    p.add_argument("--kind", choices=("gw", "transverse"), default="gw")
    p.add_argument("--connected", action="store_true",
                   help="also emit connected counts (always on for p2)")
    return parser


def _class_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--d1", type=int, required=True)
    p.add_argument("--d2", type=int, required=True)
    p.add_argument("--genus", type=int, required=True)


def _threads(args) -> int:
    if args.threads is not None:
        n = args.threads
    else:
        raw = os.environ.get(THREADS_ENV, "1")
        try:
            n = int(raw)
        except ValueError:
            raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}")
    if n < 1:
        raise ValueError("thread count must be positive")
    return n


def _config(args, k: int, d1: int, d2: int) -> OperatorConfig:
    trunc = None
    if args.trunc_q1 is not None or args.trunc_q2 is not None:
        trunc = Truncation(d1 if args.trunc_q1 is None else args.trunc_q1,
                           d2 if args.trunc_q2 is None else args.trunc_q2)
    return OperatorConfig(k, args.u_convention, args.convention, trunc)


# ---- output -------------------------------------------------------------------

def _record_rows(records: Sequence[InvariantRecord]) -> List[dict]:
    return [r.as_dict() for r in records]


def _emit(rows: List[dict], fmt: str, fields: List[str], out) -> None:
    if fmt == "json":
        for row in rows:
            out.write(json.dumps(row, sort_keys=False) + "\n")
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=fields, extrasaction="ignore",
                                lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
        out.write(buf.getvalue())
    else:
        for row in rows:
            out.write(" ".join(f"{key}={row[key]}" for key in fields if key in row) + "\n")


# ---- commands -----------------------------------------------------------------

def _cached(cache: Optional[ResultCache], key: str, compute, trunc=None):
    if cache is not None:
        hit = cache.get(key)
        if hit is not None:
            return hit
    value = compute()
    if cache is not None:
        cache.put(key, value, trunc)
    return value


def _single(args, cache) -> List[InvariantRecord]:
    cmd = args.command
    if cmd in ("gw", "transverse", "relative"):
        k, d1, d2, g = args.k, args.d1, args.d2, args.genus
        if not 0 <= k <= 3:
            raise ValueError("--k must be between 0 and 3")
        cfg = _config(args, k, d1, d2)
        if cmd == "relative":
            rel = tuple(parse_partition(getattr(args, f)) for f in ("muC", "nuC", "muE", "nuE"))
            n = engine.n_points_relative(k, g, d1, d2, *rel)
            fn = lambda: engine.relative_invariant(k, g, d1, d2, *rel, cfg=cfg)
        else:
            rel = None
            n = engine.n_points(k, g, d1, d2)
            fn = (engine.gw_invariant if cmd == "gw" else engine.transverse_invariant)
            fn = (lambda f: lambda: f(k, g, d1, d2, cfg))(fn)
        key = cache_key(cmd, k, d1, d2, g, cfg.fingerprint, rel)
        value = _cached(cache, key, fn, cfg.trunc and (cfg.trunc.max_q1, cfg.trunc.max_q2))
        return [InvariantRecord(cmd, k, d1, d2, g, n, value, cfg.fingerprint, rel)]
    d, g = args.degree, args.genus
    cfg = _config(args, 1, d, d)
    if cmd == "p2":
        n = engine.n_points_p2(g, d)
        key = cache_key("p2", 1, d, d, g, cfg.fingerprint)
        value = _cached(cache, key, lambda: engine.p2_severi(g, d, cfg))
        return [InvariantRecord("p2", 1, d, d, g, n, value, cfg.fingerprint)]
    mu, nu = parse_partition(args.mu), parse_partition(args.nu)
    n = engine.n_points_p2_relative(g, d, mu, nu)
    key = cache_key("p2rel", 1, d, d, g, cfg.fingerprint, (mu, nu))
    value = _cached(cache, key, lambda: engine.p2_relative(g, d, mu, nu, cfg))
    return [InvariantRecord("p2rel", 1, d, d, g, n, value, cfg.fingerprint,
                            (mu, nu, (), ()))]


def _table(args) -> List[InvariantRecord]:
    if args.surface == "p2":
        cfg = OperatorConfig(1, args.u_convention, args.convention)
        rows = engine.p2_table(args.dmax, cfg)
        return rows + engine.connected_from_disconnected(rows)
    k = int(args.surface[1])
    cfg = OperatorConfig(k, args.u_convention, args.convention)
    rows = engine.fk_table(k, args.d1max, args.d2max, cfg, kind=args.kind)
    if args.connected:
        rows = rows + engine.connected_from_disconnected(rows)
    return rows


def _check(args, out) -> int:
    cfg = OperatorConfig(1, args.u_convention, args.convention)
    results = run_suite(args.suite, cfg, _threads(args))
    rows = [{"suite": r.suite, "case": r.name,
             "status": "info" if r.informational else ("pass" if r.ok else "fail"),
             "detail": r.detail} for r in results]
    fields = ["suite", "case", "status", "detail"]
    if args.format == "text":
        for row in rows:
            out.write(f"{row['status'].upper():4} [{row['suite']}] {row['case']}: {row['detail']}\n")
    else:
        _emit(rows, args.format, fields, out)
    failed = sum(1 for r in results if not r.ok and not r.informational)
    graded = sum(1 for r in results if not r.informational)
    if args.format == "text":
        out.write(f"summary: {graded - failed}/{graded} passed\n")
    return 1 if failed else 0


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _threads(args)
        if args.command == "check":
            return _check(args, out)
        if args.command == "table":
            records = _table(args)
        else:
            cache = ResultCache(args.cache) if args.cache else None
            records = _single(args, cache)
        _emit(_record_rows(records), args.format, RECORD_FIELDS, out)
        return 0
    except TruncationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
