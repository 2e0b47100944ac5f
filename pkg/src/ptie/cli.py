"""Command-line interface.

    ptie optimal  --n 7 --k 7
    ptie plan     --n 6 --k 3 [--format csv]
    ptie schedule --n 6 --k 3
    ptie simulate --n 12 --k 10 --seed 9
    ptie table    [--nlist 4,7,12,15] [--klist 2,4,7,10,15]
    ptie verify   --nmax 6

Exit status: 0 success, 1 verification or decoding failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import NamedTuple, Sequence

from . import oracle, planner
from .codec import build_schedule
from .core import DEFAULT_PAYLOAD_BITS, ProblemInstance
from .simulator import run_exchange

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
FORMATS = ("human", "csv", "json")
DEFAULT_NLIST = (4, 7, 12, 15)
DEFAULT_KLIST = (2, 4, 7, 10, 15)
NA = "NA"


class CommandResult(NamedTuple):
    output: str
    code: int
    diagnostic: str = ""


def _int_list(text: str) -> list[int]:
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("list must not be empty")
    return values


def _dump(record) -> str:
    return json.dumps(record, sort_keys=True)


def _csv(rows: list[list]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue().rstrip("\n")


# --- optimal ---------------------------------------------------------------

def optimal_record(instance: ProblemInstance) -> dict:
    coded = planner.optimal_count(instance)
    uncoded = planner.baseline_no_coding_count(instance) if instance.k >= 2 else None
    return {
        "n": instance.n,
        "k": instance.k,
        "coded": coded,
        "uncoded": uncoded,
        "savings": None if uncoded is None else uncoded - coded,
    }


def cmd_optimal(instance: ProblemInstance, fmt: str) -> CommandResult:
    rec = optimal_record(instance)
    if fmt == "json":
        return CommandResult(_dump(rec), EXIT_OK)
    if fmt == "csv":
        row = [rec[c] if rec[c] is not None else NA for c in ("n", "k", "coded", "uncoded", "savings")]
        return CommandResult(_csv([["n", "k", "coded", "uncoded", "savings"], row]), EXIT_OK)
    lines = [f"n={instance.n} k={instance.k}", f"coded: {rec['coded']}"]
    if rec["uncoded"] is None:
        lines.append("uncoded: undefined for k=1")
    else:
        lines += [f"uncoded: {rec['uncoded']}", f"savings: {rec['savings']}"]
    return CommandResult("\n".join(lines), EXIT_OK)


# --- plan / schedule -------------------------------------------------------

def cmd_plan(instance: ProblemInstance, fmt: str) -> CommandResult:
    plan = planner.plan_transmissions(instance)
    if fmt == "json":
        return CommandResult(_dump(plan.to_record(instance)), EXIT_OK)
    if fmt == "csv":
        return CommandResult(plan.to_csv(), EXIT_OK)
    return CommandResult(f"{plan.to_csv()}\ntotal: {plan.total()}", EXIT_OK)


def cmd_schedule(instance: ProblemInstance, fmt: str, literal: bool = False) -> CommandResult:
    schedule = build_schedule(instance, literal=literal)
    if fmt == "json":
        return CommandResult(_dump(schedule.to_record()), EXIT_OK)
    if fmt == "csv":
        rows = [["sender", "j", "packet"]] + [[e.sender, e.j, str(e.vector)] for e in schedule]
        return CommandResult(_csv(rows), EXIT_OK)
    return CommandResult("\n".join(schedule.to_lines()), EXIT_OK)


# --- simulate --------------------------------------------------------------

SIM_CSV_COLUMNS = ["n", "k", "seed", "payload_bits", "transmissions", "success"]


def cmd_simulate(
    instance: ProblemInstance, seed: int, width: int, fmt: str, literal: bool = False
) -> CommandResult:
    report = run_exchange(instance, seed=seed, width=width, literal=literal)
    code = EXIT_OK if report.success else EXIT_FAIL
    diagnostic = report.first_failure() or ""
    if fmt == "json":
        return CommandResult(_dump(report.to_record()), code, diagnostic)
    if fmt == "csv":
        row = [report.n, report.k, report.seed, report.payload_width,
               report.total_transmissions, str(report.success).lower()]
        return CommandResult(_csv([SIM_CSV_COLUMNS, row]), code, diagnostic)
    return CommandResult(report.summary(), code, diagnostic)


# --- table -----------------------------------------------------------------

def comparison_table(n_list: Sequence[int], k_list: Sequence[int]) -> dict:
    """Coded optimum per (n, k) and the uncoded baselines; None marks k > n."""
    show_k2 = 2 in k_list
    show_k3 = any(k >= 3 for k in k_list)
    rows = []
    for n in n_list:
        coded = {}
        for k in k_list:
            coded[str(k)] = planner.optimal_count(ProblemInstance(n, k)) if k <= n else None
        uncoded = {}
        if show_k2:
            uncoded["k=2"] = planner.baseline_no_coding_count(ProblemInstance(n, 2))
        if show_k3:
            uncoded["k>=3"] = planner.baseline_no_coding_count(ProblemInstance(n, 3)) if n >= 3 else None
        rows.append({"n": n, "coded": coded, "uncoded": uncoded})
    return {"n_list": list(n_list), "k_list": list(k_list), "rows": rows}


def _cell(v) -> str:
    return NA if v is None else str(v)


def table_to_csv(table: dict) -> str:
    k_cols = [f"nc_k{k}" for k in table["k_list"]]
    u_keys = list(table["rows"][0]["uncoded"]) if table["rows"] else []
    u_cols = [{"k=2": "uncoded_k2", "k>=3": "uncoded_k3plus"}[u] for u in u_keys]
    rows = [["N"] + k_cols + u_cols]
    for r in table["rows"]:
        rows.append([r["n"]] + [_cell(v) for v in r["coded"].values()]
                    + [_cell(r["uncoded"][u]) for u in u_keys])
    return _csv(rows)


def table_from_csv(text: str) -> dict:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    k_list = [int(h[len("nc_k"):]) for h in header if h.startswith("nc_k")]
    u_keys = [{"uncoded_k2": "k=2", "uncoded_k3plus": "k>=3"}[h] for h in header if h.startswith("uncoded_")]
    parse = lambda s: None if s == NA else int(s)
    rows, n_list = [], []
    for line in reader:
        n = int(line[0])
        n_list.append(n)
        coded = {str(k): parse(v) for k, v in zip(k_list, line[1:1 + len(k_list)])}
        uncoded = {u: parse(v) for u, v in zip(u_keys, line[1 + len(k_list):])}
        rows.append({"n": n, "coded": coded, "uncoded": uncoded})
    return {"n_list": n_list, "k_list": k_list, "rows": rows}


def table_to_human(table: dict) -> str:
    k_list = table["k_list"]
    u_keys = list(table["rows"][0]["uncoded"]) if table["rows"] else []
    u_head = {"k=2": "k=2", "k>=3": "3<=k<=N"}
    title = "with network coding"
    w = max(8, -(-len(title) // len(k_list)))
    left = "".ljust(6) + "".join(f"k={k}".rjust(w) for k in k_list)
    right = "".join(u_head[u].rjust(w + 1) for u in u_keys)
    lines = [
        "".ljust(6) + title.rjust(w * len(k_list)) + " | without NC",
        left + " |" + right,
    ]
    for r in table["rows"]:
        coded = "".join(_cell(v).rjust(w) for v in r["coded"].values())
        unc = "".join(_cell(r["uncoded"][u]).rjust(w + 1) for u in u_keys)
        lines.append(f"N={r['n']}".ljust(6) + coded + " |" + unc)
    return "\n".join(lines)


def cmd_table(n_list: Sequence[int], k_list: Sequence[int], fmt: str) -> CommandResult:
    table = comparison_table(n_list, k_list)
    if fmt == "json":
        return CommandResult(_dump(table), EXIT_OK)
    if fmt == "csv":
        return CommandResult(table_to_csv(table), EXIT_OK)
    return CommandResult(table_to_human(table), EXIT_OK)


# --- verify ----------------------------------------------------------------

def cmd_verify(n_max: int, fmt: str) -> CommandResult:
    cells = oracle.verify_sweep(n_max)
    failing = [f"(n={c.n}, k={c.k})" for c in cells if not c.ok]
    code = EXIT_FAIL if failing else EXIT_OK
    diagnostic = f"verification failed for {' '.join(failing)}" if failing else ""
    if fmt == "json":
        return CommandResult(_dump({"n_max": n_max, "cells": [
            {"n": c.n, "k": c.k, "ok": c.ok, "failures": c.failures} for c in cells]}), code, diagnostic)
    if fmt == "csv":
        rows = [["n", "k", "ok", "failures"]]
        rows += [[c.n, c.k, str(c.ok).lower(), "; ".join(c.failures)] for c in cells]
        return CommandResult(_csv(rows), code, diagnostic)
    verdict = "all checks passed" if code == EXIT_OK else "verification FAILED"
    return CommandResult(f"{oracle.render_matrix(cells)}\n{verdict}", code, diagnostic)


# --- argument handling -----------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ptie", description="Partial third-party information exchange with pairwise XOR coding."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, nk=True):
        if nk:
            p.add_argument("--n", type=int, required=True, help="number of clients")
            p.add_argument("--k", type=int, required=True, help="clients 1..k must learn everything")
        p.add_argument("--format", choices=FORMATS, default="human")

    add_common(sub.add_parser("optimal", help="coded optimum and uncoded baseline"))
    add_common(sub.add_parser("plan", help="packets sent per client"))
    p = sub.add_parser("schedule", help="coded packets sent by each client")
    add_common(p)
    p.add_argument("--literal", action="store_true", help="unrepaired rule for odd k >= 5")
    p = sub.add_parser("simulate", help="run a lossless broadcast exchange")
    add_common(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--payload-bits", type=int, default=DEFAULT_PAYLOAD_BITS)
    p.add_argument("--literal", action="store_true", help="unrepaired rule for odd k >= 5")
    p = sub.add_parser("table", help="coded vs uncoded comparison grid")
    add_common(p, nk=False)
    p.add_argument("--nlist", type=_int_list, default=list(DEFAULT_NLIST))
    p.add_argument("--klist", type=_int_list, default=list(DEFAULT_KLIST))
    p = sub.add_parser("verify", help="brute-force and rank verification sweep")
    add_common(p, nk=False)
    p.add_argument("--nmax", type=int, default=6)
    return parser


def _instance(parser: argparse.ArgumentParser, n: int, k: int) -> ProblemInstance:
    try:
        return ProblemInstance(n, k)
    except ValueError as exc:
        parser.error(str(exc))


def run(argv: Sequence[str] | None = None) -> CommandResult:
    """Parse and execute.  Usage errors raise SystemExit(2) before any work is done."""
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = args.format
    if args.command == "table":
        if any(n < 2 for n in args.nlist):
            parser.error("every N in --nlist must be >= 2")
        if any(k < 1 for k in args.klist):
            parser.error("every k in --klist must be >= 1")
        return cmd_table(args.nlist, args.klist, fmt)
    if args.command == "verify":
        if not 2 <= args.nmax <= oracle.VERIFY_MAX_N:
            parser.error(f"--nmax must be in 2..{oracle.VERIFY_MAX_N}")
        return cmd_verify(args.nmax, fmt)

    instance = _instance(parser, args.n, args.k)
    if args.command == "optimal":
        return cmd_optimal(instance, fmt)
    if args.command == "plan":
        return cmd_plan(instance, fmt)
    if args.command == "schedule":
        return cmd_schedule(instance, fmt, literal=args.literal)
    if args.payload_bits < 1:
        parser.error("--payload-bits must be >= 1")
    if args.seed < 0:
        parser.error("--seed must be non-negative")
    return cmd_simulate(instance, args.seed, args.payload_bits, fmt, literal=args.literal)


def main(argv: Sequence[str] | None = None) -> int:
    try:
        output, code, diagnostic = run(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if output:
        print(output)
    if code == EXIT_FAIL:
        print(f"error: {diagnostic or 'check failed'}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
