"""Command-line interface.

Exit codes: ``check-sat`` returns 10 (SAT) or 20 (UNSAT); ``entails``,
``sensitive`` and ``dangerous`` return 0 when the property holds and 3 when
it does not; any error returns 1.
"""

from __future__ import annotations

import argparse
import csv
import io as _stdio
import logging
import random
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass
from pathlib import Path
from typing import Sequence

from .forget import (
    INCONSISTENT,
    PolyKB,
    SizeCapExceeded,
    canonical_forget_kb,
    canonical_retract,
    canonical_saturate,
    formula_kb_size,
    forget_var,
    retract,
    saturate,
)
from .formula import Literal, parse_formula, print_formula, variables
from .io import format_dimacs, load_formulas, load_kb, random_kcnf
from .reason import classify_facts, entails, entails_localized, is_sensitive

log = logging.getLogger("boolforget")

EXIT_SAT = 10
EXIT_UNSAT = 20
EXIT_HOLDS = 0
EXIT_FAILS = 3
EXIT_ERROR = 1

CSV_FIELDS = ("step", "variable", "operator", "kb_members", "kb_size_symbols", "elapsed_ms", "status")


class UsageError(ValueError):
    pass


@dataclass
class BenchRow:
    step: int
    variable: str
    operator: str
    kb_members: int
    kb_size_symbols: int
    elapsed_ms: float
    status: str = "ok"


def _split(text: str | None) -> list[str]:
    if not text:
        return []
    return [part.strip() for part in text.split(",") if part.strip()]


def _load(path: str, assume: Sequence[str] = ()) -> PolyKB:
    kb = load_kb(path)
    if assume:
        kb = kb.add_formulas(parse_formula(a) for a in assume)
    return kb


def _formula_language(formulas) -> set[str]:
    names: set[str] = set()
    for f in formulas:
        names |= variables(f)
    return names


# -- commands --------------------------------------------------------------

def cmd_check_sat(args) -> int:
    if args.op == "canonical":
        formulas = load_formulas(args.file)
        outcome, trace = canonical_saturate(
            formulas, _split(args.order) or None, subsume=args.subsume, size_cap=args.size_cap
        )
    else:
        kb = load_kb(args.file)
        outcome, trace = saturate(kb, _split(args.order) or None, subsume=args.subsume, size_cap=args.size_cap)
    if args.verbose:
        for step in trace.steps:
            print(f"c forgot {step.variable}: {step.kb_polys} members, {step.kb_size_symbols} symbols")
    if outcome == INCONSISTENT:
        print("s UNSATISFIABLE")
        return EXIT_UNSAT
    print("s SATISFIABLE")
    return EXIT_SAT


def _forget_list(language: set[str], forget: str | None, keep: str | None) -> list[str]:
    if forget is not None:
        names = _split(forget)
        unknown = [n for n in names if n not in language]
        if unknown:
            raise UsageError(f"unknown variable(s): {', '.join(unknown)}")
        return list(dict.fromkeys(names))
    kept = _split(keep)
    unknown = [n for n in kept if n not in language]
    if unknown:
        raise UsageError(f"unknown variable(s): {', '.join(unknown)}")
    return sorted(language - set(kept))


def cmd_retract(args) -> int:
    order = _split(args.order) or None
    if args.op == "canonical":
        formulas = load_formulas(args.file)
        targets = _forget_list(_formula_language(formulas), args.forget, args.keep)
        if order is not None and sorted(order) != sorted(targets):
            raise UsageError("--order must be a permutation of the forgotten variables")
        result = canonical_retract(
            formulas, targets, order, refine=not args.full_pairs, subsume=args.subsume, size_cap=args.size_cap
        )
        if args.emit == "poly":
            kb = PolyKB.from_formulas(result)
            lines = kb.formatted() or ["1"]
        else:
            lines = sorted(print_formula(f) for f in result) or ["T"]
    else:
        kb = load_kb(args.file)
        targets = _forget_list(set(kb.language()), args.forget, args.keep)
        if order is not None and sorted(order) != sorted(targets):
            raise UsageError("--order must be a permutation of the forgotten variables")
        result = retract(
            kb, targets, order, refine=not args.full_pairs, subsume=args.subsume, size_cap=args.size_cap
        )
        if args.emit == "poly":
            lines = result.formatted() or ["1"]
        else:
            lines = [print_formula(f) for f in result.to_formulas()] or ["T"]
    for line in lines:
        print(line)
    return 0


def cmd_entails(args) -> int:
    kb = _load(args.file, args.assume)
    goal = parse_formula(args.goal)
    decide = entails_localized if args.localize else entails
    verdict = decide(kb, goal, subsume=args.subsume, size_cap=args.size_cap)
    if verdict.retraction_used is not None and args.verbose:
        for line in verdict.retraction_used.formatted() or ["1"]:
            print(f"c retraction: {line}")
    print("holds" if verdict.holds else "does not hold")
    return EXIT_HOLDS if verdict.holds else EXIT_FAILS


def cmd_sensitive(args) -> int:
    kb = _load(args.file, args.assume)
    f = parse_formula(args.formula)
    if args.var not in variables(f):
        raise UsageError(f"{args.var!r} does not occur in the formula")
    sensitive = is_sensitive(kb, f, args.var, subsume=args.subsume, size_cap=args.size_cap)
    print("sensitive" if sensitive else "not sensitive")
    return EXIT_HOLDS if sensitive else EXIT_FAILS


def _literals(text: str | None) -> list[Literal]:
    return [Literal.parse(part) for part in _split(text)]


def cmd_dangerous(args) -> int:
    kb = _load(args.file, args.assume)
    report = classify_facts(
        kb, _literals(args.facts), _literals(args.state), args.warning,
        subsume=args.subsume, size_cap=args.size_cap,
    )

    def show(lits) -> str:
        ordered = sorted(lits, key=lambda lit: (_natural(lit.name), not lit.positive))
        return ", ".join(str(lit) for lit in ordered) or "-"

    print(f"dangerous: {show(report.dangerous)}")
    print(f"safe: {show(report.safe)}")
    print(f"vacuous: {show(report.vacuous)}")
    return EXIT_HOLDS if report.dangerous else EXIT_FAILS


def _natural(text: str):
    return [int(tok) if tok.isdigit() else tok for tok in re.split(r"(\d+)", text)]


# -- bench -----------------------------------------------------------------

def bench_sequence(language: Sequence[str], steps: int, seed: int | None) -> list[str]:
    """The seeded variable sequence shared by both operators."""
    pool = sorted(language, key=_natural)
    if steps > len(pool):
        raise UsageError(f"--steps {steps} exceeds the {len(pool)} variables of the KB")
    return random.Random(seed).sample(pool, steps)


def _run_independence(
    path: str, sequence: Sequence[str], size_cap: int | None, status: str, subsume: bool = True
) -> list[BenchRow]:
    kb = load_kb(path)
    rows = []
    for i, name in enumerate(sequence, start=1):
        start = time.perf_counter()
        try:
            kb = forget_var(kb, name, subsume=subsume, size_cap=size_cap)
        except SizeCapExceeded as exc:
            elapsed = (time.perf_counter() - start) * 1000
            rows.append(BenchRow(i, name, "independence", len(kb), exc.size, round(elapsed, 3), "size-cap"))
            break
        elapsed = (time.perf_counter() - start) * 1000
        rows.append(BenchRow(i, name, "independence", len(kb), kb.size(), round(elapsed, 3), status))
    return rows


def _run_canonical(
    path: str, sequence: Sequence[str], size_cap: int | None, status: str, subsume: bool = True
) -> list[BenchRow]:
    kb = frozenset(load_formulas(path))
    rows = []
    for i, name in enumerate(sequence, start=1):
        start = time.perf_counter()
        try:
            kb = canonical_forget_kb(kb, name, subsume=subsume, size_cap=size_cap)
        except SizeCapExceeded as exc:
            elapsed = (time.perf_counter() - start) * 1000
            rows.append(BenchRow(i, name, "canonical", len(kb), exc.size, round(elapsed, 3), "size-cap"))
            break
        elapsed = (time.perf_counter() - start) * 1000
        rows.append(BenchRow(i, name, "canonical", len(kb), formula_kb_size(kb), round(elapsed, 3), status))
    return rows


_RUNNERS = {"independence": _run_independence, "canonical": _run_canonical}


def run_bench(
    path: str,
    op: str = "both",
    steps: int = 10,
    seed: int | None = None,
    size_cap: int | None = None,
    parallel: bool = False,
    subsume: bool = True,
) -> list[BenchRow]:
    language = load_kb(path).language()
    sequence = bench_sequence(language, steps, seed)
    ops = ["independence", "canonical"] if op == "both" else [op]
    status = "ok-parallel" if parallel and len(ops) > 1 else "ok"
    if status == "ok-parallel":
        with ProcessPoolExecutor(max_workers=len(ops)) as pool:
            futures = [pool.submit(_RUNNERS[o], path, sequence, size_cap, status, subsume) for o in ops]
            results = [f.result() for f in futures]
    else:
        results = [_RUNNERS[o](path, sequence, size_cap, status, subsume) for o in ops]
    return [row for rows in results for row in rows]


def write_bench_csv(rows: Sequence[BenchRow], out) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for row in rows:
        writer.writerow(astuple(row))


def read_bench_csv(text: str) -> list[BenchRow]:
    reader = csv.DictReader(_stdio.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_FIELDS:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")
    rows = []
    for rec in reader:
        rows.append(
            BenchRow(
                step=int(rec["step"]),
                variable=rec["variable"],
                operator=rec["operator"],
                kb_members=int(rec["kb_members"]),
                kb_size_symbols=int(rec["kb_size_symbols"]),
                elapsed_ms=float(rec["elapsed_ms"]),
                status=rec["status"],
            )
        )
    return rows


def trend_report(rows: Sequence[BenchRow]) -> str:
    """One line per operator: steps completed, first and last size, growth factor."""
    lines = []
    for op in ("independence", "canonical"):
        mine = [r for r in rows if r.operator == op]
        if not mine:
            continue
        done = [r for r in mine if r.status.startswith("ok")]
        first, last = mine[0], mine[-1]
        growth = last.kb_size_symbols / first.kb_size_symbols if first.kb_size_symbols else float("nan")
        total_ms = sum(r.elapsed_ms for r in mine)
        lines.append(
            f"{op}: {len(done)}/{len(mine)} steps ok, size {first.kb_size_symbols} -> "
            f"{last.kb_size_symbols} (x{growth:.2f}), {total_ms:.1f} ms"
            + ("" if len(done) == len(mine) else f", stopped: {last.status}")
        )
    return "\n".join(lines)


def cmd_bench(args) -> int:
    rows = run_bench(args.file, args.op, args.steps, args.seed, args.size_cap, args.parallel, args.subsume)
    if args.out in (None, "-"):
        write_bench_csv(rows, sys.stdout)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            write_bench_csv(rows, fh)
    report = trend_report(rows)
    if report:
        print(report, file=sys.stderr)
    return 0


def cmd_gen_cnf(args) -> int:
    problem = random_kcnf(args.vars, args.clauses, args.width, args.seed)
    text = format_dimacs(problem)
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8")
    return 0


# -- wiring ----------------------------------------------------------------

def _subsume_flags(p: argparse.ArgumentParser, default: bool) -> None:
    p.add_argument("--subsume", dest="subsume", action="store_true", default=default,
                   help="drop members entailed by a smaller member after each step"
                   + (" (default)" if default else ""))
    p.add_argument("--no-subsume", dest="subsume", action="store_false",
                   help="keep every derived member" + ("" if default else " (default)"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="boolforget", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    parser.add_argument("--size-cap", type=int, default=None,
                        help="abort when a KB exceeds this many symbols (default: $BOOLFORGET_SIZE_CAP or 5000000)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-sat", help="decide satisfiability by saturation")
    p.add_argument("file")
    p.add_argument("--op", choices=("independence", "canonical"), default="independence")
    p.add_argument("--order", help="comma-separated elimination order")
    _subsume_flags(p, True)
    p.set_defaults(func=cmd_check_sat)

    p = sub.add_parser("retract", help="forget variables and print the retraction")
    p.add_argument("file")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--forget", help="comma-separated variables to forget")
    group.add_argument("--keep", help="comma-separated variables to keep")
    p.add_argument("--order", help="comma-separated order of the forgotten variables")
    p.add_argument("--op", choices=("independence", "canonical"), default="independence")
    p.add_argument("--emit", choices=("poly", "formula"), default="poly")
    p.add_argument("--full-pairs", action="store_true",
                   help="pair every member, not only those mentioning the variable")
    _subsume_flags(p, False)
    p.set_defaults(func=cmd_retract)

    p = sub.add_parser("entails", help="decide whether the KB entails a goal")
    p.add_argument("file")
    p.add_argument("--goal", required=True)
    p.add_argument("--localize", action="store_true", help="retract onto the goal's variables first")
    p.add_argument("--assume", action="append", default=[], help="extra formula added to the KB")
    _subsume_flags(p, True)
    p.set_defaults(func=cmd_entails)

    p = sub.add_parser("sensitive", help="is a formula sensitive in a variable w.r.t. the KB")
    p.add_argument("file")
    p.add_argument("--formula", required=True)
    p.add_argument("--var", required=True)
    p.add_argument("--assume", action="append", default=[], help="extra formula added to the KB")
    _subsume_flags(p, True)
    p.set_defaults(func=cmd_sensitive)

    p = sub.add_parser("dangerous", help="find facts that lead to a warning variable")
    p.add_argument("file")
    p.add_argument("--facts", required=True, help="comma-separated literals, e.g. p3,~p3")
    p.add_argument("--state", default="", help="comma-separated literals known to hold")
    p.add_argument("--warning", required=True)
    p.add_argument("--assume", action="append", default=[], help="extra formula added to the KB")
    _subsume_flags(p, True)
    p.set_defaults(func=cmd_dangerous)

    p = sub.add_parser("bench", help="compare the independence rule with the canonical operator")
    p.add_argument("file")
    p.add_argument("--op", choices=("independence", "canonical", "both"), default="both")
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-", help="CSV path, '-' for stdout")
    p.add_argument("--parallel", action="store_true", help="run the operators concurrently")
    _subsume_flags(p, True)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gen-cnf", help="write a random k-CNF in DIMACS format")
    p.add_argument("--vars", type=int, required=True)
    p.add_argument("--clauses", type=int, required=True)
    p.add_argument("--width", type=int, default=3)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_gen_cnf)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))
    try:
        return args.func(args)
    except (OSError, ValueError, KeyError, SizeCapExceeded, RecursionError) as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"boolforget: error: {message}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
