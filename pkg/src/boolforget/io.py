"""Reading and writing knowledge bases.

Supported files, chosen by extension:

* ``.cnf`` DIMACS CNF; variable ``k`` is named ``x<k>``.
* ``.fml`` one formula per non-empty line, ``#`` comments allowed.
* ``.pol`` one polynomial per non-empty line (``x1*x2+x3+1``).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .boolpoly import ONE, Poly, Vocabulary, format_poly, mul, parse_poly, var, PolySyntaxError
from .forget import PolyKB
from .formula import (
    Formula,
    FormulaSyntaxError,
    Not,
    Or,
    Var,
    parse_formula,
    print_formula,
)
from .translate import project_pi, to_formula_theta

__all__ = [
    "DimacsProblem",
    "DimacsError",
    "ClauseTooWide",
    "KBFileError",
    "DEFAULT_WIDTH_CAP",
    "parse_dimacs",
    "format_dimacs",
    "clause_to_poly",
    "clause_to_formula",
    "random_kcnf",
    "parse_formula_lines",
    "load_kb",
    "load_formulas",
    "write_kb",
]

DEFAULT_WIDTH_CAP = 12


class DimacsError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class ClauseTooWide(ValueError):
    pass


class KBFileError(ValueError):
    pass


@dataclass
class DimacsProblem:
    num_vars: int
    clauses: list[tuple[int, ...]] = field(default_factory=list)

    def names(self) -> list[str]:
        return [f"x{k}" for k in range(1, self.num_vars + 1)]

    def vocabulary(self) -> Vocabulary:
        return Vocabulary(self.names())

    def to_kb(self, width_cap: int = DEFAULT_WIDTH_CAP) -> PolyKB:
        vocab = self.vocabulary()
        return PolyKB([clause_to_poly(c, vocab, width_cap) for c in self.clauses], vocab)

    def to_formulas(self) -> list[Formula]:
        return [clause_to_formula(c) for c in self.clauses]


def parse_dimacs(text: str) -> DimacsProblem:
    num_vars = None
    declared_clauses = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            if num_vars is not None:
                raise DimacsError("duplicate problem line", lineno)
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"malformed problem line {line!r}", lineno)
            try:
                num_vars, declared_clauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(f"malformed problem line {line!r}", lineno) from None
            if num_vars < 0 or declared_clauses < 0:
                raise DimacsError("negative counts in problem line", lineno)
            continue
        if num_vars is None:
            raise DimacsError("clause before the problem line", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(f"bad literal {tok!r}", lineno) from None
            if lit == 0:
                if not current:
                    raise DimacsError("empty clause", lineno)
                clauses.append(tuple(current))
                current = []
            elif abs(lit) > num_vars:
                raise DimacsError(f"literal {lit} out of range 1..{num_vars}", lineno)
            else:
                current.append(lit)
    if num_vars is None:
        raise DimacsError("missing problem line")
    if current:
        raise DimacsError("unterminated clause at end of input")
    return DimacsProblem(num_vars, clauses)


def format_dimacs(problem: DimacsProblem) -> str:
    lines = [f"p cnf {problem.num_vars} {len(problem.clauses)}"]
    lines += [" ".join(str(lit) for lit in clause) + " 0" for clause in problem.clauses]
    return "\n".join(lines) + "\n"


def clause_to_poly(clause: Sequence[int], vocab: Vocabulary, width_cap: int = DEFAULT_WIDTH_CAP) -> Poly:
    """1 + prod(1 + literal): the polynomial of a disjunction of literals."""
    if not clause:
        raise ValueError("empty clause")
    if len(clause) > width_cap:
        raise ClauseTooWide(f"clause of width {len(clause)} exceeds the cap of {width_cap}")
    falsified = ONE
    for lit in clause:
        x = var(vocab.intern(f"x{abs(lit)}"))
        falsified = mul(falsified, ONE + x if lit > 0 else x)
    return ONE + falsified


def clause_to_formula(clause: Sequence[int]) -> Formula:
    out: Formula | None = None
    for lit in clause:
        atom: Formula = Var(f"x{abs(lit)}")
        if lit < 0:
            atom = Not(atom)
        out = atom if out is None else Or(out, atom)
    if out is None:
        raise ValueError("empty clause")
    return out


def random_kcnf(num_vars: int, num_clauses: int, k: int = 3, seed: int | None = None) -> DimacsProblem:
    """Uniform random k-CNF: each clause has ``k`` distinct variables with random signs."""
    if k > num_vars:
        raise ValueError("clause width exceeds the number of variables")
    rng = random.Random(seed)
    clauses = []
    for _ in range(num_clauses):
        chosen = rng.sample(range(1, num_vars + 1), k)
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in chosen))
    return DimacsProblem(num_vars, clauses)


def _content_lines(text: str) -> Iterable[tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if line.strip():
            yield lineno, line


def parse_formula_lines(text: str) -> list[Formula]:
    out = []
    for lineno, line in _content_lines(text):
        try:
            out.append(parse_formula(line))
        except FormulaSyntaxError as exc:
            raise FormulaSyntaxError(str(exc).rsplit(" at line", 1)[0], lineno, exc.column) from None
    return out


def _parse_poly_lines(text: str, vocab: Vocabulary) -> list[Poly]:
    out = []
    for lineno, line in _content_lines(text):
        try:
            out.append(parse_poly(line, vocab))
        except PolySyntaxError as exc:
            raise PolySyntaxError(f"line {lineno}: {exc}") from None
    return out


def _suffix(path: Path) -> str:
    suffix = path.suffix.lower()
    if suffix not in (".cnf", ".fml", ".pol"):
        raise KBFileError(f"unknown KB file extension {path.suffix!r} (expected .cnf, .fml or .pol)")
    return suffix


def load_kb(path: str | Path, width_cap: int = DEFAULT_WIDTH_CAP) -> PolyKB:
    path = Path(path)
    suffix = _suffix(path)
    text = path.read_text(encoding="utf-8")
    if suffix == ".cnf":
        return parse_dimacs(text).to_kb(width_cap)
    vocab = Vocabulary()
    if suffix == ".pol":
        return PolyKB(_parse_poly_lines(text, vocab), vocab)
    return PolyKB([project_pi(f, vocab) for f in parse_formula_lines(text)], vocab)


def load_formulas(path: str | Path) -> list[Formula]:
    """The KB file read as formulas (polynomial lines are read back through theta)."""
    path = Path(path)
    suffix = _suffix(path)
    text = path.read_text(encoding="utf-8")
    if suffix == ".cnf":
        return parse_dimacs(text).to_formulas()
    if suffix == ".pol":
        vocab = Vocabulary()
        return [to_formula_theta(p, vocab) for p in _parse_poly_lines(text, vocab)]
    return parse_formula_lines(text)


def write_kb(kb: PolyKB, path: str | Path, as_: str | None = None) -> None:
    """Write ``kb`` as polynomials or formulas; the default follows the extension."""
    path = Path(path)
    if as_ is None:
        as_ = "formula" if path.suffix.lower() == ".fml" else "poly"
    if as_ == "poly":
        lines = [format_poly(p, kb.vocab) for p in kb.sorted_polys()]
    elif as_ == "formula":
        lines = [print_formula(f) for f in kb.to_formulas()]
    else:
        raise ValueError(f"unknown output form {as_!r}")
    path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
