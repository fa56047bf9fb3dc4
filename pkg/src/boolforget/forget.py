"""Variable forgetting over knowledge bases, and saturation.

Two operators are provided. The independence rule works on the polynomial
projections of the members; the canonical operator works on formulas,
``sigma((F & G){p/T} | (F & G){p/F})``. Both are applied to a KB pairwise
over the members that mention the forgotten variable; members that do not
mention it are carried over unchanged.
"""

from __future__ import annotations

import logging
import os
import time
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Callable, Iterable, Sequence

from .boolpoly import ZERO, Poly, Vocabulary, format_poly, independence_rule, mul, poly_size
from .formula import (
    BOT,
    TOP,
    And,
    Bottom,
    Formula,
    Or,
    Top,
    simplify_sigma,
    size,
    substitute,
    variables,
)
from .translate import project_pi, to_formula_theta

log = logging.getLogger(__name__)

__all__ = [
    "PolyKB",
    "TraceStep",
    "SaturationTrace",
    "SizeCapExceeded",
    "CONSISTENT",
    "INCONSISTENT",
    "default_size_cap",
    "forget_var",
    "independence_forget",
    "retract",
    "saturate",
    "elimination_order",
    "canonical_elimination_order",
    "drop_subsumed",
    "drop_subsumed_formulas",
    "canonical_forget",
    "canonical_forget_kb",
    "canonical_retract",
    "canonical_saturate",
    "formula_kb_size",
]

CONSISTENT = "consistent"
INCONSISTENT = "inconsistent"

SIZE_CAP_ENV = "BOOLFORGET_SIZE_CAP"
DEFAULT_SIZE_CAP = 5_000_000


class SizeCapExceeded(RuntimeError):
    """Raised when a KB grows past the configured symbol budget."""

    def __init__(self, size: int, cap: int, variable: str | None = None):
        where = f" while forgetting {variable}" if variable else ""
        super().__init__(f"KB size {size} exceeds the cap of {cap} symbols{where}")
        self.size = size
        self.cap = cap
        self.variable = variable


def default_size_cap() -> int:
    raw = os.environ.get(SIZE_CAP_ENV)
    if raw:
        return int(raw)
    return DEFAULT_SIZE_CAP


class PolyKB:
    """A knowledge base held as the set of polynomial projections of its members.

    A point is a model when every member evaluates to 1. The constant 1 is
    never stored, and a KB holding 0 holds nothing else.
    """

    __slots__ = ("polys", "vocab")

    def __init__(self, polys: Iterable[Poly] = (), vocab: Vocabulary | None = None):
        self.vocab = vocab if vocab is not None else Vocabulary()
        self.polys = _normalize(polys)

    @classmethod
    def from_formulas(cls, formulas: Iterable[Formula], vocab: Vocabulary | None = None) -> PolyKB:
        vocab = vocab if vocab is not None else Vocabulary()
        return cls([project_pi(f, vocab) for f in formulas], vocab)

    def with_polys(self, polys: Iterable[Poly]) -> PolyKB:
        return PolyKB(polys, self.vocab)

    def add_formulas(self, formulas: Iterable[Formula]) -> PolyKB:
        extra = [project_pi(f, self.vocab) for f in formulas]
        return PolyKB(list(self.polys) + extra, self.vocab)

    @property
    def mask(self) -> int:
        out = 0
        for p in self.polys:
            out |= p.mask
        return out

    def variable_ids(self) -> list[int]:
        mask = self.mask
        return [v for v in range(mask.bit_length()) if mask >> v & 1]

    def language(self) -> list[str]:
        """Names of the variables occurring in the KB, sorted."""
        return sorted(self.vocab.name(v) for v in self.variable_ids())

    def is_inconsistent_syntactically(self) -> bool:
        return ZERO in self.polys

    def is_trivial(self) -> bool:
        """No member left, i.e. the KB is equivalent to T."""
        return not self.polys

    def size(self) -> int:
        return sum(poly_size(p) for p in self.polys)

    def sorted_polys(self) -> list[Poly]:
        return sorted(self.polys, key=lambda p: format_poly(p, self.vocab))

    def formatted(self) -> list[str]:
        return sorted(format_poly(p, self.vocab) for p in self.polys)

    def to_formulas(self) -> list[Formula]:
        return [to_formula_theta(p, self.vocab) for p in self.sorted_polys()]

    def __len__(self) -> int:
        return len(self.polys)

    def __iter__(self):
        return iter(self.sorted_polys())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PolyKB):
            return NotImplemented
        return self.formatted() == other.formatted()

    def __hash__(self) -> int:
        return hash(tuple(self.formatted()))

    def __repr__(self) -> str:
        return f"PolyKB([{', '.join(self.formatted())}])"


def _normalize(polys: Iterable[Poly]) -> frozenset[Poly]:
    out = set()
    for p in polys:
        if p.is_zero():
            return frozenset({ZERO})
        if not p.is_one():
            out.add(p)
    return frozenset(out)


@dataclass
class TraceStep:
    variable: str
    pairs_processed: int
    kb_polys: int
    kb_size_symbols: int
    elapsed: float


@dataclass
class SaturationTrace:
    steps: list[TraceStep] = field(default_factory=list)
    outcome: str | None = None

    def __len__(self) -> int:
        return len(self.steps)


def _known(vocab: Vocabulary, v: int | str) -> bool:
    return not isinstance(v, str) or v in vocab


def _resolve_var(kb_vocab: Vocabulary, v: int | str) -> int:
    if isinstance(v, str):
        if v not in kb_vocab:
            raise KeyError(f"unknown variable {v!r}")
        return kb_vocab.id(v)
    return v


def drop_subsumed(polys: Iterable[Poly]) -> list[Poly]:
    """Remove members entailed by another, smaller member.

    Only pairs where the smaller member's variables are a subset of the
    larger one's are examined, which keeps the pass cheap. ``a`` entails
    ``b`` exactly when ``a * b == a``.
    """
    kept: list[Poly] = []
    for b in sorted(polys, key=_poly_key):
        bm = b.mask
        if not any(not a.mask & ~bm and mul(a, b) == a for a in kept):
            kept.append(b)
    return kept


def forget_var(
    kb: PolyKB,
    p: int | str,
    *,
    refine: bool = True,
    subsume: bool = False,
    size_cap: int | None = None,
    stats: dict | None = None,
) -> PolyKB:
    """Forget one variable from a polynomial KB with the independence rule.

    With ``refine`` (the default) only members mentioning ``p`` are paired;
    the others are kept as they are. ``refine=False`` pairs every member with
    every member, self-pairs included. ``subsume`` additionally drops members
    entailed by another member of the result.
    """
    if isinstance(p, str) and p not in kb.vocab:
        return kb
    v = _resolve_var(kb.vocab, p)
    bit = 1 << v
    if refine:
        keep = [a for a in kb.polys if not a.mask & bit]
        active = sorted((a for a in kb.polys if a.mask & bit), key=_poly_key)
    else:
        keep = []
        active = sorted(kb.polys, key=_poly_key)
    if not active:
        return kb
    cap = size_cap if size_cap is not None else default_size_cap()
    out: set[Poly] = set(keep)
    total = sum(poly_size(a) for a in out)
    pairs = 0
    for a, b in combinations_with_replacement(active, 2):
        pairs += 1
        r = independence_rule(a, b, v)
        if r.is_zero():
            out = {ZERO}
            break
        if r.is_one() or r in out:
            continue
        out.add(r)
        total += poly_size(r)
        if total > cap:
            raise SizeCapExceeded(total, cap, kb.vocab.name(v))
    if stats is not None:
        stats["pairs"] = pairs
    if subsume and ZERO not in out:
        return PolyKB(drop_subsumed(out), kb.vocab)
    return PolyKB(out, kb.vocab)


def _poly_key(p: Poly) -> tuple:
    return (len(p.monomials), sorted(p.monomials))


def _fewest_occurrences(counts: dict, pool: Iterable) -> list:
    return sorted(pool, key=lambda v: (counts.get(v, 0), v))


def elimination_order(kb: PolyKB, among: Iterable[int] | None = None) -> list[int]:
    """Variables sorted by ascending occurrence count, ties by id."""
    counts: dict[int, int] = {}
    for poly in kb.polys:
        for v in poly.variables():
            counts[v] = counts.get(v, 0) + 1
    return _fewest_occurrences(counts, set(counts) if among is None else set(among))


def _check_order(forget: Sequence, order: Sequence) -> None:
    if len(order) != len(set(order)) or set(order) != set(forget):
        raise ValueError("order must be a permutation of the variables to forget")


def retract(
    kb: PolyKB,
    forget: Iterable[int | str],
    order: Sequence[int | str] | None = None,
    *,
    refine: bool = True,
    subsume: bool = False,
    size_cap: int | None = None,
    trace: SaturationTrace | None = None,
    on_step: Callable[[TraceStep, PolyKB], None] | None = None,
) -> PolyKB:
    """Forget every variable of ``forget``, one after another.

    Without an explicit ``order`` the next variable is always the one with
    the fewest occurrences in the current KB.
    """
    forget = list(forget)
    if order is not None:
        _check_order(forget, list(order))
    # names the KB has never seen occur nowhere, so forgetting them is a no-op
    targets = list(dict.fromkeys(_resolve_var(kb.vocab, v) for v in forget if _known(kb.vocab, v)))
    pending = None
    if order is not None:
        pending = [_resolve_var(kb.vocab, v) for v in order if _known(kb.vocab, v)]
    remaining = set(targets)
    current = kb
    while remaining and not current.is_inconsistent_syntactically():
        v = pending.pop(0) if pending is not None else elimination_order(current, remaining)[0]
        remaining.discard(v)
        stats: dict = {}
        start = time.perf_counter()
        current = forget_var(current, v, refine=refine, subsume=subsume, size_cap=size_cap, stats=stats)
        step = TraceStep(
            variable=kb.vocab.name(v),
            pairs_processed=stats.get("pairs", 0),
            kb_polys=len(current),
            kb_size_symbols=current.size(),
            elapsed=time.perf_counter() - start,
        )
        log.debug("forgot %s: %d members, %d symbols", step.variable, step.kb_polys, step.kb_size_symbols)
        if trace is not None:
            trace.steps.append(step)
        if on_step is not None:
            on_step(step, current)
    return current


def saturate(
    kb: PolyKB,
    order: Sequence[int | str] | None = None,
    *,
    refine: bool = True,
    subsume: bool = False,
    size_cap: int | None = None,
) -> tuple[str, SaturationTrace]:
    """Forget every variable of the KB; decide consistency from what is left.

    ``order`` must cover every variable occurring in ``kb``; extra entries
    are harmless.
    """
    trace = SaturationTrace()
    present = kb.variable_ids()
    if order is not None:
        order_ids = list(dict.fromkeys(_resolve_var(kb.vocab, v) for v in order))
        missing = set(present) - set(order_ids)
        if missing:
            raise ValueError(f"order does not cover {sorted(kb.vocab.name(v) for v in missing)}")
        final = retract(kb, order_ids, order_ids, refine=refine, subsume=subsume, size_cap=size_cap, trace=trace)
    else:
        final = retract(kb, present, refine=refine, subsume=subsume, size_cap=size_cap, trace=trace)
    trace.outcome = INCONSISTENT if final.is_inconsistent_syntactically() else CONSISTENT
    return trace.outcome, trace


def independence_forget(f: Formula, g: Formula, p: str) -> Formula:
    """The independence rule on a pair of formulas, read back through theta."""
    vocab = Vocabulary()
    a1 = project_pi(f, vocab)
    a2 = project_pi(g, vocab)
    return to_formula_theta(independence_rule(a1, a2, vocab.intern(p)), vocab)


# -- canonical operator on formulas ----------------------------------------

def canonical_forget(f: Formula, g: Formula, p: str) -> Formula:
    """sigma((f & g){p/T} | (f & g){p/F})."""
    both = And(f, g)
    return simplify_sigma(Or(substitute(both, p, TOP), substitute(both, p, BOT)))


def formula_kb_size(kb: Iterable[Formula]) -> int:
    return sum(size(f) for f in kb)


def _normalize_formulas(formulas: Iterable[Formula]) -> frozenset[Formula]:
    out = set()
    for f in formulas:
        if isinstance(f, Bottom):
            return frozenset({BOT})
        if not isinstance(f, Top):
            out.add(f)
    return frozenset(out)


def drop_subsumed_formulas(formulas: Iterable[Formula]) -> list[Formula]:
    """Formula version of ``drop_subsumed``; entailment is checked on projections."""
    vocab = Vocabulary()
    projected = {}
    for f in formulas:
        projected.setdefault(project_pi(f, vocab), f)
    return [projected[p] for p in drop_subsumed(projected)]


def canonical_forget_kb(
    kb: Iterable[Formula],
    p: str,
    *,
    refine: bool = True,
    subsume: bool = False,
    size_cap: int | None = None,
    stats: dict | None = None,
) -> frozenset[Formula]:
    """Pairwise canonical forgetting of ``p`` over a set of formulas.

    T results are dropped; a F result replaces the whole KB by {F}.
    """
    kb = _normalize_formulas(kb)
    if refine:
        keep = [f for f in kb if p not in variables(f)]
        active = [f for f in kb if p in variables(f)]
    else:
        keep, active = [], list(kb)
    if not active:
        return kb
    active.sort(key=lambda f: (size(f), str(f)))
    cap = size_cap if size_cap is not None else default_size_cap()
    out: set[Formula] = set(keep)
    total = formula_kb_size(out)
    pairs = 0
    for f, g in combinations_with_replacement(active, 2):
        pairs += 1
        r = canonical_forget(f, g, p)
        if isinstance(r, Bottom):
            out = {BOT}
            break
        if isinstance(r, Top) or r in out:
            continue
        out.add(r)
        total += size(r)
        if total > cap:
            raise SizeCapExceeded(total, cap, p)
    if stats is not None:
        stats["pairs"] = pairs
    if subsume and BOT not in out:
        return frozenset(drop_subsumed_formulas(out))
    return frozenset(out)


def canonical_elimination_order(kb: Iterable[Formula], among: Iterable[str] | None = None) -> list[str]:
    counts: dict[str, int] = {}
    for f in kb:
        for name in variables(f):
            counts[name] = counts.get(name, 0) + 1
    return _fewest_occurrences(counts, set(counts) if among is None else set(among))


def canonical_retract(
    kb: Iterable[Formula],
    forget: Iterable[str],
    order: Sequence[str] | None = None,
    *,
    refine: bool = True,
    subsume: bool = False,
    size_cap: int | None = None,
    trace: SaturationTrace | None = None,
    on_step: Callable[[TraceStep, frozenset], None] | None = None,
) -> frozenset[Formula]:
    """Apply ``canonical_forget_kb`` for each variable of ``forget`` in turn."""
    targets = list(dict.fromkeys(forget))
    pending = None
    if order is not None:
        pending = list(order)
        _check_order(targets, pending)
    remaining = set(targets)
    current = _normalize_formulas(kb)
    while remaining and BOT not in current:
        p = pending.pop(0) if pending is not None else canonical_elimination_order(current, remaining)[0]
        remaining.discard(p)
        stats: dict = {}
        start = time.perf_counter()
        current = canonical_forget_kb(current, p, refine=refine, subsume=subsume, size_cap=size_cap, stats=stats)
        step = TraceStep(
            variable=p,
            pairs_processed=stats.get("pairs", 0),
            kb_polys=len(current),
            kb_size_symbols=formula_kb_size(current),
            elapsed=time.perf_counter() - start,
        )
        if trace is not None:
            trace.steps.append(step)
        if on_step is not None:
            on_step(step, current)
    return current


def canonical_saturate(
    kb: Iterable[Formula],
    order: Sequence[str] | None = None,
    *,
    refine: bool = True,
    subsume: bool = False,
    size_cap: int | None = None,
) -> tuple[str, SaturationTrace]:
    kb = _normalize_formulas(kb)
    present: set[str] = set()
    for f in kb:
        present |= variables(f)
    trace = SaturationTrace()
    if order is not None:
        order = list(dict.fromkeys(order))
        missing = present - set(order)
        if missing:
            raise ValueError(f"order does not cover {sorted(missing)}")
        final = canonical_retract(kb, order, order, refine=refine, subsume=subsume, size_cap=size_cap, trace=trace)
    else:
        final = canonical_retract(kb, present, refine=refine, subsume=subsume, size_cap=size_cap, trace=trace)
    trace.outcome = INCONSISTENT if BOT in final else CONSISTENT
    return trace.outcome, trace
