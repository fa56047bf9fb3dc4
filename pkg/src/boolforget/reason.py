"""Reasoning services built on saturation: SAT, entailment, sensitivity,
and detection of facts that lead to a warning state."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .boolpoly import ONE, derivative
from .forget import (
    INCONSISTENT,
    PolyKB,
    SaturationTrace,
    retract,
    saturate,
)
from .formula import Formula, Literal, Not, Var, variables
from .translate import project_pi

__all__ = [
    "EntailmentVerdict",
    "DangerReport",
    "is_consistent",
    "entails",
    "entails_localized",
    "is_sensitive",
    "irrelevance_check",
    "classify_facts",
    "dangerous_literals",
]

DIRECT = "direct-refutation"
LOCALIZED = "localized"


@dataclass
class EntailmentVerdict:
    holds: bool
    method: str
    trace: SaturationTrace
    retraction_used: PolyKB | None = None

    def __bool__(self) -> bool:
        return self.holds


def is_consistent(
    kb: PolyKB, *, subsume: bool = True, size_cap: int | None = None
) -> tuple[bool, SaturationTrace]:
    outcome, trace = saturate(kb, subsume=subsume, size_cap=size_cap)
    return outcome != INCONSISTENT, trace


def _refute(kb: PolyKB, goal: Formula, subsume: bool, size_cap: int | None) -> tuple[bool, SaturationTrace]:
    negated = kb.with_polys(list(kb.polys) + [ONE + project_pi(goal, kb.vocab)])
    outcome, trace = saturate(negated, subsume=subsume, size_cap=size_cap)
    return outcome == INCONSISTENT, trace


def entails(kb: PolyKB, goal: Formula, *, subsume: bool = True, size_cap: int | None = None) -> EntailmentVerdict:
    """Decide ``kb |= goal`` by saturating ``kb`` plus the negated goal."""
    holds, trace = _refute(kb, goal, subsume, size_cap)
    return EntailmentVerdict(holds, DIRECT, trace)


def entails_localized(kb: PolyKB, goal: Formula, *, subsume: bool = True, size_cap: int | None = None) -> EntailmentVerdict:
    """Decide ``kb |= goal`` after first retracting ``kb`` onto the goal's variables."""
    goal_vars = variables(goal)
    drop = [v for v in kb.variable_ids() if kb.vocab.name(v) not in goal_vars]
    narrowed = retract(kb, drop, subsume=subsume, size_cap=size_cap)
    holds, trace = _refute(narrowed, goal, subsume, size_cap)
    return EntailmentVerdict(holds, LOCALIZED, trace, retraction_used=narrowed)


def is_sensitive(kb: PolyKB, f: Formula, p: str, *, subsume: bool = True, size_cap: int | None = None) -> bool:
    """Whether ``f`` is sensitive in ``p`` with respect to ``kb``.

    That is, some model of ``kb`` changes the value of ``f`` when ``p`` is
    flipped; decided as consistency of ``kb`` plus the derivative of ``f``.
    """
    if p not in variables(f):
        raise ValueError(f"{p!r} does not occur in the formula")
    d = derivative(project_pi(f, kb.vocab), kb.vocab.id(p))
    consistent, _ = is_consistent(kb.with_polys(list(kb.polys) + [d]), subsume=subsume, size_cap=size_cap)
    return consistent


def irrelevance_check(f: Formula, p: str) -> bool:
    """True if ``f`` is equivalent to a formula without ``p``."""
    from .boolpoly import Vocabulary

    vocab = Vocabulary()
    a = project_pi(f, vocab)
    if p not in vocab:
        return True
    return derivative(a, vocab.id(p)).is_zero()


@dataclass(frozen=True)
class DangerReport:
    """Classification of candidate facts against a warning variable.

    ``vacuous`` holds facts that contradict the KB and current state, which
    would entail the warning only trivially.
    """

    dangerous: frozenset[Literal]
    safe: frozenset[Literal]
    vacuous: frozenset[Literal]
    retraction: PolyKB


def classify_facts(
    kb: PolyKB,
    facts: Iterable[Literal],
    state: Iterable[Literal],
    warning: str,
    *,
    subsume: bool = True,
    size_cap: int | None = None,
) -> DangerReport:
    facts = list(dict.fromkeys(facts))
    state = list(dict.fromkeys(state))
    state_formulas = [lit.to_formula() for lit in state]
    warn = Var(warning)

    base = kb.add_formulas(state_formulas)
    consistent, _ = is_consistent(base, subsume=subsume, size_cap=size_cap)
    if not consistent:
        raise ValueError("the KB together with the state is inconsistent")
    if entails(base, warn, subsume=subsume, size_cap=size_cap).holds:
        raise ValueError(f"the KB together with the state already entails {warning}")

    keep = {lit.name for lit in facts} | {lit.name for lit in state} | {warning}
    drop = [v for v in kb.variable_ids() if kb.vocab.name(v) not in keep]
    narrowed = retract(kb, drop, subsume=subsume, size_cap=size_cap)
    context = narrowed.add_formulas(state_formulas + [Not(warn)])
    with_state = narrowed.add_formulas(state_formulas)

    dangerous, safe, vacuous = set(), set(), set()
    for lit in facts:
        if lit in state:
            continue
        ok, _ = is_consistent(with_state.add_formulas([lit.to_formula()]), subsume=subsume, size_cap=size_cap)
        if not ok:
            vacuous.add(lit)
            continue
        still_ok, _ = is_consistent(context.add_formulas([lit.to_formula()]), subsume=subsume, size_cap=size_cap)
        (safe if still_ok else dangerous).add(lit)
    return DangerReport(frozenset(dangerous), frozenset(safe), frozenset(vacuous), narrowed)


def dangerous_literals(
    kb: PolyKB,
    facts: Iterable[Literal],
    state: Iterable[Literal],
    warning: str,
    *,
    subsume: bool = True,
    size_cap: int | None = None,
) -> frozenset[Literal]:
    """Facts whose addition to ``kb`` and ``state`` makes ``warning`` entailed."""
    return classify_facts(kb, facts, state, warning, subsume=subsume, size_cap=size_cap).dangerous
