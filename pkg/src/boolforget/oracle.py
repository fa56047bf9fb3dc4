"""Brute-force truth-table semantics.

Formulas are evaluated directly on the AST over every point of the language
at once (numpy boolean columns), so nothing here goes through the polynomial
translation it is used to check. Intended for tests and small inputs only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .formula import And, Bottom, Formula, Iff, Imp, Not, Or, Top, Var, variables

MAX_LANGUAGE = 24

__all__ = [
    "MAX_LANGUAGE",
    "LanguageTooLarge",
    "ModelSet",
    "models_of",
    "project_models",
    "oracle_entails",
    "oracle_equivalent",
    "oracle_consistent",
    "eval_formula",
]


class LanguageTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class ModelSet:
    language: tuple[str, ...]
    models: frozenset[tuple[int, ...]]

    def __len__(self) -> int:
        return len(self.models)

    def __contains__(self, point: object) -> bool:
        return point in self.models

    def valuations(self) -> list[dict[str, int]]:
        return [dict(zip(self.language, p)) for p in sorted(self.models)]


def eval_formula(f: Formula, valuation: Mapping[str, int]) -> bool:
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Var):
        return bool(valuation[f.name])
    if isinstance(f, Not):
        return not eval_formula(f.arg, valuation)
    a = eval_formula(f.left, valuation)
    b = eval_formula(f.right, valuation)
    if isinstance(f, And):
        return a and b
    if isinstance(f, Or):
        return a or b
    if isinstance(f, Imp):
        return (not a) or b
    if isinstance(f, Iff):
        return a == b
    raise TypeError(f"not a formula: {f!r}")


def _columns(language: Sequence[str]) -> dict[str, np.ndarray]:
    n = len(language)
    if n > MAX_LANGUAGE:
        raise LanguageTooLarge(f"{n} variables exceeds the enumeration bound {MAX_LANGUAGE}")
    points = np.arange(1 << n, dtype=np.int64)
    # first language entry is the most significant coordinate
    return {name: ((points >> (n - 1 - i)) & 1).astype(bool) for i, name in enumerate(language)}


def _eval_columns(f: Formula, cols: dict[str, np.ndarray], width: int) -> np.ndarray:
    memo: dict[int, np.ndarray] = {}

    def go(node: Formula) -> np.ndarray:
        key = id(node)
        if key in memo:
            return memo[key]
        if isinstance(node, Top):
            out = np.ones(width, dtype=bool)
        elif isinstance(node, Bottom):
            out = np.zeros(width, dtype=bool)
        elif isinstance(node, Var):
            try:
                out = cols[node.name]
            except KeyError:
                raise ValueError(f"variable {node.name!r} is outside the language") from None
        elif isinstance(node, Not):
            out = ~go(node.arg)
        else:
            a, b = go(node.left), go(node.right)
            if isinstance(node, And):
                out = a & b
            elif isinstance(node, Or):
                out = a | b
            elif isinstance(node, Imp):
                out = ~a | b
            elif isinstance(node, Iff):
                out = a == b
            else:
                raise TypeError(f"not a formula: {node!r}")
        memo[key] = out
        return out

    return go(f)


def _eval_kb_columns(kb, cols: dict[str, np.ndarray], width: int) -> np.ndarray:
    """Conjunction over the polynomials of a polynomial KB, evaluated by hand."""
    vocab = kb.vocab
    result = np.ones(width, dtype=bool)
    for poly in kb.polys:
        value = np.zeros(width, dtype=bool)
        for mask in poly.monomials:
            term = np.ones(width, dtype=bool)
            v = 0
            while mask:
                if mask & 1:
                    name = vocab.name(v)
                    if name not in cols:
                        raise ValueError(f"variable {name!r} is outside the language")
                    term = term & cols[name]
                mask >>= 1
                v += 1
            value = value ^ term
        result &= value
    return result


def _is_poly_kb(obj) -> bool:
    return hasattr(obj, "polys") and hasattr(obj, "vocab")


def _language_of(obj) -> tuple[str, ...]:
    if _is_poly_kb(obj):
        names = set()
        for poly in obj.polys:
            names |= {obj.vocab.name(v) for v in poly.variables()}
        return tuple(sorted(names))
    if isinstance(obj, (Top, Bottom, Var, Not, And, Or, Imp, Iff)):
        return tuple(sorted(variables(obj)))
    names = set()
    for f in obj:
        names |= variables(f)
    return tuple(sorted(names))


def _truth_column(obj, language: Sequence[str]) -> np.ndarray:
    cols = _columns(language)
    width = 1 << len(language)
    if _is_poly_kb(obj):
        return _eval_kb_columns(obj, cols, width)
    if isinstance(obj, (Top, Bottom, Var, Not, And, Or, Imp, Iff)):
        return _eval_columns(obj, cols, width)
    result = np.ones(width, dtype=bool)
    for f in obj:
        result &= _eval_columns(f, cols, width)
    return result


def models_of(obj, language: Sequence[str] | None = None) -> ModelSet:
    """All points of ``language`` satisfying a formula, formula set or polynomial KB."""
    if language is None:
        language = _language_of(obj)
    language = tuple(language)
    column = _truth_column(obj, language)
    n = len(language)
    models = frozenset(
        tuple((int(i) >> (n - 1 - j)) & 1 for j in range(n)) for i in np.flatnonzero(column)
    )
    return ModelSet(language, models)


def project_models(ms: ModelSet, keep: Iterable[str]) -> ModelSet:
    keep = set(keep)
    if not keep <= set(ms.language):
        raise ValueError(f"cannot project onto {sorted(keep - set(ms.language))}: not in the language")
    idx = [i for i, name in enumerate(ms.language) if name in keep]
    language = tuple(ms.language[i] for i in idx)
    return ModelSet(language, frozenset(tuple(p[i] for i in idx) for p in ms.models))


def _joint_language(*objs) -> tuple[str, ...]:
    names: set[str] = set()
    for obj in objs:
        names |= set(_language_of(obj))
    return tuple(sorted(names))


def oracle_entails(kb, goal, language: Sequence[str] | None = None) -> bool:
    """Every model of ``kb`` satisfies ``goal``."""
    language = tuple(language) if language is not None else _joint_language(kb, goal)
    a = _truth_column(kb, language)
    b = _truth_column(goal, language)
    return bool(np.all(~a | b))


def oracle_equivalent(a, b, language: Sequence[str] | None = None) -> bool:
    language = tuple(language) if language is not None else _joint_language(a, b)
    return bool(np.array_equal(_truth_column(a, language), _truth_column(b, language)))


def oracle_consistent(kb, language: Sequence[str] | None = None) -> bool:
    language = tuple(language) if language is not None else _language_of(kb)
    return bool(_truth_column(kb, language).any())
