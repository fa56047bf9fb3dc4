"""Translations between formulas, polynomials, valuations and points."""

from __future__ import annotations

from typing import Mapping, Sequence

from .boolpoly import ONE, ZERO, Poly, Vocabulary, canonical_terms, mul, var
from .formula import (
    BOT,
    TOP,
    And,
    Bottom,
    Formula,
    Iff,
    Imp,
    Not,
    Or,
    Top,
    Var,
)

__all__ = [
    "RawPoly",
    "to_poly_P",
    "project_pi",
    "to_formula_theta",
    "valuation_to_point",
    "point_to_valuation",
]


class RawPoly:
    """An element of F2[x] with true exponents, before flattening.

    Terms are tuples of ``(var_id, exponent)`` pairs sorted by id.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        acc: set[tuple[tuple[int, int], ...]] = set()
        for t in terms:
            acc ^= {t}
        self.terms = frozenset(acc)

    @classmethod
    def const(cls, bit: int) -> RawPoly:
        return cls([()] if bit else [])

    @classmethod
    def variable(cls, v: int) -> RawPoly:
        return cls([((v, 1),)])

    def __add__(self, other: RawPoly) -> RawPoly:
        out = RawPoly()
        out.terms = self.terms ^ other.terms
        return out

    def __mul__(self, other: RawPoly) -> RawPoly:
        products = []
        for s in self.terms:
            for t in other.terms:
                exps = dict(s)
                for v, e in t:
                    exps[v] = exps.get(v, 0) + e
                products.append(tuple(sorted(exps.items())))
        return RawPoly(products)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RawPoly) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def reduce(self) -> Poly:
        """Flatten every exponent to 1 and cancel repeated monomials."""
        masks = []
        for t in self.terms:
            m = 0
            for v, _ in t:
                m |= 1 << v
            masks.append(m)
        return Poly(masks)

    def format(self, vocab: Vocabulary | None = None) -> str:
        if not self.terms:
            return "0"

        def name(v: int) -> str:
            return vocab.name(v) if vocab is not None else f"x{v}"

        rendered = []
        for t in self.terms:
            factors = sorted(name(v) + (f"^{e}" if e > 1 else "") for v, e in t)
            degree = sum(e for _, e in t)
            rendered.append((-degree, factors))
        rendered.sort()
        return "+".join("*".join(f) if f else "1" for _, f in rendered)

    def __repr__(self) -> str:
        return f"RawPoly({self.format()!r})"


def to_poly_P(f: Formula, vocab: Vocabulary) -> RawPoly:
    """The polynomial translation of ``f`` with exponents kept."""
    one = RawPoly.const(1)
    if isinstance(f, Top):
        return one
    if isinstance(f, Bottom):
        return RawPoly.const(0)
    if isinstance(f, Var):
        return RawPoly.variable(vocab.intern(f.name))
    if isinstance(f, Not):
        return one + to_poly_P(f.arg, vocab)
    a = to_poly_P(f.left, vocab)
    b = to_poly_P(f.right, vocab)
    if isinstance(f, And):
        return a * b
    if isinstance(f, Or):
        return a + b + a * b
    if isinstance(f, Imp):
        return one + a + a * b
    if isinstance(f, Iff):
        return one + a + b
    raise TypeError(f"not a formula: {f!r}")


def project_pi(f: Formula, vocab: Vocabulary) -> Poly:
    """The reduced (multilinear) polynomial of ``f``.

    Names not yet in ``vocab`` are interned.
    """
    memo: dict[int, Poly] = {}

    def go(node: Formula) -> Poly:
        if isinstance(node, Top):
            return ONE
        if isinstance(node, Bottom):
            return ZERO
        if isinstance(node, Var):
            return var(vocab.intern(node.name))
        key = id(node)
        if key in memo:
            return memo[key]
        if isinstance(node, Not):
            out = ONE + go(node.arg)
        else:
            a = go(node.left)
            b = go(node.right)
            if isinstance(node, And):
                out = mul(a, b)
            elif isinstance(node, Or):
                out = a + b + mul(a, b)
            elif isinstance(node, Imp):
                out = ONE + a + mul(a, b)
            elif isinstance(node, Iff):
                out = ONE + a + b
            else:
                raise TypeError(f"not a formula: {node!r}")
        memo[key] = out
        return out

    return go(f)


def to_formula_theta(a: Poly, vocab: Vocabulary) -> Formula:
    """Read a polynomial back as a formula.

    A sum becomes a right-nested chain of negated biconditionals over the
    monomials in canonical order; the constant term, if any, becomes an
    outer negation.
    """
    if a.is_zero():
        return BOT
    if a.is_one():
        return TOP
    if 0 in a.monomials:
        return Not(to_formula_theta(a + ONE, vocab))
    parts: list[Formula] = []
    for names in canonical_terms(a, vocab):
        conj: Formula = Var(names[-1])
        for n in reversed(names[:-1]):
            conj = And(Var(n), conj)
        parts.append(conj)
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Not(Iff(p, out))
    return out


def valuation_to_point(valuation: Mapping[str, int], language: Sequence[str]) -> tuple[int, ...]:
    """Coordinates of ``valuation`` in the order given by ``language``."""
    return tuple(1 if valuation[name] else 0 for name in language)


def point_to_valuation(point: Sequence[int], language: Sequence[str]) -> dict[str, int]:
    if len(point) != len(language):
        raise ValueError("point and language differ in length")
    return {name: 1 if bit else 0 for name, bit in zip(language, point)}
