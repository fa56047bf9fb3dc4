"""Multilinear Boolean polynomials, i.e. the quotient ring F2[x] / <x_i + x_i^2>.

A monomial is stored as an ``int`` bitmask (bit ``i`` set means the variable
with id ``i`` occurs), and a polynomial is a frozenset of such masks. Since
every coefficient lives in F2 and ``x*x == x``, addition is the symmetric
difference of the monomial sets and the product of two monomials is their
bitwise OR. Every value is therefore kept reduced at all times.
"""

from __future__ import annotations

import re
from typing import Iterable, Iterator, Mapping

__all__ = [
    "Vocabulary",
    "Poly",
    "ZERO",
    "ONE",
    "var",
    "add",
    "mul",
    "evaluate",
    "derivative",
    "decompose",
    "independence_rule",
    "independence_rule_unrewritten",
    "parse_poly",
    "format_poly",
    "poly_size",
    "PolySyntaxError",
    "UnassignedVariableError",
]


class UnassignedVariableError(KeyError):
    pass


class PolySyntaxError(ValueError):
    pass


class Vocabulary:
    """Bidirectional table between variable names and integer ids.

    Ids are handed out densely in order of first appearance.
    """

    def __init__(self, names: Iterable[str] = ()):
        self._names: list[str] = []
        self._ids: dict[str, int] = {}
        for name in names:
            self.intern(name)

    def intern(self, name: str) -> int:
        try:
            return self._ids[name]
        except KeyError:
            vid = len(self._names)
            self._names.append(name)
            self._ids[name] = vid
            return vid

    def id(self, name: str) -> int:
        return self._ids[name]

    def name(self, vid: int) -> str:
        if 0 <= vid < len(self._names):
            return self._names[vid]
        return f"x{vid}"

    def __contains__(self, name: object) -> bool:
        return name in self._ids

    def __len__(self) -> int:
        return len(self._names)

    def __iter__(self) -> Iterator[str]:
        return iter(self._names)

    def __repr__(self) -> str:
        return f"Vocabulary({self._names!r})"

    def copy(self) -> Vocabulary:
        return Vocabulary(self._names)


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Poly:
    """An immutable reduced Boolean polynomial."""

    __slots__ = ("monomials", "_hash")

    def __init__(self, monomials: Iterable[int] = ()):
        if isinstance(monomials, frozenset):
            self.monomials = monomials
        else:
            acc: set[int] = set()
            for m in monomials:
                if m in acc:
                    acc.remove(m)
                else:
                    acc.add(m)
            self.monomials = frozenset(acc)
        self._hash = None

    @classmethod
    def from_var_sets(cls, terms: Iterable[Iterable[int]]) -> Poly:
        masks = []
        for term in terms:
            m = 0
            for v in term:
                m |= 1 << v
            masks.append(m)
        return cls(masks)

    @property
    def mask(self) -> int:
        """Bitmask of every variable occurring in the polynomial."""
        out = 0
        for m in self.monomials:
            out |= m
        return out

    def variables(self) -> frozenset[int]:
        return frozenset(_bits(self.mask))

    def contains_var(self, v: int) -> bool:
        bit = 1 << v
        return any(m & bit for m in self.monomials)

    def is_zero(self) -> bool:
        return not self.monomials

    def is_one(self) -> bool:
        return self.monomials == _ONE_SET

    def degree(self) -> int:
        return max((m.bit_count() for m in self.monomials), default=0)

    def terms(self) -> list[tuple[int, ...]]:
        """Monomials as sorted variable-id tuples."""
        return [tuple(_bits(m)) for m in self.monomials]

    def __add__(self, other: Poly) -> Poly:
        return Poly(self.monomials ^ other.monomials)

    def __mul__(self, other: Poly) -> Poly:
        return mul(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.monomials == other.monomials

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.monomials)
        return self._hash

    def __len__(self) -> int:
        return len(self.monomials)

    def __bool__(self) -> bool:
        return bool(self.monomials)

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)!r})"


_ONE_SET = frozenset({0})
ZERO = Poly(frozenset())
ONE = Poly(_ONE_SET)


def var(v: int) -> Poly:
    return Poly(frozenset({1 << v}))


def add(a: Poly, b: Poly) -> Poly:
    return Poly(a.monomials ^ b.monomials)


def mul(a: Poly, b: Poly) -> Poly:
    am, bm = a.monomials, b.monomials
    if not am or not bm:
        return ZERO
    if am == _ONE_SET:
        return b
    if bm == _ONE_SET:
        return a
    if len(am) > len(bm):
        am, bm = bm, am
    acc: set[int] = set()
    for x in am:
        for y in bm:
            m = x | y
            if m in acc:
                acc.remove(m)
            else:
                acc.add(m)
    return Poly(frozenset(acc))


def evaluate(a: Poly, point: Mapping[int, int]) -> int:
    """Value of ``a`` at a point given as a mapping from variable id to bit."""
    need = a.mask
    true_mask = 0
    for v in _bits(need):
        try:
            bit = point[v]
        except KeyError:
            raise UnassignedVariableError(v) from None
        if bit:
            true_mask |= 1 << v
    return eval_mask(a, true_mask)


def eval_mask(a: Poly, true_mask: int) -> int:
    """Value of ``a`` where exactly the variables in ``true_mask`` are 1."""
    off = ~true_mask
    return sum(1 for m in a.monomials if not m & off) & 1


def derivative(a: Poly, v: int) -> Poly:
    """a{x_v:=1} + a{x_v:=0}, i.e. the cofactor of x_v."""
    bit = 1 << v
    return Poly(frozenset(m ^ bit for m in a.monomials if m & bit))


def decompose(a: Poly, v: int) -> tuple[Poly, Poly]:
    """Split ``a`` as ``b + x_v * c`` with ``b`` and ``c`` free of ``x_v``."""
    bit = 1 << v
    b = frozenset(m for m in a.monomials if not m & bit)
    c = frozenset(m ^ bit for m in a.monomials if m & bit)
    return Poly(b), Poly(c)


def independence_rule(a1: Poly, a2: Poly, v: int) -> Poly:
    """Forget ``x_v`` from the pair ``(a1, a2)``.

    Computes ``1 + (1 + b1*b2) * (1 + (b1 + c1) * (b2 + c2))`` where
    ``a_i = b_i + x_v * c_i``. The result vanishes exactly outside the
    projection of the common models of ``a1`` and ``a2``.
    """
    b1, c1 = decompose(a1, v)
    b2, c2 = decompose(a2, v)
    if not c1 and not c2:
        return mul(a1, a2)
    at_zero = mul(b1, b2)
    at_one = mul(b1 + c1, b2 + c2)
    return ONE + mul(ONE + at_zero, ONE + at_one)


def independence_rule_unrewritten(a1: Poly, a2: Poly, v: int) -> Poly:
    """The derivative-based form of the rule; kept as a cross-check."""
    d1 = derivative(a1, v)
    d2 = derivative(a2, v)
    inner = ONE + mul(a1, d2) + mul(a2, d1) + mul(d1, d2)
    return ONE + mul(ONE + mul(a1, a2), inner)


def poly_size(a: Poly) -> int:
    """Symbol count: variables per monomial (constants count 1) plus pluses."""
    if not a.monomials:
        return 1
    return sum(max(1, m.bit_count()) for m in a.monomials) + len(a.monomials) - 1


# -- text format -----------------------------------------------------------

def _names_of(m: int, vocab: Vocabulary | None) -> list[str]:
    if vocab is None:
        return sorted((f"x{v}" for v in _bits(m)))
    return sorted(vocab.name(v) for v in _bits(m))


def canonical_terms(a: Poly, vocab: Vocabulary | None = None) -> list[list[str]]:
    """Monomials as sorted name lists, degree descending then lexicographic."""
    named = [_names_of(m, vocab) for m in a.monomials]
    named.sort(key=lambda names: (-len(names), names))
    return named


def format_poly(a: Poly, vocab: Vocabulary | None = None) -> str:
    if not a.monomials:
        return "0"
    return "+".join("*".join(names) if names else "1" for names in canonical_terms(a, vocab))


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def parse_poly(text: str, vocab: Vocabulary) -> Poly:
    """Parse ``x1*x3+x2+1`` style text, interning new names into ``vocab``."""
    compact = "".join(text.split())
    if not compact:
        raise PolySyntaxError("empty polynomial")
    masks = []
    for term in compact.split("+"):
        if term == "1":
            masks.append(0)
            continue
        if term == "0":
            continue
        m = 0
        for factor in term.split("*"):
            if factor == "1":
                continue
            if factor == "0":
                break
            if not _IDENT.match(factor):
                raise PolySyntaxError(f"bad factor {factor!r} in {text!r}")
            m |= 1 << vocab.intern(factor)
        else:
            masks.append(m)
    return Poly(masks)
