"""Propositional formulas: AST, substitution, simplification, parsing."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

__all__ = [
    "Formula",
    "Top",
    "Bottom",
    "Var",
    "Not",
    "And",
    "Or",
    "Imp",
    "Iff",
    "TOP",
    "BOT",
    "Literal",
    "variables",
    "substitute",
    "simplify_sigma",
    "is_reduced",
    "formula_derivative",
    "size",
    "conjoin",
    "parse_formula",
    "print_formula",
    "FormulaSyntaxError",
]


class _Node:
    """Base of the immutable formula nodes.

    Hash, variable set, size and constant-occurrence are cached per node so
    that formulas sharing subtrees stay cheap to inspect.
    """

    __slots__ = ("_hash", "_vars", "_size", "_const")

    def _children(self) -> tuple:
        return ()

    def _key(self) -> tuple:
        return ()

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if type(self) is not type(other):
            return False
        if hash(self) != hash(other):
            return False
        return self._key() == other._key()

    def __ne__(self, other: object) -> bool:
        return not self == other

    def __hash__(self) -> int:
        try:
            return self._hash
        except AttributeError:
            h = hash((type(self).__name__,) + self._key())
            object.__setattr__(self, "_hash", h)
            return h

    def __setattr__(self, name, value):
        raise AttributeError("formulas are immutable")

    def __str__(self) -> str:
        return print_formula(self)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({print_formula(self)!r})"

    def __reduce__(self):
        return (type(self), self._key())


class Top(_Node):
    __slots__ = ()


class Bottom(_Node):
    __slots__ = ()


class Var(_Node):
    __slots__ = ("name",)

    def __init__(self, name: str):
        object.__setattr__(self, "name", name)

    def _key(self) -> tuple:
        return (self.name,)


class Not(_Node):
    __slots__ = ("arg",)

    def __init__(self, arg: "Formula"):
        object.__setattr__(self, "arg", arg)

    def _children(self) -> tuple:
        return (self.arg,)

    def _key(self) -> tuple:
        return (self.arg,)


class _Binary(_Node):
    __slots__ = ("left", "right")

    def __init__(self, left: "Formula", right: "Formula"):
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)

    def _children(self) -> tuple:
        return (self.left, self.right)

    def _key(self) -> tuple:
        return (self.left, self.right)


class And(_Binary):
    __slots__ = ()


class Or(_Binary):
    __slots__ = ()


class Imp(_Binary):
    __slots__ = ()


class Iff(_Binary):
    __slots__ = ()


Formula = Union[Top, Bottom, Var, Not, And, Or, Imp, Iff]

TOP = Top()
BOT = Bottom()

_CONSTANTS = (Top, Bottom)


@dataclass(frozen=True)
class Literal:
    name: str
    positive: bool = True

    def negate(self) -> Literal:
        return Literal(self.name, not self.positive)

    def to_formula(self) -> Formula:
        v = Var(self.name)
        return v if self.positive else Not(v)

    @classmethod
    def parse(cls, text: str) -> Literal:
        text = text.strip()
        if text.startswith("~"):
            return cls(text[1:].strip(), False)
        if text.startswith("-"):
            return cls(text[1:].strip(), False)
        return cls(text, True)

    def __str__(self) -> str:
        return self.name if self.positive else "~" + self.name


def variables(f: Formula) -> frozenset[str]:
    try:
        return f._vars
    except AttributeError:
        pass
    if isinstance(f, Var):
        out = frozenset((f.name,))
    else:
        kids = f._children()
        if not kids:
            out = frozenset()
        elif len(kids) == 1:
            out = variables(kids[0])
        else:
            out = variables(kids[0]) | variables(kids[1])
    object.__setattr__(f, "_vars", out)
    return out


def size(f: Formula) -> int:
    """Number of nodes of ``f`` read as a tree."""
    try:
        return f._size
    except AttributeError:
        pass
    out = 1 + sum(size(k) for k in f._children())
    object.__setattr__(f, "_size", out)
    return out


def _has_constant(f: Formula) -> bool:
    try:
        return f._const
    except AttributeError:
        pass
    if isinstance(f, _CONSTANTS):
        out = True
    else:
        out = any(_has_constant(k) for k in f._children())
    object.__setattr__(f, "_const", out)
    return out


def conjoin(formulas) -> Formula:
    out: Formula | None = None
    for g in formulas:
        out = g if out is None else And(out, g)
    return TOP if out is None else out


def substitute(f: Formula, name: str, g: Formula) -> Formula:
    """f{name/g}: every occurrence of the variable replaced simultaneously."""
    memo: dict[int, Formula] = {}

    def go(node: Formula) -> Formula:
        if name not in variables(node):
            return node
        key = id(node)
        if key in memo:
            return memo[key]
        if isinstance(node, Var):
            out = g
        elif isinstance(node, Not):
            out = Not(go(node.arg))
        else:
            out = type(node)(go(node.left), go(node.right))
        memo[key] = out
        return out

    return go(f)


def is_reduced(f: Formula) -> bool:
    """True if no constant occurs, or the whole formula is a constant."""
    return isinstance(f, _CONSTANTS) or not _has_constant(f)


def _negate(f: Formula) -> Formula:
    if isinstance(f, Top):
        return BOT
    if isinstance(f, Bottom):
        return TOP
    return Not(f)


def simplify_sigma(f: Formula) -> Formula:
    """Remove constants from ``f`` without changing its meaning.

    The result is either a constant or contains no constant at all.
    """
    memo: dict[int, Formula] = {}

    def go(node: Formula) -> Formula:
        # children come back reduced, so each rule below yields a reduced node
        if not _has_constant(node) or isinstance(node, _CONSTANTS):
            return node
        key = id(node)
        if key in memo:
            return memo[key]
        if isinstance(node, Not):
            out = _negate(go(node.arg))
        else:
            out = _sigma_binary(node, go(node.left), go(node.right))
        memo[key] = out
        return out

    return go(f)


def _sigma_binary(f: _Binary, left: Formula, right: Formula) -> Formula:
    lt, rt = isinstance(left, Top), isinstance(right, Top)
    lb, rb = isinstance(left, Bottom), isinstance(right, Bottom)
    if isinstance(f, And):
        if lb or rb:
            return BOT
        if lt:
            return right
        if rt:
            return left
    elif isinstance(f, Or):
        if lt or rt:
            return TOP
        if lb:
            return right
        if rb:
            return left
    elif isinstance(f, Imp):
        if lb or rt:
            return TOP
        if lt:
            return right
        if rb:
            return _negate(left)
    elif isinstance(f, Iff):
        if lt:
            return right
        if rt:
            return left
        if lb:
            return _negate(right)
        if rb:
            return _negate(left)
    return type(f)(left, right)


def formula_derivative(f: Formula, name: str) -> Formula:
    """Boolean derivative of ``f`` in ``name``, computed through polynomials."""
    from .boolpoly import Vocabulary, derivative
    from .translate import project_pi, to_formula_theta

    vocab = Vocabulary(sorted(variables(f) | {name}))
    d = derivative(project_pi(f, vocab), vocab.id(name))
    return to_formula_theta(d, vocab)


# -- concrete syntax --------------------------------------------------------

class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<iff><->)|(?P<imp>->)|(?P<op>[~&|()])"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
)


def _tokenize(text: str) -> list[tuple[str, str, int, int]]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        col = pos - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind in ("iff", "imp", "op", "ident"):
            tokens.append((kind if kind != "op" else m.group(), m.group(), line, col))
        pos = m.end()
    tokens.append(("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def take(self) -> tuple[str, str, int, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message: str):
        _, value, line, col = self.tokens[self.i]
        found = repr(value) if value else "end of input"
        raise FormulaSyntaxError(f"{message}, found {found}", line, col)

    def parse(self) -> Formula:
        f = self.iff()
        if self.peek() != "eof":
            self.fail("expected end of formula")
        return f

    def iff(self) -> Formula:
        left = self.imp()
        if self.peek() == "iff":
            self.take()
            return Iff(left, self.iff())
        return left

    def imp(self) -> Formula:
        left = self.disj()
        if self.peek() == "imp":
            self.take()
            return Imp(left, self.imp())
        return left

    def disj(self) -> Formula:
        left = self.conj()
        while self.peek() == "|":
            self.take()
            left = Or(left, self.conj())
        return left

    def conj(self) -> Formula:
        left = self.unary()
        while self.peek() == "&":
            self.take()
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        kind = self.peek()
        if kind == "~":
            self.take()
            return Not(self.unary())
        if kind == "(":
            self.take()
            f = self.iff()
            if self.peek() != ")":
                self.fail("expected ')'")
            self.take()
            return f
        if kind == "ident":
            _, value, _, _ = self.take()
            if value == "T":
                return TOP
            if value == "F":
                return BOT
            return Var(value)
        self.fail("expected a formula")


def parse_formula(text: str) -> Formula:
    """Parse one formula.

    Precedence from loosest to tightest is ``<->``, ``->``, ``|``, ``&``, ``~``;
    the arrows associate to the right, ``&`` and ``|`` to the left.
    """
    return _Parser(text).parse()


_SYMBOL = {And: "&", Or: "|", Imp: "->", Iff: "<->"}


def print_formula(f: Formula) -> str:
    """Print ``f`` so that ``parse_formula`` gives it back unchanged."""
    if isinstance(f, Top):
        return "T"
    if isinstance(f, Bottom):
        return "F"
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Not):
        return "~" + _atomic(f.arg)
    return f"{_atomic(f.left)} {_SYMBOL[type(f)]} {_atomic(f.right)}"


def _atomic(f: Formula) -> str:
    if isinstance(f, _Binary):
        return "(" + print_formula(f) + ")"
    return print_formula(f)
