import os
import re

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from boolforget.boolpoly import Poly, Vocabulary, format_poly, parse_poly
from boolforget.forget import PolyKB
from boolforget.formula import BOT, TOP, And, Iff, Imp, Not, Or, Var, parse_formula

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

NAMES = ("p", "q", "r", "s", "t", "u")

EXAMPLE1_TEXT = """\
t & p <-> s
t & r -> s
t & q -> s
p & q & s & t -> r
"""

# rule base of ten implications over p1..p11
RULES_TEXT = """\
p1 -> p9
p1 -> p10
~p2 -> p9
~p2 -> p10
p1 & p7 -> p11
p3 -> p7
p3 -> p10
p4 -> p11
p5 -> p8
p6 -> p9
"""

ESPRESSO_TEXT = """\
ok_pump & on_pump -> water
man_fill -> water
man_fill -> ~on_pump
~man_fill -> on_pump
water & ok_boiler & on_boiler -> steam
~water -> ~steam
~ok_boiler -> ~steam
~on_boiler -> ~steam
coffee | teabag
steam & coffee -> hot_drink
steam & teabag -> hot_drink
"""


def formulas(text: str):
    return [parse_formula(line) for line in text.splitlines() if line.strip()]


def xvocab(n: int = 16) -> Vocabulary:
    """Vocabulary where name ``xk`` has id ``k``."""
    return Vocabulary(f"x{k}" for k in range(n))


def P(text: str, vocab: Vocabulary | None = None) -> Poly:
    return parse_poly(text, vocab if vocab is not None else xvocab())


def juxtaposed(text: str) -> str:
    """Turn a printed polynomial like ``p1p11p7+p1p7+1`` into ``p1*p11*p7+p1*p7+1``."""
    return re.sub(r"(?<=[0-9a-z])(?=[a-z])", "*", text.replace(" ", ""))


def letters(text: str) -> str:
    """Single-letter variables written side by side: ``pqs+s+1`` -> ``p*q*s+s+1``."""
    return "+".join("*".join(term) if term != "1" else "1" for term in text.replace(" ", "").split("+"))


def show(kb: PolyKB) -> list[str]:
    return sorted(format_poly(p, kb.vocab) for p in kb.polys)


@pytest.fixture
def example1_kb() -> PolyKB:
    return PolyKB.from_formulas(formulas(EXAMPLE1_TEXT))


@pytest.fixture
def rules():
    return formulas(RULES_TEXT)


# -- hypothesis strategies --------------------------------------------------

def poly_strategy(num_vars: int = 8, max_terms: int = 6):
    masks = st.integers(min_value=0, max_value=(1 << num_vars) - 1)
    return st.lists(masks, max_size=max_terms).map(Poly)


def formula_strategy(names=NAMES, max_leaves: int = 10):
    leaves = st.one_of(st.sampled_from([Var(n) for n in names]), st.sampled_from([TOP, BOT]))
    weighted = st.one_of(*[st.sampled_from([Var(n) for n in names])] * 4, leaves)

    def extend(children):
        return st.one_of(
            children.map(Not),
            st.tuples(children, children).map(lambda lr: And(*lr)),
            st.tuples(children, children).map(lambda lr: Or(*lr)),
            st.tuples(children, children).map(lambda lr: Imp(*lr)),
            st.tuples(children, children).map(lambda lr: Iff(*lr)),
        )

    return st.recursive(weighted, extend, max_leaves=max_leaves)


def constant_free_formula_strategy(names=NAMES, max_leaves: int = 10):
    def extend(children):
        return st.one_of(
            children.map(Not),
            st.tuples(children, children).map(lambda lr: And(*lr)),
            st.tuples(children, children).map(lambda lr: Or(*lr)),
            st.tuples(children, children).map(lambda lr: Imp(*lr)),
            st.tuples(children, children).map(lambda lr: Iff(*lr)),
        )

    return st.recursive(st.sampled_from([Var(n) for n in names]), extend, max_leaves=max_leaves)


# -- acceptance report -----------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def report_criterion(number: int, title: str, ok: bool, detail: str = "") -> str:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {title}" + (f" ({detail})" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
