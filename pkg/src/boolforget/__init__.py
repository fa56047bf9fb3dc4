"""Propositional reasoning through Boolean polynomials over GF(2).

Variable forgetting with the independence rule, conservative retraction,
saturation-based SAT and entailment, and sensitivity analysis.
"""

from .boolpoly import (
    ONE,
    ZERO,
    Poly,
    Vocabulary,
    add,
    decompose,
    derivative,
    evaluate,
    format_poly,
    independence_rule,
    mul,
    parse_poly,
)
from .forget import (
    PolyKB,
    SaturationTrace,
    SizeCapExceeded,
    canonical_forget,
    canonical_forget_kb,
    canonical_saturate,
    forget_var,
    independence_forget,
    retract,
    saturate,
)
from .formula import Literal, formula_derivative, parse_formula, print_formula, simplify_sigma, substitute
from .reason import (
    classify_facts,
    dangerous_literals,
    entails,
    entails_localized,
    irrelevance_check,
    is_consistent,
    is_sensitive,
)
from .translate import project_pi, to_formula_theta, to_poly_P

__version__ = "0.1.0"

__all__ = [
    "ONE",
    "ZERO",
    "Poly",
    "Vocabulary",
    "add",
    "decompose",
    "derivative",
    "evaluate",
    "format_poly",
    "independence_rule",
    "mul",
    "parse_poly",
    "PolyKB",
    "SaturationTrace",
    "SizeCapExceeded",
    "canonical_forget",
    "canonical_forget_kb",
    "canonical_saturate",
    "forget_var",
    "independence_forget",
    "retract",
    "saturate",
    "classify_facts",
    "dangerous_literals",
    "entails",
    "entails_localized",
    "irrelevance_check",
    "is_consistent",
    "is_sensitive",
    "Literal",
    "formula_derivative",
    "parse_formula",
    "print_formula",
    "simplify_sigma",
    "substitute",
    "project_pi",
    "to_formula_theta",
    "to_poly_P",
]
