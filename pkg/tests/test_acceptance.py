"""Acceptance criteria, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v``; the lines are repeated in the
terminal summary under "acceptance criteria".
"""

import csv
import io
import random
import time

from boolforget.boolpoly import ONE, ZERO, Poly, Vocabulary, format_poly, independence_rule, mul, parse_poly
from boolforget.boolpoly import independence_rule_unrewritten
from boolforget.cli import CSV_FIELDS, main, read_bench_csv, trend_report
from boolforget.forget import (
    CONSISTENT,
    PolyKB,
    canonical_retract,
    canonical_saturate,
    forget_var,
    independence_forget,
    retract,
    saturate,
)
from boolforget.formula import And, Iff, Imp, Literal, Not, Or, Var, parse_formula
from boolforget.io import format_dimacs, random_kcnf
from boolforget.oracle import models_of, oracle_consistent, oracle_equivalent, project_models
from boolforget.reason import classify_facts, is_sensitive
from boolforget.translate import project_pi, to_formula_theta, to_poly_P

from conftest import (
    ESPRESSO_TEXT,
    EXAMPLE1_TEXT,
    RULES_TEXT,
    formulas,
    letters,
    juxtaposed,
    report_criterion,
    show,
)

NAMES6 = ("a", "b", "c", "d", "e", "f")


def canonical(text: str) -> str:
    vocab = Vocabulary()
    return format_poly(parse_poly(text, vocab), vocab)


def printed(*members: str, single_letters: bool = False) -> list[str]:
    convert = letters if single_letters else juxtaposed
    return sorted(canonical(convert(m)) for m in members if m != "1")


def random_formula(rng: random.Random, names=NAMES6, depth: int = 4):
    if depth == 0 or rng.random() < 0.25:
        return Var(rng.choice(names))
    kind = rng.randrange(5)
    if kind == 0:
        return Not(random_formula(rng, names, depth - 1))
    left = random_formula(rng, names, depth - 1)
    right = random_formula(rng, names, depth - 1)
    return (And, Or, Imp, Iff)[kind - 1](left, right)


def random_poly(rng: random.Random, num_vars: int = 8, max_terms: int = 6) -> Poly:
    return Poly(rng.randrange(1 << num_vars) for _ in range(rng.randint(0, max_terms)))


# -- 1 ---------------------------------------------------------------------

def test_criterion_1_example1_trace():
    start = time.perf_counter()
    kb = PolyKB.from_formulas(formulas(EXAMPLE1_TEXT))
    steps = [
        ("projection", kb, printed("pqrst+pqst+1", "pt+s+1", "qst+qt+1", "rst+rt+1", single_letters=True)),
    ]
    for name, expected in (
        ("t", printed("pqrs+pqs+ps+s+1", "ps+s+1", "1", single_letters=True)),
        ("q", printed("ps+s+1", "1", single_letters=True)),
        ("p", printed("1", single_letters=True)),
    ):
        kb = forget_var(kb, name)
        steps.append((f"forget {name}", kb, expected))
    elapsed = time.perf_counter() - start
    mismatches = [label for label, got, expected in steps if show(got) != expected]
    ok = not mismatches and kb.is_trivial() and elapsed < 1.0
    detail = f"{elapsed * 1000:.1f} ms" + (f", mismatched at {mismatches}" if mismatches else "")
    report_criterion(1, "Example 1 retraction trace t, q, p ends in {1}", ok, detail)
    assert ok


# -- 2 ---------------------------------------------------------------------

def test_criterion_2_refutation(tmp_path):
    start = time.perf_counter()
    vocab = Vocabulary(f"x{k}" for k in range(5))
    one = parse_poly("1+x1+x1*x2", vocab)
    two = ONE + mul(parse_poly("x2+x3+x2*x3", vocab), parse_poly("1+x4", vocab))
    three = mul(parse_poly("x1", vocab), parse_poly("1+x4", vocab))
    step4 = independence_rule(one, two, 2)
    expected4 = parse_poly("1+x1+x3+x1*x4+x3*x4+x1*x3+x1*x3*x4", vocab)
    step5 = independence_rule(three, step4, 1)

    # the same steps inside the KB: forgetting q yields step 4, then p yields 0
    kb = PolyKB.from_formulas(formulas("p -> q\nq | r -> s\n~(p -> s)"))
    after_q = forget_var(kb, "q")
    renamed = {canonical(t) for t in ("1+p+r+p*s+r*s+p*r+p*r*s",)}
    in_kb = renamed <= set(after_q.formatted())
    after_p = forget_var(after_q, "p")

    path = tmp_path / "refute.fml"
    path.write_text("p -> q\nq | r -> s\n~(p -> s)\n")
    code = main(["check-sat", str(path)])
    elapsed = time.perf_counter() - start
    ok = (
        step4 == expected4
        and step5 == ZERO
        and in_kb
        and after_p.polys == {ZERO}
        and code == 20
        and elapsed < 1.0
    )
    detail = f"step 4 {format_poly(step4, vocab)}, step 5 {format_poly(step5, vocab)}, exit {code}, {elapsed * 1000:.1f} ms"
    report_criterion(2, "refutation reaches the step-4 polynomial then 0; check-sat exits 20", ok, detail)
    assert ok


# -- 3 ---------------------------------------------------------------------

ESPRESSO_PARTS = [
    (("man_fill", "ok_pump", "on_pump", "water"),
     "ok_pump & on_pump -> water\nman_fill -> water\nman_fill -> ~on_pump\n~man_fill -> on_pump"),
    (("ok_boiler", "on_boiler", "steam", "water"),
     "steam -> ok_boiler\nsteam -> on_boiler\nsteam -> water\nok_boiler & on_boiler & water -> steam"),
    (("coffee", "hot_drink", "steam", "teabag"),
     "coffee & steam -> hot_drink\ncoffee | teabag\nsteam & teabag -> hot_drink"),
]


def test_criterion_3_golden_results():
    start = time.perf_counter()
    checks: dict[str, bool] = {}

    vocab = Vocabulary(f"x{k}" for k in range(6))
    rule = independence_rule(
        parse_poly("1+x2*x3*x5+x3*x5", vocab), parse_poly("1+x1*x2*x3*x4*x5+x1*x2*x3*x5", vocab), 2
    )
    checks["worked rule application"] = rule == parse_poly("1+x1*x3*x4*x5+x1*x3*x5", vocab)

    rules = formulas(RULES_TEXT)
    kb_not_p2 = PolyKB.from_formulas(rules + [parse_formula("~p2")])
    kb_p4 = PolyKB.from_formulas(rules + [parse_formula("p4")])
    checks["R1 sensitive in p1 w.r.t. K+{~p2}"] = is_sensitive(kb_not_p2, parse_formula("p1 -> p9"), "p1")
    checks["R5 not sensitive in p1 w.r.t. K+{p4}"] = not is_sensitive(
        kb_p4, parse_formula("p1 & p7 -> p11"), "p1"
    )

    facts = [Literal(f"p{i}", sign) for i in range(1, 7) for sign in (True, False)]
    state = [Literal("p1", True), Literal("p2", False)]
    report = classify_facts(PolyKB.from_formulas(rules), facts, state, "p11")
    checks["dangerous set is {p3, p4}"] = report.dangerous == {Literal("p3", True), Literal("p4", True)}
    checks["p5, p6 safe"] = {Literal("p5", True), Literal("p6", True)} <= report.safe

    espresso = PolyKB.from_formulas(formulas(ESPRESSO_TEXT))
    for i, (language, text) in enumerate(ESPRESSO_PARTS, start=1):
        got = retract(espresso, [n for n in espresso.language() if n not in language])
        checks[f"espresso part {i} equivalent"] = oracle_equivalent(got, formulas(text), language)

    elapsed = time.perf_counter() - start
    failed = [name for name, ok in checks.items() if not ok]
    ok = not failed and elapsed < 5.0
    detail = f"{len(checks) - len(failed)}/{len(checks)} checks, {elapsed:.2f} s"
    if failed:
        detail += f"; failed: {', '.join(failed)}"
    report_criterion(3, "worked rule, sensitivity verdicts, dangerous set, espresso retractions", ok, detail)
    assert ok, failed


# -- 4 ---------------------------------------------------------------------

def test_criterion_4_lifting_lemma():
    rng = random.Random(4)
    rest = [n for n in NAMES6 if n != "a"]
    failures = 0
    cases = 600
    for _ in range(cases):
        f, g = random_formula(rng), random_formula(rng)
        forgotten = independence_forget(f, g, "a")
        expected = project_models(models_of(And(f, g), NAMES6), rest)
        if models_of(forgotten, rest) != expected:
            failures += 1
    ok = failures == 0
    report_criterion(4, "Lifting Lemma on random formula pairs", ok, f"{cases} pairs, {failures} failures")
    assert ok


# -- 5 ---------------------------------------------------------------------

def test_criterion_5_completeness():
    start = time.perf_counter()
    rng = random.Random(5)
    cases = 200
    wrong_ind = wrong_can = wrong_retract = 0
    for _ in range(cases):
        n = rng.randint(3, 10)
        problem = random_kcnf(n, rng.randint(1, 40), 3, rng.randrange(2**32))
        fs = problem.to_formulas()
        language = problem.names()
        truth = oracle_consistent(fs, language)
        if (saturate(problem.to_kb())[0] == CONSISTENT) != truth:
            wrong_ind += 1
        if (canonical_saturate(fs, subsume=True)[0] == CONSISTENT) != truth:
            wrong_can += 1
        drop = rng.sample(language, rng.randint(1, n - 1))
        keep = [x for x in language if x not in drop]
        ours = retract(problem.to_kb(), drop)
        theirs = canonical_retract(fs, drop, subsume=True)
        if models_of(ours, keep) != models_of(list(theirs), keep):
            wrong_retract += 1
    elapsed = time.perf_counter() - start
    ok = wrong_ind == wrong_can == wrong_retract == 0 and elapsed < 120
    detail = (
        f"{cases} instances; verdict mismatches independence={wrong_ind} canonical={wrong_can}; "
        f"retraction mismatches={wrong_retract}; {elapsed:.1f} s"
    )
    report_criterion(5, "saturation completeness and operator agreement on random 3-CNF", ok, detail)
    assert ok


# -- 6 ---------------------------------------------------------------------

def test_criterion_6_algebra():
    rng = random.Random(6)
    cases = 500
    bad = {"two forms": 0, "idempotence": 0, "pi(theta(a))": 0, "theta(P(F))": 0}
    for _ in range(cases):
        a1, a2 = random_poly(rng), random_poly(rng)
        v = rng.randrange(8)
        if independence_rule(a1, a2, v) != independence_rule_unrewritten(a1, a2, v):
            bad["two forms"] += 1
        if mul(a1, a1) != a1:
            bad["idempotence"] += 1
        vocab = Vocabulary(f"v{k}" for k in range(8))
        if project_pi(to_formula_theta(a1, vocab), vocab) != a1:
            bad["pi(theta(a))"] += 1
        f = random_formula(rng)
        fv = Vocabulary()
        if not oracle_equivalent(to_formula_theta(to_poly_P(f, fv).reduce(), fv), f, NAMES6):
            bad["theta(P(F))"] += 1
    ok = not any(bad.values())
    detail = f"{cases} cases each; failures " + ", ".join(f"{k}={v}" for k, v in bad.items())
    report_criterion(6, "two-forms equality, a*a=a, theta/pi round trips", ok, detail)
    assert ok


# -- 7 ---------------------------------------------------------------------

def test_criterion_7_bench(tmp_path, capsys):
    cnf = tmp_path / "bench.cnf"
    cnf.write_text(format_dimacs(random_kcnf(20, 60, 3, seed=1)))
    out = tmp_path / "bench.csv"
    code = main(["bench", str(cnf), "--op", "both", "--steps", "12", "--seed", "7", "--out", str(out)])
    capsys.readouterr()
    text = out.read_text(encoding="utf-8")
    header = next(csv.reader(io.StringIO(text)))
    rows = read_bench_csv(text)
    ind = [r for r in rows if r.operator == "independence"]
    can = [r for r in rows if r.operator == "canonical"]
    completed = [r for r in ind if r.status == "ok"]
    ok = (
        code == 0
        and tuple(header) == CSV_FIELDS
        and "\r" not in text
        and len(completed) >= 10
        and [r.step for r in ind] == list(range(1, len(ind) + 1))
        and [r.variable for r in ind][: len(can)] == [r.variable for r in can]
        and all(r.kb_size_symbols >= 0 and r.elapsed_ms >= 0 for r in rows)
    )
    # a rerun gives the same sequence and sizes
    again = tmp_path / "again.csv"
    main(["bench", str(cnf), "--op", "both", "--steps", "12", "--seed", "7", "--out", str(again)])
    capsys.readouterr()
    same = [(r.variable, r.operator, r.kb_members, r.kb_size_symbols) for r in read_bench_csv(again.read_text())]
    ok = ok and same == [(r.variable, r.operator, r.kb_members, r.kb_size_symbols) for r in rows]
    trend = trend_report(rows).replace("\n", "; ")
    report_criterion(7, "bench on random 3-CNF n=20 m=60, well-formed deterministic CSV", ok,
                     f"{len(completed)} independence steps ok; {trend}")
    assert ok
