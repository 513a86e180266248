from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from approxent.errors import EvaluationError, VariantError
from approxent.fuzz import (chain_family, fixture_scales, modal_shapes, plain_family, random_model,
                            run_distribution_suite, run_modal_suite)
from approxent.grades import godel
from approxent.semantics import (Evaluation, eval_basic, failing_members, gimp_witness, sat_formula, sat_gimp,
                                 sat_theory, validate_evaluation)
from approxent.spaces import ChainSpace, ProductSpace, SimilaritySpace
from approxent.syntax import BOT, TOP, And, Dle, Gimp, Logic, Not, ONot, OOr, Or, Signature, Var
from oracles import ext, holds

HALF = Fraction(1, 2)
p, q = Var("p"), Var("q")


def chain_model(ep=0b001, eq=0b010):
    s = godel()
    sp = ChainSpace.from_grades(s, ["w1", "w2", "w3"], {("w1", "w2"): HALF, ("w2", "w3"): HALF, ("w1", "w3"): HALF})
    sig = Signature.plain(["p", "q"])
    return Evaluation(sp, sig, {"p": ep, "q": eq}, check=False)


def test_validate_examples():
    s = godel()
    sp = SimilaritySpace(s, ["w1", "w2"], [[2, 0], [0, 2]])
    sig = Signature.plain(["p"])
    assert validate_evaluation(Evaluation(sp, sig, {"p": 0b01}, check=False)) == []
    diags = validate_evaluation(Evaluation(sp, sig, {"p": 0b11}, check=False))
    assert [(d.problem, d.witness) for d in diags] == [("separation", ("w1", "w2"))]
    with pytest.raises(EvaluationError):
        Evaluation(sp, sig, {"p": 0b11})


def _product22():
    s = godel()
    a = ChainSpace(s, ["a1", "a2"], [[2, 1], [1, 2]])
    b = ChainSpace(s, ["b1", "b2"], [[2, 1], [1, 2]])
    return ProductSpace([a, b], ["A", "B"])


def test_saturation_failure():
    sp = _product22()
    sig = Signature((("A", ("x",)), ("B", ("y",))), ("a",))
    x, y = sp.cyl(0, 0b01), sp.cyl(1, 0b01)
    ok = Evaluation(sp, sig, {"x": x, "y": y, "a": x}, check=False)
    assert validate_evaluation(ok) == []
    # the product here has one world per cell, so a single tuple is still a union of cells
    assert validate_evaluation(Evaluation(sp, sig, {"x": x, "y": y, "a": 1}, check=False)) == []
    # a signature with a single sorted variable cannot isolate a tuple: separation and saturation both fail
    sig1 = Signature((("A", ("x",)), ("B", ("y",))), ("a",))
    bad = Evaluation(sp, sig1, {"x": x, "y": sp.full, "a": 1}, check=False)
    problems = {d.problem for d in validate_evaluation(bad)}
    assert {"saturation", "separation"} <= problems


def test_cylinder_failure():
    sp = _product22()
    sig = Signature((("A", ("x",)), ("B", ("y",))))
    bad = Evaluation(sp, sig, {"x": 0b0001, "y": sp.cyl(1, 1)}, check=False)
    assert any(d.problem == "cylinder" and d.witness == ("x",) for d in validate_evaluation(bad))


def test_other_diagnostics():
    s = godel()
    sp = SimilaritySpace(s, ["w1"], [[2]])
    sig = Signature.plain(["p", "q"])
    problems = {d.problem for d in validate_evaluation(Evaluation(sp, sig, {"p": 0b11, "r": 0}, check=False))}
    assert {"unassigned variable", "undeclared variable"} <= problems
    problems = {d.problem for d in validate_evaluation(Evaluation(sp, sig, {"p": 0, "q": 0}, "laec", check=False))}
    assert "variant" in problems


def test_eval_examples():
    ev = chain_model(ep=0b010)
    assert eval_basic(ev, Not(BOT)) == ev.space.full
    assert ev.space.names(eval_basic(ev, Dle(p))) == ["w1", "w2"]
    assert eval_basic(ev, And(p, Not(p))) == 0


def test_diamond_needs_order():
    sp = SimilaritySpace(godel(), ["w1", "w2"], [[2, 0], [0, 2]])
    ev = Evaluation(sp, Signature.plain(["p"]), {"p": 1})
    with pytest.raises(VariantError):
        eval_basic(ev, Dle(p))


def test_sat_gimp_examples():
    ev = chain_model()
    assert sat_gimp(ev, Gimp(p, HALF, q))
    assert not sat_gimp(ev, Gimp(p, 1, q))
    assert gimp_witness(ev, Gimp(p, 1, q)) == 0
    assert gimp_witness(ev, Gimp(p, HALF, q)) is None
    for c in (0, HALF, 1):
        assert sat_gimp(ev, Gimp(BOT, c, q))
        assert sat_gimp(ev, Gimp(And(p, q), 1, And(p, q)))


def test_sat_formula_examples():
    ev = chain_model()
    a10 = ONot(Gimp(TOP, 1, BOT))
    assert sat_formula(ev, a10)
    g = Gimp(q, 1, p)
    assert sat_formula(ev, OOr(g, ONot(g)))
    assert sat_theory(ev, [])
    assert failing_members(ev, [g, a10, Gimp(p, 1, q)]) == [0, 2]


def test_a10_in_every_plain_model():
    f = ONot(Gimp(TOP, 1, BOT))
    for scale in fixture_scales():
        for ev in plain_family(scale, 3):
            assert sat_formula(ev, f)


def test_matches_independent_evaluator():
    # compare against the set-based oracle on every plain fixture model
    exprs = [p, q, Not(p), And(p, q), Or(p, Not(q)), And(Not(p), Not(q)), TOP, BOT]
    forms = [Gimp(a, c, b) for a in exprs for b in exprs for c in (0, HALF, 1)]
    forms += [OOr(forms[3], ONot(forms[17])), ONot(forms[40])]
    for scale in fixture_scales():
        for ev in plain_family(scale, 4):
            sp = ev.space
            n = sp.n
            s = [[sp.sim_grade(u, v) for v in range(n)] for u in range(n)]
            val = {v: {k for k in range(n) if m >> k & 1} for v, m in ev.assignment.items()}
            for e in exprs:
                assert eval_basic(ev, e) == sum(1 << k for k in ext(e, n, s, val))
            for f in forms:
                assert sat_formula(ev, f) == holds(f, n, s, val)


def test_distribution_laws():
    report = run_distribution_suite()
    assert report.total_checked > 10_000 and report.total_failures == 0


def test_modal_shapes_quick():
    report = run_modal_suite(max_worlds=3)
    assert report.total_failures == 0


def test_non_theorem_shape_has_countermodel():
    # negative control: p -> box p is not valid, and some chain shows it
    box = lambda x: Not(Dle(Not(x)))
    f = Gimp(TOP, 1, Or(Not(p), box(p)))
    assert any(not sat_formula(ev, f) for ev in chain_family(godel(), 3))
    shapes = modal_shapes(p, q)
    ev = chain_model(ep=0b100, eq=0b001)
    assert all(sat_formula(ev, Gimp(TOP, 1, e)) for e in shapes.values())


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from(["lae", "laec", "laepc"]), st.sampled_from(fixture_scales()))
def test_random_models_validate(seed, variant, scale):
    import random
    ev = random_model(random.Random(seed), variant, scale)
    assert validate_evaluation(ev) == []
    assert ev.variant is Logic.of(variant)
