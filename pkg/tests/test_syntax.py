from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from approxent.errors import ParseError, ResourceLimit, SortError, VariantError
from approxent.grades import godel
from approxent.syntax import (BOT, TOP, And, Dge, Dle, Gimp, Logic, Not, OAnd, OIff, OImp, ONot, OOr, Or,
                              Signature, Var, cpl_implies, cpl_tautology, enumerate_mecs, is_mec, parse,
                              parse_basic, parse_formula, sort_predicates, to_text)

HALF = Fraction(1, 2)
p, q, r, a = Var("p"), Var("q"), Var("r"), Var("a")


def test_precedence_of_graded_implication():
    f = parse("a =>{1/2} b & c")
    assert f == Gimp(Var("a"), HALF, And(Var("b"), Var("c")))
    assert to_text(f) == "a =>{1/2} (b & c)"


def test_outer_negation_of_bottom_implication():
    assert parse("!(b =>{1} _|_)") == ONot(Gimp(Var("b"), Fraction(1), BOT))


def test_diamond_conjunction():
    assert parse("dge p1 & dle p2") == And(Dge(Var("p1")), Dle(Var("p2")))


def test_unicode_and_ascii_agree():
    assert parse("¬(p ⇒{1} ⊥) ∧ (⊤ ⇒{0} q) → (p ⇒{1/2} q)") == parse("!(p =>{1} _|_) & (T =>{0} q) -> (p =>{1/2} q)")


def test_outer_precedence():
    f = parse("(p =>{1} q) | (q =>{1} p) & (p =>{0} q) -> (q =>{0} p) -> (p =>{1} p)")
    assert isinstance(f, OImp)
    assert isinstance(f.left, OOr) and isinstance(f.left.right, OAnd)
    assert isinstance(f.right, OImp)  # right associative
    g = parse("(p =>{1} q) <-> (q =>{1} p) -> (p =>{1} p)")
    assert isinstance(g, OIff) and isinstance(g.right, OImp)


def test_basic_precedence():
    assert parse_basic("!p & q | r") == Or(And(Not(p), q), r)
    assert parse_basic("dle p & q") == And(Dle(p), q)


def test_parse_error_has_position_and_expected():
    with pytest.raises(ParseError) as exc:
        parse_formula("p =>{1/2} (q &")
    assert exc.value.line == 1 and exc.value.column >= 14
    assert exc.value.expected
    with pytest.raises(ParseError):
        parse_formula("p =>{1/2}")
    with pytest.raises(ParseError):
        parse_formula("(p =>{1} q) =>{1} r")


def test_graded_implications_do_not_nest():
    with pytest.raises(ParseError):
        parse("p =>{1} (q =>{1} r)")


def test_undeclared_variable_is_sort_error():
    sig = Signature.plain(["p"])
    with pytest.raises(SortError):
        parse_formula("p =>{1} q", sig, godel(), Logic.LAE)


def test_diamond_in_plain_logic():
    sig = Signature.plain(["p"])
    with pytest.raises(VariantError):
        parse_formula("dle p =>{1} p", sig, godel(), Logic.LAE)
    parse_formula("dle p =>{1} p", sig, godel(), Logic.LAEC)


def test_foreign_grade_rejected():
    with pytest.raises(ParseError):
        parse_formula("p =>{1/3} p", None, godel())


def test_signature_checks():
    with pytest.raises(SortError):
        Signature((("s", ("p",)), ("t", ("p",))))
    with pytest.raises(SortError):
        Signature((("s", ()),))
    with pytest.raises(VariantError):
        Signature(((("", ("p",))),), ("a",)).check_for(Logic.LAE)


# -- m.e.c.s

def test_is_mec_examples():
    sig = Signature.plain(["p", "q"])
    assert is_mec(And(p, Not(q)), sig) == (("p", True), ("q", False))
    assert is_mec(And(Not(q), p), sig) == (("p", True), ("q", False))
    assert is_mec(p, sig) is None
    assert is_mec(And(p, p), sig) is None
    lsig = Signature((("s1", ("p",)),), ("a",))
    assert is_mec(And(p, a), lsig, Logic.LAEPC) is None
    assert is_mec(p, lsig, Logic.LAEPC) == (("p", True),)


def test_enumerate_mecs():
    sig = Signature.plain(["p", "q"])
    assert [to_text(m) for m in enumerate_mecs(sig)] == ["p & q", "p & !q", "!p & q", "!p & !q"]
    two = Signature((("s1", ("p",)), ("s2", ("q", "r"))))
    assert len(enumerate_mecs(two, Logic.LAEPC, sort=0)) == 2
    assert len(enumerate_mecs(two, Logic.LAEPC, sort="s2")) == 4
    big = Signature.plain([f"v{k}" for k in range(20)])
    with pytest.raises(ResourceLimit):
        enumerate_mecs(big)


def _exprs(depth, atoms):
    if depth == 0:
        return list(atoms)
    smaller = _exprs(depth - 1, atoms)
    out = list(smaller)
    out += [Not(x) for x in smaller]
    small = _exprs(depth - 2, atoms) if depth >= 2 else list(atoms)
    out += [And(x, y) for x in small for y in small]
    out += [Or(x, y) for x in atoms for y in atoms]
    return list(dict.fromkeys(out))


def _brute_mec(e, required):
    # exactly one literal per required variable, joined by conjunctions only
    lits = []

    def walk(n):
        if isinstance(n, And):
            return walk(n.left) and walk(n.right)
        if isinstance(n, Var):
            lits.append(n.name)
            return True
        if isinstance(n, Not) and isinstance(n.arg, Var):
            lits.append(n.arg.name)
            return True
        return False

    return walk(e) and sorted(lits) == sorted(required)


def test_is_mec_agrees_with_brute_force():
    sig = Signature.plain(["p", "q"])
    exprs = _exprs(4, [p, q, TOP, BOT])
    assert len(exprs) > 500
    for e in exprs:
        assert (is_mec(e, sig) is not None) == _brute_mec(e, ["p", "q"]), to_text(e)


def test_sort_predicates():
    sig = Signature((("s1", ("p",)), ("s2", ("q",))), ("a",))
    info = sort_predicates(p, q, sig)
    assert info.disjoint_sorted and info.one_sorted and not info.same_sort
    info = sort_predicates(TOP, p, sig)
    assert info.one_sorted and info.same_sort
    info = sort_predicates(And(p, a), q, sig)
    assert not info.disjoint_sorted and not info.one_sorted
    assert not sort_predicates(And(p, q), p, sig).one_sorted


# -- tautologies

def test_cpl_examples():
    assert cpl_tautology(Or(p, Not(p)))
    assert not cpl_tautology(And(p, Not(p)))
    imp = lambda x, y: Or(Not(x), y)
    assert cpl_tautology(imp(imp(p, q), imp(Not(q), Not(p))))
    g = Gimp(p, HALF, q)
    assert cpl_tautology(OOr(g, ONot(g)))
    assert not cpl_tautology(g)
    assert cpl_implies(And(Dle(p), q), Dle(p))
    assert not cpl_implies(Dle(p), p)


def test_cpl_cap():
    f = Or(Not(Var("v0")), Var("v0"))
    for k in range(1, 22):
        f = Or(f, Var(f"v{k}"))
    with pytest.raises(ResourceLimit):
        cpl_tautology(f)


def _eval(e, row):
    # independent recursive evaluator over a dict row
    if e is TOP or e == TOP:
        return True
    if e == BOT:
        return False
    if isinstance(e, Var):
        return row[e.name]
    if isinstance(e, Not):
        return not _eval(e.arg, row)
    if isinstance(e, And):
        return _eval(e.left, row) and _eval(e.right, row)
    if isinstance(e, Or):
        return _eval(e.left, row) or _eval(e.right, row)
    raise TypeError(e)


names = st.sampled_from(["p", "q", "r"])
basic = st.recursive(
    st.one_of(names.map(Var), st.just(TOP), st.just(BOT)),
    lambda kids: st.one_of(kids.map(Not), st.tuples(kids, kids).map(lambda t: And(*t)),
                           st.tuples(kids, kids).map(lambda t: Or(*t)),
                           kids.map(Dle), kids.map(Dge)),
    max_leaves=8,
)
plain_basic = st.recursive(
    st.one_of(names.map(Var), st.just(TOP), st.just(BOT)),
    lambda kids: st.one_of(kids.map(Not), st.tuples(kids, kids).map(lambda t: And(*t)),
                           st.tuples(kids, kids).map(lambda t: Or(*t))),
    max_leaves=10,
)
grades = st.sampled_from([Fraction(0), HALF, Fraction(1)])
gimps = st.builds(Gimp, basic, grades, basic)
outer = st.recursive(
    gimps,
    lambda kids: st.one_of(kids.map(ONot), *(st.tuples(kids, kids).map(lambda t, c=c: c(*t))
                                             for c in (OAnd, OOr, OImp, OIff))),
    max_leaves=6,
)


@given(basic)
def test_basic_round_trip(e):
    assert parse_basic(to_text(e)) == e


@settings(max_examples=300)
@given(outer)
def test_outer_round_trip(f):
    assert parse(to_text(f)) == f


@given(plain_basic)
def test_tautology_matches_row_evaluation(e):
    rows = [dict(zip("pqr", bits)) for bits in product((False, True), repeat=3)]
    assert cpl_tautology(e) == all(_eval(e, row) for row in rows)
