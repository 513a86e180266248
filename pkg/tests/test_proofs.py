from fractions import Fraction
from pathlib import Path

import pytest

from approxent.formats import load_proof, load_theory, parse_proof
from approxent.fuzz import (CHAIN_AXIOMS, PLAIN_AXIOMS, PLAIN_SIG, PRODUCT_AXIOMS, PRODUCT_SIG, axiom_instances,
                            chain_family, classify_instances, fixture_scales, plain_pools, product_family,
                            product_pools, run_proof_survival)
from approxent.grades import godel, lukasiewicz
from approxent.proofs import AXIOM_ORDER, axioms_for, check_proof, matches_axiom, recognize_axiom
from approxent.semantics import sat_formula
from approxent.syntax import BOT, And, Dge, Dle, Gimp, Logic, OImp, ONot, OOr, Signature, parse

HALF = Fraction(1, 2)
CORPUS = Path(__import__("approxent").__path__[0]) / "data" / "corpus"


def test_recognize_examples():
    assert recognize_axiom(parse("!(T =>{1} _|_)"), "lae") == "A10"
    assert recognize_axiom(parse("(p =>{1/2} q) -> (p =>{0} q)"), "lae") == "A3"
    assert recognize_axiom(parse("(p =>{1/2} q) & (q =>{1/2} r) -> (p =>{1/2} r)"), "lae") == "A9"
    # on the Lukasiewicz scale the composed grade is 0
    luk = lukasiewicz(2)
    assert recognize_axiom(parse("(p =>{1/2} q) & (q =>{1/2} r) -> (p =>{0} r)"), "lae", scale=luk) == "A9"
    assert recognize_axiom(parse("(p =>{1/2} q) & (q =>{1/2} r) -> (p =>{1/2} r)"), "lae", scale=luk) is None
    assert recognize_axiom(parse("(p =>{0} q) -> (p =>{1/2} q)"), "lae") is None


def test_variant_axiom_lists():
    assert axioms_for("lae") == AXIOM_ORDER[:11]
    assert "A19" in axioms_for("laec") and "A20" not in axioms_for("laec")
    f = parse("p =>{1} dle p")
    assert recognize_axiom(f, "lae") is None
    assert recognize_axiom(f, "laec") in ("A1", "A12a")


def test_mec_side_conditions():
    f6 = parse("!(p & !q =>{1} _|_) & ((p & !q) =>{1/2} (!p & q)) -> ((!p & q) =>{1/2} (p & !q))")
    assert recognize_axiom(f6, "lae") == "A6"
    # literal order of a m.e.c. does not matter
    f6b = parse("!(!q & p =>{1} _|_) & ((p & !q) =>{1/2} (q & !p)) -> ((!p & q) =>{1/2} (p & !q))")
    assert matches_axiom(f6b, "A6", "lae")
    # p alone is not a m.e.c. over {p, q}
    f6c = parse("!(p =>{1} _|_) & (p =>{1/2} q) -> (q =>{1/2} p)")
    assert not matches_axiom(f6c, "A6", "lae", Signature.plain(["p", "q"]))


def _ps():
    return Signature((("s1", ("x1", "x2")), ("s2", ("y1",))), ("a",))


def test_laepc_restrictions():
    sig = _ps()
    same = parse("(dle x1 =>{1} dle x2) | (dle x2 =>{1} dle x1)")
    mixed = parse("(dle x1 =>{1} dle y1) | (dle y1 =>{1} dle x1)")
    assert matches_axiom(same, "A15", "laepc", sig)
    assert not matches_axiom(mixed, "A15", "laepc", sig)
    assert matches_axiom(mixed, "A15", "laec", Signature.plain(["x1", "x2", "y1"]))
    a18 = parse("((x1 & dle (x2 & y1)) =>{1} _|_) -> ((dge x1 & dle (x2 & y1)) =>{1} _|_)")
    assert matches_axiom(a18, "A18", "laepc", sig)
    a18bad = parse("((x1 & y1 & dle x2) =>{1} _|_) -> ((dge (x1 & y1) & dle x2) =>{1} _|_)")
    assert not matches_axiom(a18bad, "A18", "laepc", sig)
    a16 = parse("(dle (x1 & !x2) & dge (x1 & !x2)) =>{1} (x1 & !x2)")
    assert matches_axiom(a16, "A16", "laepc", sig)
    a16bad = parse("(dle (x1 & !x2 & y1) & dge (x1 & !x2 & y1)) =>{1} (x1 & !x2 & y1)")
    assert not matches_axiom(a16bad, "A16", "laepc", sig)
    a22 = parse("((x1 & x2 & !y1) =>{1} a) | ((x1 & x2 & !y1) =>{1} !a)")
    assert recognize_axiom(a22, "laepc", sig) == "A22"
    a22bad = parse("((x1 & x2) =>{1} a) | ((x1 & x2) =>{1} !a)")
    assert not matches_axiom(a22bad, "A22", "laepc", sig)


def test_a19_requires_diamond_conjunctions():
    ok = parse("!((dle p & dge p) & dle q =>{1} _|_) & (r =>{1/2} dle p & dge p) & (r =>{1/2} dle q)"
               " -> (r =>{1/2} ((dle p & dge p) & dle q))")
    assert matches_axiom(ok, "A19", "laec")
    bad = parse("!(p & q =>{1} _|_) & (r =>{1/2} p) & (r =>{1/2} q) -> (r =>{1/2} (p & q))")
    assert not matches_axiom(bad, "A19", "laec")


def test_a20_a21_shapes():
    sig = _ps()
    a20 = parse("!((x1 & y1) =>{1} _|_) -> ((x1 =>{1/2} x2) & (y1 =>{1/2} !y1) <-> ((x1 & y1) =>{1/2} (x2 & !y1)))")
    assert recognize_axiom(a20, "laepc", sig) == "A20"
    a21 = parse("((dge a & x1) & y1 =>{1} _|_) -> ((dge a & x1 =>{1} _|_) | (dge a & y1 =>{1} _|_))")
    assert recognize_axiom(a21, "laepc", sig) == "A21a"
    a21bad = parse("((dge a & x1) & x2 =>{1} _|_) -> ((dge a & x1 =>{1} _|_) | (dge a & x2 =>{1} _|_))")
    assert recognize_axiom(a21bad, "laepc", sig) is None


def test_a11_uses_graded_atoms():
    f = parse("(p =>{1} q) -> ((q =>{1/2} p) -> (p =>{1} q))")
    assert recognize_axiom(f, "lae") == "A11"
    assert recognize_axiom(parse("(p =>{1} q) -> (q =>{1} p)"), "lae") is None


@pytest.mark.parametrize("family,axioms,variant,sig,shape", [
    ("plain", PLAIN_AXIOMS, "lae", PLAIN_SIG, 3),
    ("chain", CHAIN_AXIOMS, "laec", PLAIN_SIG, 3),
    ("product", PRODUCT_AXIOMS, "laepc", PRODUCT_SIG, (2, 2)),
])
def test_generated_instances_match_their_schema(family, axioms, variant, sig, shape):
    for scale in fixture_scales():
        counts = classify_instances(family, scale, axioms, Logic.of(variant), sig, shape)
        for axiom, (total, ok) in counts.items():
            assert total > 0 and ok == total, (axiom, total, ok)


def test_recognition_is_deterministic_and_total_on_instances():
    scale = godel()
    pools = plain_pools(PLAIN_SIG, 3, True)
    for axiom in CHAIN_AXIOMS:
        for f in axiom_instances(axiom, pools, scale)[:200]:
            first = recognize_axiom(f, "laec", PLAIN_SIG, scale)
            assert first is not None and first == recognize_axiom(f, "laec", PLAIN_SIG, scale)
            assert AXIOM_ORDER.index(first) <= AXIOM_ORDER.index(axiom)


# -- negative controls: the side conditions matter semantically

def _unrestricted(kind, pools):
    d = Dle if kind == "le" else Dge
    S = pools.sets
    return [OOr(Gimp(d(a), 1, d(b)), Gimp(d(b), 1, d(a))) for a in S for b in S]


def test_unrestricted_a15_fails_on_products():
    scale = godel()
    pools = product_pools(PRODUCT_SIG, (2, 2))
    insts = _unrestricted("le", pools)
    assert any(not sat_formula(ev, f) for ev in product_family(scale, ((2, 2),)) for f in insts)


def test_unrestricted_a18_fails_on_products():
    scale = godel()
    pools = product_pools(PRODUCT_SIG, (2, 2))
    S = pools.sets
    insts = [OImp(Gimp(And(a, Dle(b)), 1, BOT), Gimp(And(Dge(a), Dle(b)), 1, BOT)) for a in S for b in S]
    assert any(not sat_formula(ev, f) for ev in product_family(scale, ((2, 2),)) for f in insts)


def test_a19_without_diamonds_fails_on_chains():
    scale = godel()
    pools = plain_pools(PLAIN_SIG, 3, True)
    S, c = pools.sets, HALF
    from approxent.syntax import oconj
    insts = [OImp(oconj([ONot(Gimp(And(r, s), 1, BOT)), Gimp(a, c, r), Gimp(a, c, s)]), Gimp(a, c, And(r, s)))
             for r in S for s in S for a in S]
    assert any(not sat_formula(ev, f) for ev in chain_family(scale, 3) for f in insts)


# -- proof scripts

def _load(stem):
    th = load_theory(CORPUS / f"{stem}.thy")
    return th, load_proof(CORPUS / f"{stem}.prf", th.scale)


def test_a9_script_accepted_and_mutant_rejected():
    th, script = _load("a9")
    res = check_proof(th.formulas, script, th.variant, th.sig, th.scale)
    assert res.accepted and res.conclusion == parse("p =>{1/2} r")
    th, script = _load("a9_mutant")
    res = check_proof(th.formulas, script, th.variant, th.sig, th.scale)
    assert not res.accepted and res.line == 3 and res.reason == "not an A9 instance"


def test_one_line_a10():
    script = parse_proof("1. !(T =>{1} _|_) ; axiom A10")
    assert check_proof([], script, "lae").accepted


@pytest.mark.parametrize("text,reason", [
    ("1. p =>{1} p ; hyp 2", "no theory member 2"),
    ("1. p =>{1} q ; hyp 1\n2. q =>{1} p ; mp 1 3", "not an earlier line"),
    ("1. p =>{1} q ; hyp 1\n1. p =>{1} q ; hyp 1", "line numbers must increase"),
    ("1. p =>{1} q ; hyp 1\n2. q =>{1} q ; mp 1 1", "modus ponens"),
    ("1. p =>{1} q ; axiom A10", "not an A10 instance"),
    ("1. p =>{1/3} q ; hyp 1", "ill-formed"),
])
def test_rejections(text, reason):
    res = check_proof([parse("p =>{1} q")], parse_proof(text), "lae")
    assert not res.accepted and reason in res.reason


def test_mp_in_either_order():
    text = "1. p =>{1} q ; hyp 1\n2. (p =>{1} q) -> (p =>{1/2} q) ; axiom A3\n3. p =>{1/2} q ; mp 2 1"
    assert check_proof([parse("p =>{1} q")], parse_proof(text), "lae").accepted


def test_corpus_accepted():
    stems = sorted(p.stem for p in CORPUS.glob("*.prf"))
    assert len(stems) >= 8
    for stem in stems:
        th, script = _load(stem)
        res = check_proof(th.formulas, script, th.variant, th.sig, th.scale)
        assert res.accepted == (stem != "a9_mutant"), (stem, res)


def test_corpus_survival_quick():
    th, script = _load("a9")
    report = run_proof_survival(th.formulas, script[-1].formula, th.sig, th.variant, max_worlds=3)
    assert report.total_checked > 0 and report.total_failures == 0
