from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from approxent.decision import iter_sim_matrices
from approxent.errors import SpaceError
from approxent.fuzz import all_chains, chain_lemma_violations, fixture_scales, product_lemma_violations
from approxent.grades import godel, lukasiewicz
from approxent.spaces import (GE, LE, ChainSpace, ProductSpace, SimilaritySpace, bits, cylinder, diamond_chain,
                              diamond_product, mask_of, neighborhood, validate)
from oracles import raw_chain_diamond, raw_matrices, t_luk, t_min

HALF = Fraction(1, 2)


def chain3(scale=None, s12=HALF, s23=HALF, s13=HALF, check=True):
    scale = scale or godel()
    return ChainSpace.from_grades(scale, ["w1", "w2", "w3"],
                                  {("w1", "w2"): s12, ("w2", "w3"): s23, ("w1", "w3"): s13}, check=check)


def product22():
    s = godel()
    a = ChainSpace.from_grades(s, ["a1", "a2"], {("a1", "a2"): HALF})
    b = ChainSpace.from_grades(s, ["b1", "b2"], {("b1", "b2"): HALF})
    return ProductSpace([a, b], ["A", "B"])


def names(space, mask):
    return set(space.names(mask))


# -- neighbourhoods

def test_neighborhood_examples():
    sp = chain3()
    for c in sp.scale.levels:
        assert neighborhood(sp, c, 0) == 0
    for w in range(3):
        assert neighborhood(sp, 1, 1 << w) == 1 << w
    assert neighborhood(sp, 0, 0b010) == sp.full


@pytest.mark.parametrize("scale", fixture_scales(), ids=lambda s: s.name)
def test_neighborhood_laws(scale):
    for n in range(1, 5):
        for sim in iter_sim_matrices(scale, n):
            sp = SimilaritySpace(scale, [f"w{k}" for k in range(n)], sim)
            L = scale.levels
            for a in range(1 << n):
                for c in L:
                    ua = sp.neighborhood(c, a)
                    assert ua == mask_of(w for w in range(n) if any(sp.sim_grade(w, x) >= c for x in bits(a)))
                    for d in L:
                        if c <= d:
                            assert sp.neighborhood(d, a) & ~ua == 0
                        assert sp.neighborhood(c, sp.neighborhood(d, a)) & ~sp.neighborhood(scale.combine(c, d), a) == 0
                    for b in range(1 << n):
                        if a & ~b == 0:
                            assert ua & ~sp.neighborhood(c, b) == 0


# -- matrix enumeration against the raw oracle

@pytest.mark.parametrize("scale,tnorm", [(godel(), t_min), (lukasiewicz(2), t_luk)])
def test_matrix_enumeration_matches_raw(scale, tnorm):
    for n in range(1, 5):
        mine = {tuple(tuple(scale.levels[g] for g in row) for row in m) for m in iter_sim_matrices(scale, n)}
        raw = {tuple(tuple(row) for row in m) for m in raw_matrices(n, tnorm=tnorm)}
        assert mine == raw


def test_matrix_counts():
    # Lukasiewicz: 1/2 * 1/2 = 0, so every off-diagonal pattern over {0, 1/2} is transitive
    assert [sum(1 for _ in iter_sim_matrices(lukasiewicz(2), n)) for n in range(1, 5)] == [1, 2, 8, 64]
    # Goedel: the 1/2-level is an equivalence relation, so the count is the Bell number
    assert [sum(1 for _ in iter_sim_matrices(godel(), n)) for n in range(1, 5)] == [1, 2, 5, 15]


def test_chain_matrices_are_compatible_subset():
    for scale in fixture_scales():
        for n in range(1, 5):
            plain = set(iter_sim_matrices(scale, n))
            chained = set(iter_sim_matrices(scale, n, chain=True))
            assert chained <= plain
            for m in plain - chained:
                with pytest.raises(SpaceError):
                    ChainSpace(scale, [f"w{k}" for k in range(n)], m)


# -- diamonds

def test_chain_diamond_examples():
    sp = chain3()
    assert names(sp, diamond_chain(sp, LE, 0b010)) == {"w1", "w2"}
    assert diamond_chain(sp, GE, 0) == 0
    assert diamond_chain(sp, "le", 0b101) == sp.full


def test_chain_diamond_with_permuted_order():
    s = godel()
    sp = ChainSpace(s, ["x", "y", "z"], [[2, 0, 1], [0, 2, 0], [1, 0, 2]], order=[1, 2, 0])  # y < z < x
    for a in range(8):
        members = {sp.worlds[w] for w in bits(a)}
        assert names(sp, sp.diamond(LE, a)) == raw_chain_diamond("le", members, ["y", "z", "x"])
        assert names(sp, sp.diamond(GE, a)) == raw_chain_diamond("ge", members, ["y", "z", "x"])


def test_product_diamond_examples():
    sp = product22()
    a = mask_of([sp.index_of((0, 1)), sp.index_of((1, 0))])
    assert diamond_product(sp, LE, a) == sp.full
    bottom = 1 << sp.index_of((0, 0))
    assert diamond_product(sp, LE, bottom) == bottom
    assert diamond_product(sp, GE, sp.full) == sp.full
    assert diamond_product(sp, GE, 0) == 0


def _direct_product_diamond(sp, d, a):
    # w is in the diamond iff for each sort some member of a is above (or below) w in that coordinate
    out = 0
    for w in range(sp.n):
        ok = all(any((sp.le_i(i, w, v) if d == LE else sp.le_i(i, v, w)) for v in bits(a))
                 for i in range(len(sp.components)))
        if ok and a:
            out |= 1 << w
    return out


def test_product_diamond_matches_definition():
    s = godel()
    c1 = ChainSpace.from_grades(s, ["x1", "x2", "x3"], {("x1", "x2"): HALF, ("x2", "x3"): HALF, ("x1", "x3"): HALF})
    c2 = ChainSpace(s, ["y1", "y2"], [[2, 0], [0, 2]], order=[1, 0])
    sp = ProductSpace([c1, c2])
    for a in range(1 << sp.n):
        for d in (LE, GE):
            assert sp.diamond(d, a) == _direct_product_diamond(sp, d, a)


def test_cylinder_examples():
    sp = product22()
    assert names(sp, cylinder(sp, [0], [(0,)])) == {"(a1,b1)", "(a1,b2)"}
    assert cylinder(sp, [0], []) == 0
    assert cylinder(sp, [0, 1], [(1, 0)]) == 1 << sp.index_of((1, 0))
    with pytest.raises(ValueError):
        cylinder(sp, [], [()])


def test_product_similarity_is_min():
    sp = product22()
    for u, v in product(range(4), repeat=2):
        tu, tv = sp.coords[u], sp.coords[v]
        assert sp.sim_index(u, v) == min(sp.components[0].sim[tu[0]][tv[0]], sp.components[1].sim[tu[1]][tv[1]])
    assert validate(sp) == []


def test_product_cap():
    s = godel()
    big = ChainSpace(s, [f"w{k}" for k in range(20)], [[2 if i == j else 0 for j in range(20)] for i in range(20)])
    with pytest.raises(SpaceError):
        ProductSpace([big, big, big])


# -- validation

def test_validate_examples():
    bad = chain3(s13=0, check=False)
    laws = {v.law for v in validate(bad)}
    assert "transitivity" in laws
    witness = [v for v in validate(bad) if v.law == "transitivity"][0].witness
    assert set(witness) == {"w1", "w2", "w3"}
    assert validate(chain3(s13=HALF)) == []
    with pytest.raises(SpaceError):
        chain3(s13=0, check=False).check()


def test_strictness_reported():
    sp = SimilaritySpace(godel(), ["w1", "w2"], [[2, 2], [2, 2]], check=False)
    assert any(v.law == "strictness" and v.witness == ("w1", "w2") for v in validate(sp))


def test_all_violations_reported():
    sp = SimilaritySpace(godel(), ["w1", "w2", "w3"], [[1, 2, 0], [1, 2, 0], [0, 0, 2]], check=False)
    laws = {v.law for v in validate(sp)}
    assert {"reflexivity", "strictness", "symmetry"} <= laws


def test_compatibility_violation():
    # w1 and w3 closer than w1 and w2 on the chain
    s = godel()
    sp = ChainSpace(s, ["w1", "w2", "w3"], [[2, 0, 1], [0, 2, 0], [1, 0, 2]], check=False)
    assert any(v.law == "compatibility" for v in validate(sp))
    with pytest.raises(SpaceError):
        sp.check()


def test_goedel_chain_rigidity():
    s = godel()
    for sp in all_chains(s, 4):
        o = sp.order
        for a in range(sp.n):
            for b in range(a + 1, sp.n):
                adj = min(sp.sim[o[k]][o[k + 1]] for k in range(a, b))
                assert sp.sim[o[a]][o[b]] == adj


# -- lemma suites with negative controls

def test_chain_lemmas_hold():
    for scale in fixture_scales():
        for sp in all_chains(scale, 4):
            assert chain_lemma_violations(sp) == []


def test_chain_lemmas_detect_incompatible_space():
    s = godel()
    sp = ChainSpace(s, ["w1", "w2", "w3"], [[2, 0, 1], [0, 2, 0], [1, 0, 2]], check=False)
    found = chain_lemma_violations(sp)
    assert any(f.startswith("(v)") or f.startswith("interval") for f in found)


def test_product_lemmas_hold_small():
    for scale in fixture_scales():
        c = ChainSpace.from_grades(scale, ["x1", "x2"], {("x1", "x2"): HALF})
        d = ChainSpace.from_grades(scale, ["y1", "y2", "y3"], {("y1", "y2"): HALF})
        assert product_lemma_violations(ProductSpace([c, d])) == []


@given(st.lists(st.integers(0, 1), min_size=3, max_size=3), st.sampled_from(fixture_scales()))
def test_random_three_chains(adj, scale):
    # path construction always yields a valid chain
    t = scale.table
    s = [[scale.top] * 3 for _ in range(3)]
    s[0][1] = s[1][0] = adj[0]
    s[1][2] = s[2][1] = adj[1]
    s[0][2] = s[2][0] = t[adj[0]][adj[1]] if scale.name != "godel" else min(adj[0], adj[1])
    sp = ChainSpace(scale, ["a", "b", "c"], s, check=False)
    if validate(sp) == []:
        assert chain_lemma_violations(sp) == []
