"""Model families and soundness suites.

The fixture families enumerate every valid similarity structure up to a
size bound and label world ``k`` with the ``k``-th m.e.c.  Metavariables of
the axiom schemas range over disjunctions of m.e.c.s, which denote every
subset of worlds, so each family covers all instances up to the meaning of
the substituted expressions.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Callable, Iterable, Iterator, Sequence

from .decision import iter_sim_matrices
from .grades import GradeScale, godel, lukasiewicz
from .proofs import matches_axiom
from .semantics import Evaluation, sat_formula, sat_theory
from .spaces import GE, LE, ChainSpace, ProductSpace, SimilaritySpace, mask_of
from .syntax import (BOT, TOP, And, Basic, Dge, Dle, Gimp, Logic, Not, OAnd, OIff, OImp, ONot, OOr, Or, Outer,
                     Signature, Var, conj, conj_literals, cpl_implies, disj, enumerate_mecs, oconj)

__all__ = [
    "PLAIN_SIG", "PRODUCT_SIG", "fixture_scales",
    "plain_family", "chain_family", "product_family",
    "Pools", "axiom_instances", "run_axiom_suite", "SuiteReport",
    "chain_lemma_violations", "product_lemma_violations",
    "modal_shapes", "run_modal_suite", "run_distribution_suite",
    "random_model", "random_instances", "run_random_suite", "run_proof_survival",
    "PLAIN_AXIOMS", "CHAIN_AXIOMS", "PRODUCT_AXIOMS", "all_chains", "all_products", "classify_instances",
    "plain_pools", "product_pools", "proof_models", "describe_model",
]

PLAIN_SIG = Signature.plain(("p", "q"))
PRODUCT_SIG = Signature((("s1", ("p1", "p2")), ("s2", ("q1", "q2"))), ("a",))


def fixture_scales() -> list[GradeScale]:
    """The two fixture t-norms on ``{0, 1/2, 1}``."""
    return [godel(), lukasiewicz(2)]


# ---------------------------------------------------------------- families


def _labels(sig: Signature, variant: Logic, worlds: Sequence[int]):
    lits = [dict(conj_literals(m)) for m in enumerate_mecs(sig, variant)]
    return {v: mask_of(w for w, mi in enumerate(worlds) if lits[mi][v]) for v in sig.sorted_variables}


def plain_family(scale: GradeScale, max_worlds: int = 4, sig: Signature = PLAIN_SIG) -> Iterator[Evaluation]:
    """All plain spaces up to ``max_worlds`` worlds, world ``k`` labelled by m.e.c. ``k``."""
    for n in range(1, max_worlds + 1):
        assignment = _labels(sig, Logic.LAE, range(n))
        names = [f"w{k + 1}" for k in range(n)]
        for sim in iter_sim_matrices(scale, n):
            yield Evaluation(SimilaritySpace(scale, names, sim, check=False), sig, assignment, Logic.LAE, check=False)


def chain_family(scale: GradeScale, max_worlds: int = 4, sig: Signature = PLAIN_SIG) -> Iterator[Evaluation]:
    """All chains up to ``max_worlds`` worlds, ordered ``w1 < w2 < ...``."""
    for n in range(1, max_worlds + 1):
        assignment = _labels(sig, Logic.LAEC, range(n))
        names = [f"w{k + 1}" for k in range(n)]
        for sim in iter_sim_matrices(scale, n, chain=True):
            yield Evaluation(ChainSpace(scale, names, sim, check=False), sig, assignment, Logic.LAEC, check=False)


def _product_spaces(scale, shape, sig):
    letters = "xyzuv"
    comp_names = [[f"{letters[i]}{k + 1}" for k in range(n)] for i, n in enumerate(shape)]
    for sims in product(*(iter_sim_matrices(scale, n, chain=True) for n in shape)):
        comps = [ChainSpace(scale, comp_names[i], sims[i], check=False) for i in range(len(shape))]
        yield ProductSpace(comps, sig.sort_names, check=False)


def _product_assignment(space: ProductSpace, sig: Signature):
    out = {}
    for i, (_, names) in enumerate(sig.sorts):
        lits = [dict(conj_literals(m)) for m in enumerate_mecs(sig, Logic.LAEPC, sort=i)]
        for v in names:
            out[v] = space.cyl(i, mask_of(x for x in range(space.components[i].n) if lits[x][v]))
    return out


def product_family(scale: GradeScale, shapes: Sequence[tuple[int, ...]] = ((2, 2), (3, 2)),
                   sig: Signature = PRODUCT_SIG, unsorted: str = "empty") -> Iterator[Evaluation]:
    """All products of chains of the given shapes.

    ``unsorted="empty"`` gives the unsorted variables the empty extension;
    ``"all"`` enumerates every extension (the sorted variables separate
    all worlds, so every set is a union of cells).
    """
    for shape in shapes:
        for space in _product_spaces(scale, shape, sig):
            base = _product_assignment(space, sig)
            choices = [0] if unsorted == "empty" else range(space.full + 1)
            for masks in product(choices, repeat=len(sig.unsorted)):
                assignment = dict(base)
                assignment.update(zip(sig.unsorted, masks))
                yield Evaluation(space, sig, assignment, Logic.LAEPC, check=False)


# ---------------------------------------------------------------- metavariable pools


@dataclass
class Pools:
    """Expressions substituted for the metavariables on one model shape."""

    sets: list[Basic]                      # one expression per subset of worlds
    mecs: list[Basic]                      # all m.e.c.s of the signature
    shapes: list[Basic]                    # assorted small expressions
    intervals: list[Basic] = field(default_factory=list)   # conjunctions of diamonds
    sorted_sets: list[list[Basic]] = field(default_factory=list)  # per sort: every cylinder
    one_sorted_mecs: list[list[Basic]] = field(default_factory=list)
    singles: list[Basic] = field(default_factory=list)     # empty set, singletons, pairs, all


def _subset_exprs(atoms: Sequence[Basic]) -> list[Basic]:
    n = len(atoms)
    return [disj([atoms[k] for k in range(n) if mask >> k & 1]) for mask in range(1 << n)]


def _small_subsets(atoms: Sequence[Basic]) -> list[Basic]:
    n = len(atoms)
    out = [BOT] + list(atoms) + [Or(atoms[a], atoms[b]) for a, b in combinations(range(n), 2)]
    out.append(disj(list(atoms)))
    return out


_PLAIN_SHAPES = ["p", "q", "!p", "p & q", "p | q", "p & !q", "!(p | q)", "T", "_|_", "p | !p"]
_DIAMOND_SHAPES = ["dle p", "dge q", "dle (p & q)", "dge !p", "dle p & dge p", "dle dle q", "p & dle q",
                   "dge (p | q)", "!dle p", "dle _|_"]


def _parse_all(texts):
    from .syntax import parse_basic
    return [parse_basic(t) for t in texts]


def plain_pools(sig: Signature, n: int, ordered: bool) -> Pools:
    variant = Logic.LAEC if ordered else Logic.LAE
    mecs = enumerate_mecs(sig, variant)
    atoms = mecs[:n]
    shapes = _parse_all(_PLAIN_SHAPES + (_DIAMOND_SHAPES if ordered else []))
    pools = Pools(_subset_exprs(atoms), mecs, shapes, singles=_small_subsets(atoms))
    if ordered:
        iv = [Dle(BOT), Dle(TOP)]
        iv += [Dle(atoms[y]) for y in range(n)] + [Dge(atoms[x]) for x in range(n)]
        iv += [And(Dge(atoms[x]), Dle(atoms[y])) for x in range(n) for y in range(x, n)]
        pools.intervals = iv
    return pools


def product_pools(sig: Signature, shape: Sequence[int]) -> Pools:
    sort_mecs = [enumerate_mecs(sig, Logic.LAEPC, sort=i)[:n] for i, n in enumerate(shape)]
    coords = list(product(*(range(n) for n in shape)))
    atoms = [conj([sort_mecs[i][t[i]] for i in range(len(shape))]) for t in coords]
    all_mecs = enumerate_mecs(sig, Logic.LAEPC)
    shapes = _parse_all(["p1", "q1", "p1 & q2", "!p2 | q1", "dle p1", "dge q1", "dle (p1 & q1)", "a", "!a", "T",
                         "_|_"])
    pools = Pools(_subset_exprs(atoms), all_mecs, shapes, singles=_small_subsets(atoms))
    pools.sorted_sets = [_subset_exprs(ms) for ms in sort_mecs]
    pools.one_sorted_mecs = [enumerate_mecs(sig, Logic.LAEPC, sort=i) for i in range(len(shape))]
    iv = [Dle(BOT), Dle(TOP)]
    le = lambda s, t: all(x <= y for x, y in zip(s, t))
    iv += [Dle(atoms[k]) for k in range(len(atoms))] + [Dge(atoms[k]) for k in range(len(atoms))]
    iv += [And(Dge(atoms[s]), Dle(atoms[t])) for s in range(len(atoms)) for t in range(len(atoms))
           if le(coords[s], coords[t])]
    pools.intervals = iv
    return pools


# ---------------------------------------------------------------- axiom instances


def _gimp_atoms(pools: Pools, grades, limit: int):
    picks = pools.shapes[:6] + pools.sets[1:3] + pools.sets[-1:]
    out = [Gimp(a, c, b) for a in picks for b in picks for c in grades]
    return out[:limit]


_TAUTOLOGIES_1 = [
    lambda g: OImp(g, g),
    lambda g: OOr(g, ONot(g)),
    lambda g: OImp(ONot(ONot(g)), g),
]
_TAUTOLOGIES_2 = [
    lambda g, h: OImp(OAnd(g, h), g),
    lambda g, h: OImp(g, OOr(g, h)),
    lambda g, h: OImp(OImp(g, h), OImp(ONot(h), ONot(g))),
    lambda g, h: OImp(g, OImp(h, OAnd(g, h))),
    lambda g, h: OImp(OIff(g, h), OIff(h, g)),
]
_TAUTOLOGIES_3 = [
    lambda g, h, k: OImp(OAnd(OImp(g, h), OImp(h, k)), OImp(g, k)),
    lambda g, h, k: OIff(OAnd(g, OOr(h, k)), OOr(OAnd(g, h), OAnd(g, k))),
]


def axiom_instances(axiom: str, pools: Pools, scale: GradeScale) -> list[Outer]:
    """Instances of one schema over the pools (side conditions satisfied by construction)."""
    S, M, V = pools.sets, pools.mecs, scale.levels
    one = Fraction(1)
    out: list[Outer] = []
    if axiom == "A1":
        cands = pools.shapes + S
        out = [Gimp(a, one, b) for a in cands for b in cands if cpl_implies(a, b)]
    elif axiom == "A2":
        out = [OImp(Gimp(a, one, b), Gimp(And(a, Not(b)), one, BOT)) for a in S for b in S]
    elif axiom == "A3":
        out = [OImp(Gimp(a, c, b), Gimp(a, d, b)) for a in S for b in S for c in V for d in V if d <= c]
    elif axiom == "A4":
        out = [OImp(ONot(Gimp(b, one, BOT)), Gimp(a, 0, b)) for a in S for b in S]
    elif axiom == "A5":
        out = [OImp(Gimp(a, c, BOT), Gimp(a, one, BOT)) for a in S for c in V]
    elif axiom == "A6":
        out = [OImp(OAnd(ONot(Gimp(d, one, BOT)), Gimp(d, c, e)), Gimp(e, c, d)) for d in M for e in M for c in V]
    elif axiom == "A7":
        out = [OImp(OAnd(Gimp(a, c, x), Gimp(b, c, x)), Gimp(Or(a, b), c, x)) for a in S for b in S for x in S
               for c in V]
    elif axiom == "A8":
        out = [OImp(Gimp(e, c, Or(a, b)), OOr(Gimp(e, c, a), Gimp(e, c, b))) for e in M for a in S for b in S
               for c in V]
    elif axiom == "A9":
        out = [OImp(OAnd(Gimp(a, c, b), Gimp(b, d, x)), Gimp(a, scale.combine(c, d), x))
               for a in S for b in S for x in S for c in V for d in V]
    elif axiom == "A10":
        out = [ONot(Gimp(TOP, one, BOT))]
    elif axiom == "A11":
        atoms = _gimp_atoms(pools, V, 40)
        out = [t(g) for t in _TAUTOLOGIES_1 for g in atoms]
        out += [t(g, h) for t in _TAUTOLOGIES_2 for g in atoms[:20] for h in atoms[:20]]
        out += [t(g, h, k) for t in _TAUTOLOGIES_3 for g in atoms[:8] for h in atoms[:8] for k in atoms[:8]]
    elif axiom in ("A12a", "A12b"):
        d = Dle if axiom.endswith("a") else Dge
        out = [Gimp(a, one, d(a)) for a in S + pools.shapes]
    elif axiom in ("A13a", "A13b"):
        d = Dle if axiom.endswith("a") else Dge
        out = [Gimp(d(d(a)), one, d(a)) for a in S + pools.shapes]
    elif axiom in ("A14a", "A14b"):
        d = Dle if axiom.endswith("a") else Dge
        out = [Gimp(d(BOT), one, BOT)]
    elif axiom in ("A15a", "A15b"):
        d = Dle if axiom.endswith("a") else Dge
        pairs = _same_sort_pairs(pools)
        out = [OOr(Gimp(d(a), one, d(b)), Gimp(d(b), one, d(a))) for a, b in pairs]
    elif axiom == "A16":
        ms = [m for group in pools.one_sorted_mecs for m in group] if pools.one_sorted_mecs else M
        out = [Gimp(And(Dle(e), Dge(e)), one, e) for e in ms]
    elif axiom in ("A17a", "A17b"):
        d = Dle if axiom.endswith("a") else Dge
        out = [OImp(Gimp(a, c, b), Gimp(d(a), c, d(b))) for a in S for b in S for c in V]
    elif axiom in ("A18a", "A18b"):
        d, co = (Dle, Dge) if axiom.endswith("a") else (Dge, Dle)
        phis = [x for group in pools.sorted_sets for x in group] if pools.sorted_sets else S
        out = [OImp(Gimp(And(a, d(b)), one, BOT), Gimp(And(co(a), d(b)), one, BOT)) for a in phis for b in S]
    elif axiom == "A19":
        phis = pools.singles
        out = [OImp(oconj([ONot(Gimp(And(r, s), one, BOT)), Gimp(a, c, r), Gimp(a, c, s)]), Gimp(a, c, And(r, s)))
               for r in pools.intervals for s in pools.intervals for a in phis for c in V]
    elif axiom == "A20":
        for i, j in ((0, 1), (1, 0)):
            A, B = pools.sorted_sets[i], pools.sorted_sets[j]
            out += [OImp(ONot(Gimp(And(a, a2), one, BOT)),
                         OIff(OAnd(Gimp(a, c, b), Gimp(a2, c, b2)), Gimp(And(a, a2), c, And(b, b2))))
                    for a in A for b in A for a2 in B for b2 in B for c in V]
    elif axiom in ("A21a", "A21b"):
        d = Dge if axiom.endswith("a") else Dle
        for i, j in ((0, 1), (1, 0)):
            for a in S:
                for x in pools.sorted_sets[i]:
                    for y in pools.sorted_sets[j]:
                        ante = Gimp(And(And(d(a), x), y), one, BOT)
                        out.append(OImp(ante, OOr(Gimp(And(d(a), x), one, BOT), Gimp(And(d(a), y), one, BOT))))
    elif axiom == "A22":
        alphas = [Var(v) for v in ("a",)] + S + pools.shapes
        out = [OOr(Gimp(e, one, x), Gimp(e, one, Not(x))) for e in M for x in alphas]
    else:
        raise KeyError(axiom)
    return out


def _same_sort_pairs(pools: Pools):
    if pools.sorted_sets:
        return [(a, b) for group in pools.sorted_sets for a in group for b in group]
    return [(a, b) for a in pools.sets for b in pools.sets]


PLAIN_AXIOMS = ("A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9", "A10", "A11")
CHAIN_AXIOMS = ("A1", "A12a", "A12b", "A13a", "A13b", "A14a", "A14b", "A15a", "A15b", "A16",
                "A17a", "A17b", "A18a", "A18b", "A19")
PRODUCT_AXIOMS = ("A12a", "A12b", "A13a", "A13b", "A14a", "A14b", "A15a", "A15b", "A16", "A17a", "A17b",
                  "A18a", "A18b", "A19", "A20", "A21a", "A21b", "A22")


# ---------------------------------------------------------------- running suites


@dataclass
class SuiteReport:
    checked: dict[str, int] = field(default_factory=dict)
    failures: dict[str, list[str]] = field(default_factory=dict)
    models: int = 0

    @property
    def total_failures(self) -> int:
        return sum(len(v) for v in self.failures.values())

    @property
    def total_checked(self) -> int:
        return sum(self.checked.values())

    def add(self, key: str, ok: bool, describe: Callable[[], str]):
        self.checked[key] = self.checked.get(key, 0) + 1
        if not ok:
            bucket = self.failures.setdefault(key, [])
            if len(bucket) < 5:
                bucket.append(describe())
            else:
                bucket.append("...")

    def merge(self, other: "SuiteReport"):
        for k, v in other.checked.items():
            self.checked[k] = self.checked.get(k, 0) + v
        for k, v in other.failures.items():
            self.failures.setdefault(k, []).extend(v)
        self.models += other.models

    def lines(self) -> list[str]:
        out = []
        for k in sorted(self.checked, key=_axiom_key):
            out.append(f"{k}: {self.checked[k]} checked, {len(self.failures.get(k, []))} failed")
        return out


def _axiom_key(k: str):
    digits = "".join(ch for ch in k if ch.isdigit())
    return (int(digits) if digits else 0, k)


def describe_model(ev: Evaluation) -> str:
    from .formats import format_model
    return format_model(ev).replace("\n", "; ")


def _shape_key(ev: Evaluation):
    space = ev.space
    if isinstance(space, ProductSpace):
        return tuple(c.n for c in space.components)
    return space.n


def run_axiom_suite(family: str, scales: Iterable[GradeScale] | None = None,
                    axioms: Sequence[str] | None = None, max_worlds: int = 4,
                    shapes: Sequence[tuple[int, ...]] = ((2, 2), (3, 2)),
                    variant: Logic | None = None) -> SuiteReport:
    """Check every generated instance on every model of a fixture family.

    ``family`` is ``plain``, ``chain`` or ``product``.  ``variant`` selects
    the axiom side conditions used to build the pools (defaults follow the
    family).
    """
    report = SuiteReport()
    scales = list(scales) if scales is not None else fixture_scales()
    for scale in scales:
        if family == "plain":
            axioms_ = axioms or PLAIN_AXIOMS
            models = plain_family(scale, max_worlds)
        elif family == "chain":
            axioms_ = axioms or CHAIN_AXIOMS
            models = chain_family(scale, max_worlds)
        elif family == "product":
            axioms_ = axioms or PRODUCT_AXIOMS
            models = product_family(scale, shapes)
        else:
            raise ValueError(f"unknown family {family!r}")
        instances: dict = {}
        for ev in models:
            report.models += 1
            key = _shape_key(ev)
            if key not in instances:
                pools = product_pools(ev.sig, key) if family == "product" else plain_pools(ev.sig, key, family == "chain")
                instances[key] = {a: axiom_instances(a, pools, scale) for a in axioms_}
            cache: dict = {}
            for a, insts in instances[key].items():
                for f in insts:
                    report.add(a, sat_formula(ev, f, cache), lambda f=f, ev=ev: f"{f} fails in {describe_model(ev)}")
        if family == "product" and (axioms is None or "A22" in axioms):
            # the unsorted variable matters for A22 only: vary it over every extension
            for ev in product_family(scale, shapes, unsorted="all"):
                report.models += 1
                key = ("A22", _shape_key(ev))
                if key not in instances:
                    a_var = Var("a")
                    instances[key] = [OOr(Gimp(e, 1, x), Gimp(e, 1, Not(x)))
                                      for e in enumerate_mecs(ev.sig, Logic.LAEPC)
                                      for x in (a_var, Not(a_var), And(a_var, Var("p1")), Dle(a_var))]
                for f in instances[key]:
                    report.add("A22", sat_formula(ev, f), lambda f=f, ev=ev: f"{f} fails in {describe_model(ev)}")
    return report


def classify_instances(family: str, scale: GradeScale, axioms: Sequence[str], variant: Logic, sig: Signature,
                       shape) -> dict[str, tuple[int, int]]:
    """For each schema: (instances, instances its own recognizer accepts)."""
    pools = product_pools(sig, shape) if family == "product" else plain_pools(sig, shape, family == "chain")
    out = {}
    for a in axioms:
        insts = axiom_instances(a, pools, scale)
        ok = sum(1 for f in insts if matches_axiom(f, a, variant, sig, scale))
        out[a] = (len(insts), ok)
    return out


# ---------------------------------------------------------------- lemma suites (set level)


def _subsets(n: int):
    return range(1 << n)


def _interval_masks(space: ChainSpace):
    out = []
    for x in range(space.n):
        for y in range(x, space.n):
            out.append(space.up_rank(x) & space.down_rank(y))
    return out


def chain_lemma_violations(space: ChainSpace) -> list[str]:
    """Diamond and interval properties on a chain, checked on every set and grade."""
    out = []
    n, levels = space.n, range(len(space.scale))
    U = space.neighborhood_index
    for d in (LE, GE):
        D = lambda m: space.diamond(d, m)
        if D(0) != 0:
            out.append(f"(iii) {d}")
        for a in _subsets(n):
            da = D(a)
            if a & ~da:
                out.append(f"(i) {d} {a}")
            if D(da) != da:
                out.append(f"(ii) {d} {a}")
            for b in _subsets(n):
                db = D(b)
                if (da & ~db) and (db & ~da):
                    out.append(f"(iv) {d} {a} {b}")
                if not (a & ~b) and (da & ~db):
                    out.append(f"(v) monotone {d} {a} {b}")
                for c in levels:
                    if not (a & ~U(c, b)) and (da & ~U(c, db)):
                        out.append(f"(v) {d} {a} {b} {c}")
    for w in range(n):
        if space.diamond(LE, 1 << w) & space.diamond(GE, 1 << w) != 1 << w:
            out.append(f"(vi) {w}")
    for a in _subsets(n):
        for b in _subsets(n):
            if not a & space.diamond(LE, b) and space.diamond(GE, a) & space.diamond(LE, b):
                out.append(f"(vii) {a} {b}")
            if not a & space.diamond(GE, b) and space.diamond(LE, a) & space.diamond(GE, b):
                out.append(f"(vii) dual {a} {b}")
    ivs = _interval_masks(space)
    for a in ivs:
        for b in ivs:
            if a & b:
                for c in levels:
                    if U(c, a & b) != U(c, a) & U(c, b):
                        out.append(f"interval {a} {b} {c}")
    return out


def product_lemma_violations(space: ProductSpace) -> list[str]:
    """Diamond, factorization, disjointness and orthotope properties on a 2-sort product."""
    out = []
    n, levels = space.n, range(len(space.scale))
    U = space.neighborhood_index
    comps = space.components
    for d in (LE, GE):
        D = lambda m: space.diamond(d, m)
        if D(0) != 0:
            out.append(f"(iii) {d}")
        for a in _subsets(n):
            da = D(a)
            if a & ~da:
                out.append(f"(i) {d} {a}")
            if D(da) != da:
                out.append(f"(ii) {d} {a}")
            for b in _subsets(n):
                db = D(b)
                if not (a & ~b) and (da & ~db):
                    out.append(f"(iv) monotone {d} {a} {b}")
                for c in levels:
                    if not (a & ~U(c, b)) and (da & ~U(c, db)):
                        out.append(f"(iv) {d} {a} {b} {c}")
    if len(comps) == 2:
        n0, n1 = comps[0].n, comps[1].n
        rect = lambda x, y: space.cyl(0, x) & space.cyl(1, y)
        for c in levels:
            for A in range(1, 1 << n0):
                for C in range(1, 1 << n0):
                    left_i = not (space.cyl(0, A) & ~U(c, space.cyl(0, C)))
                    for B in range(1, 1 << n1):
                        for Dm in range(1, 1 << n1):
                            left = left_i and not (space.cyl(1, B) & ~U(c, space.cyl(1, Dm)))
                            right = not (rect(A, B) & ~U(c, rect(C, Dm)))
                            if left != right:
                                out.append(f"(v) {A} {B} {C} {Dm} {c}")
        for d in (LE, GE):
            for a in _subsets(n):
                da = space.diamond(d, a)
                for B in _subsets(n0):
                    for C in _subsets(n1):
                        pb, pc = space.cyl(0, B), space.cyl(1, C)
                        if (not da & pb & pc) != (not da & pb or not da & pc):
                            out.append(f"(vi) {d} {a} {B} {C}")
    for i, comp in enumerate(comps):
        for A in _subsets(comp.n):
            pa = space.cyl(i, A)
            for b in _subsets(n):
                if not pa & space.diamond(LE, b) and space.diamond(GE, pa) & space.diamond(LE, b):
                    out.append(f"(vii) {i} {A} {b}")
                if not pa & space.diamond(GE, b) and space.diamond(LE, pa) & space.diamond(GE, b):
                    out.append(f"(vii) dual {i} {A} {b}")
    orthos = [0]
    per = [[comp.up_rank(x) & comp.down_rank(y) for x in range(comp.n) for y in range(x, comp.n)] for comp in comps]
    for combo in product(*per):
        m = space.full
        for i, iv in enumerate(combo):
            m &= space.cyl(i, iv)
        orthos.append(m)
    for a in orthos:
        for b in orthos:
            if a & b:
                for c in levels:
                    if U(c, a & b) != U(c, a) & U(c, b):
                        out.append(f"orthotope {a} {b} {c}")
    return out


def all_chains(scale: GradeScale, max_worlds: int = 4) -> Iterator[ChainSpace]:
    for n in range(1, max_worlds + 1):
        names = [f"w{k + 1}" for k in range(n)]
        for sim in iter_sim_matrices(scale, n, chain=True):
            yield ChainSpace(scale, names, sim)


def all_products(scale: GradeScale, max_chain: int = 3, max_worlds: int = 6) -> Iterator[ProductSpace]:
    """Two-sort products of chains; the default covers 2x2, 2x3, 3x2 and smaller."""
    sig = Signature((("s1", ("x",)), ("s2", ("y",))))
    for n0 in range(1, max_chain + 1):
        for n1 in range(1, max_chain + 1):
            if n0 * n1 <= max_worlds:
                yield from _product_spaces(scale, (n0, n1), sig)


# ---------------------------------------------------------------- modal shapes and distribution laws


def modal_shapes(phi: Basic, psi: Basic, d=Dle) -> dict[str, Basic]:
    """K, T, 4 and H as basic expressions, with box = not-diamond-not."""
    box = lambda x: Not(d(Not(x)))
    imp = lambda x, y: Or(Not(x), y)
    return {
        "K": imp(box(imp(phi, psi)), imp(box(phi), box(psi))),
        "T": imp(box(phi), phi),
        "4": imp(box(phi), box(box(phi))),
        "H": Or(Not(d(And(phi, Not(d(psi))))), Not(d(And(psi, Not(d(phi)))))),
    }


def run_modal_suite(scales: Iterable[GradeScale] | None = None, max_worlds: int = 4) -> SuiteReport:
    """Validity (``T =>{1} shape``) of K, T, 4 and H for both diamonds on every chain."""
    report = SuiteReport()
    for scale in scales or fixture_scales():
        instances: dict = {}
        for ev in chain_family(scale, max_worlds):
            report.models += 1
            n = ev.space.n
            if n not in instances:
                S = plain_pools(ev.sig, n, True).sets
                instances[n] = [(name, d, Gimp(TOP, 1, shape)) for d in (Dle, Dge) for a in S for b in S
                                for name, shape in modal_shapes(a, b, d).items()]
            for name, d, f in instances[n]:
                key = f"{name} ({'dle' if d is Dle else 'dge'})"
                report.add(key, sat_formula(ev, f), lambda f=f, ev=ev: f"{f} fails in {describe_model(ev)}")
    return report


def run_distribution_suite(scales: Iterable[GradeScale] | None = None, max_worlds: int = 4) -> SuiteReport:
    """Diamonds distribute over disjunction in both directions, on every chain."""
    report = SuiteReport()
    for scale in scales or fixture_scales():
        for ev in chain_family(scale, max_worlds):
            report.models += 1
            S = plain_pools(ev.sig, ev.space.n, True).sets
            for d in (Dle, Dge):
                for a in S:
                    for b in S:
                        for f in (Gimp(d(Or(a, b)), 1, Or(d(a), d(b))), Gimp(Or(d(a), d(b)), 1, d(Or(a, b)))):
                            report.add("distribution", sat_formula(ev, f),
                                       lambda f=f, ev=ev: f"{f} fails in {describe_model(ev)}")
    return report


# ---------------------------------------------------------------- random models


RANDOM_PLAIN_SIG = Signature.plain(("p", "q", "r"))
RANDOM_PRODUCT_SIG = Signature((("s1", ("p1", "p2")), ("s2", ("q1", "q2"))), ("a",))


def _random_sim(rng: random.Random, scale: GradeScale, n: int, chain: bool):
    if n <= 5:
        options = list(iter_sim_matrices(scale, n, chain))
        return rng.choice(options)
    # larger spaces: close a random matrix under the grade product (plain) or
    # take products of adjacent similarities along the chain
    top, t = scale.top, scale.table
    if chain:
        adj = [rng.randrange(top) for _ in range(n - 1)]
        s = [[top] * n for _ in range(n)]
        for u in range(n):
            for w in range(u + 1, n):
                g = adj[u]
                for k in range(u + 1, w):
                    g = t[g][adj[k]]
                s[u][w] = s[w][u] = g
        return tuple(tuple(r) for r in s)
    s = [[top if u == w else rng.randrange(top) for w in range(n)] for u in range(n)]
    for u in range(n):
        for w in range(u):
            s[u][w] = s[w][u]
    changed = True
    while changed:
        changed = False
        for u in range(n):
            for w in range(n):
                for v in range(n):
                    g = t[s[u][v]][s[v][w]]
                    if g > s[u][w]:
                        s[u][w] = g
                        changed = True
    return tuple(tuple(r) for r in s)


def random_model(rng: random.Random, variant, scale: GradeScale, max_worlds: int = 6) -> Evaluation:
    """A validated random model; worlds get distinct random m.e.c.s."""
    variant = Logic.of(variant)
    if variant is Logic.LAEPC:
        sig = RANDOM_PRODUCT_SIG
        comps, labels = [], []
        for i, (name, names) in enumerate(sig.sorts):
            k = rng.randint(1, min(4, 2 ** len(names)))
            sim = _random_sim(rng, scale, k, True)
            perm = list(range(k))
            rng.shuffle(perm)
            sim = tuple(tuple(sim[perm[u]][perm[w]] for w in range(k)) for u in range(k))
            order = sorted(range(k), key=lambda u: perm[u])
            comps.append(ChainSpace(scale, [f"{name}_{x + 1}" for x in range(k)], sim, order))
            labels.append(rng.sample(range(2 ** len(names)), k))
        space = ProductSpace(comps, sig.sort_names)
        assignment = {}
        for i, (_, names) in enumerate(sig.sorts):
            lits = [dict(conj_literals(m)) for m in enumerate_mecs(sig, Logic.LAEPC, sort=i)]
            for v in names:
                assignment[v] = space.cyl(i, mask_of(x for x, mi in enumerate(labels[i]) if lits[mi][v]))
        for a in sig.unsorted:
            assignment[a] = rng.randrange(space.full + 1)
        return Evaluation(space, sig, assignment, Logic.LAEPC)
    sig = RANDOM_PLAIN_SIG
    n = rng.randint(1, min(max_worlds, 8))
    chain = variant is Logic.LAEC
    sim = _random_sim(rng, scale, n, chain)
    names = [f"w{k + 1}" for k in range(n)]
    labels = rng.sample(range(8), n)
    lits = [dict(conj_literals(m)) for m in enumerate_mecs(sig, variant)]
    assignment = {v: mask_of(w for w, mi in enumerate(labels) if lits[mi][v]) for v in sig.variables}
    if chain:
        perm = list(range(n))
        rng.shuffle(perm)
        # world perm[r] sits at chain position r
        psim = [[0] * n for _ in range(n)]
        for r in range(n):
            for s_ in range(n):
                psim[perm[r]][perm[s_]] = sim[r][s_]
        space = ChainSpace(scale, names, psim, perm)
    else:
        space = SimilaritySpace(scale, names, sim)
    return Evaluation(space, sig, assignment, variant)


def _random_basic(rng: random.Random, names: Sequence[str], depth: int, diamonds: bool) -> Basic:
    if depth <= 0 or rng.random() < 0.25:
        r = rng.random()
        if r < 0.08:
            return TOP
        if r < 0.16:
            return BOT
        return Var(rng.choice(names))
    ops = ["not", "and", "or"] + (["dle", "dge"] if diamonds else [])
    op = rng.choice(ops)
    if op == "not":
        return Not(_random_basic(rng, names, depth - 1, diamonds))
    if op == "dle":
        return Dle(_random_basic(rng, names, depth - 1, diamonds))
    if op == "dge":
        return Dge(_random_basic(rng, names, depth - 1, diamonds))
    a = _random_basic(rng, names, depth - 1, diamonds)
    b = _random_basic(rng, names, depth - 1, diamonds)
    return And(a, b) if op == "and" else Or(a, b)


def random_instances(rng: random.Random, ev: Evaluation, count: int) -> list[tuple[str, Outer]]:
    """Random instances of the variant's schemas, drawn with random expressions."""
    variant, sig, scale = ev.variant, ev.sig, ev.space.scale
    names = list(sig.variables)
    diamonds = variant is not Logic.LAE
    out = []
    mecs = enumerate_mecs(sig, variant)
    for _ in range(count):
        pools = Pools(sets=[_random_basic(rng, names, 3, diamonds) for _ in range(3)],
                      mecs=rng.sample(mecs, min(3, len(mecs))),
                      shapes=[_random_basic(rng, names, 2, diamonds) for _ in range(3)])
        if variant is Logic.LAE:
            choices = PLAIN_AXIOMS
        elif variant is Logic.LAEC:
            choices = PLAIN_AXIOMS + CHAIN_AXIOMS[1:]
        else:
            choices = ("A12a", "A13b", "A14a", "A17a", "A17b", "A20", "A21a", "A21b", "A22")
            pools.sorted_sets = [[_random_basic(rng, list(ns), 2, True) for _ in range(2)] for _, ns in sig.sorts]
        pools.intervals = [And(Dle(_random_basic(rng, names, 2, True)), Dge(_random_basic(rng, names, 2, True)))
                           for _ in range(2)] if diamonds else []
        pools.singles = pools.sets[:2]
        axiom = rng.choice(choices)
        insts = axiom_instances(axiom, pools, scale)
        if insts:
            out.append((axiom, rng.choice(insts)))
    return out


def run_random_suite(seed: int, models: int = 30, per_model: int = 40,
                     scales: Iterable[GradeScale] | None = None) -> SuiteReport:
    """Randomized larger models with random schema instances."""
    rng = random.Random(seed)
    report = SuiteReport()
    for scale in scales or fixture_scales():
        for variant in (Logic.LAE, Logic.LAEC, Logic.LAEPC):
            for _ in range(models):
                ev = random_model(rng, variant, scale)
                report.models += 1
                for axiom, f in random_instances(rng, ev, per_model):
                    report.add(f"{axiom} ({variant.value})", sat_formula(ev, f),
                               lambda f=f, ev=ev: f"{f} fails in {describe_model(ev)}")
    return report


# ---------------------------------------------------------------- proof survival


def proof_models(sig: Signature, variant, scale: GradeScale, max_worlds: int = 4) -> Iterator[Evaluation]:
    """Criterion-style fixture models for an arbitrary plain signature.

    Every valid similarity matrix on up to ``max_worlds`` worlds, combined
    with every injective labelling of the worlds by m.e.c.s.
    """
    variant = Logic.of(variant)
    chain = variant is Logic.LAEC
    mecs = enumerate_mecs(sig, variant)
    lits = [dict(conj_literals(m)) for m in mecs]
    for n in range(1, min(max_worlds, len(mecs)) + 1):
        names = [f"w{k + 1}" for k in range(n)]
        sims = list(iter_sim_matrices(scale, n, chain))
        for labels in permutations(range(len(mecs)), n):
            assignment = {v: mask_of(w for w, mi in enumerate(labels) if lits[mi][v]) for v in sig.variables}
            for sim in sims:
                space = ChainSpace(scale, names, sim, check=False) if chain else SimilaritySpace(scale, names, sim, check=False)
                yield Evaluation(space, sig, assignment, variant, check=False)


def run_proof_survival(theory: Sequence[Outer], conclusion: Outer, sig: Signature, variant,
                       scales: Iterable[GradeScale] | None = None, max_worlds: int = 4) -> SuiteReport:
    """Count models of the hypotheses that falsify an accepted conclusion."""
    report = SuiteReport()
    variant = Logic.of(variant)
    for scale in scales or fixture_scales():
        if variant is Logic.LAEPC:
            models = product_family(scale, unsorted="all", sig=sig) if sig == PRODUCT_SIG else iter(())
        else:
            models = proof_models(sig, variant, scale, max_worlds)
        for ev in models:
            report.models += 1
            cache: dict = {}
            if sat_theory(ev, theory, cache):
                report.add("conclusion", sat_formula(ev, conclusion, cache),
                           lambda ev=ev: f"{conclusion} fails in {describe_model(ev)}")
    return report
