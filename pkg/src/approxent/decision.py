"""Entailment by enumerating canonical-shape models.

Every separated model is isomorphic to one whose worlds are distinct m.e.c.s
(the conjunction of literals true at the world), so the candidates are:

* lae:   non-empty sets of m.e.c.s with every valid similarity matrix;
* laec:  sequences of distinct m.e.c.s (the chain order) with every
         similarity matrix that is transitive and compatible with the order;
* laepc: one such chain of one-sorted m.e.c.s per sort, their product, and
         every assignment of the unsorted variables (the sorted variables
         already split the product into single worlds, so any set is a union
         of cells).

Candidates are enumerated in a fixed order.  The first branch (world set,
chain sequence or tuple of per-sort sequences) is the unit of parallel work
and of the per-branch caps.
"""

from __future__ import annotations

import multiprocessing as mp
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, islice, permutations, product
from typing import Iterator, Sequence

from .errors import DegenerateModel, ResourceLimit, VariantError
from .grades import GradeScale
from .semantics import Evaluation, eval_basic, sat_formula, sat_gimp, sat_theory
from .spaces import ChainSpace, ProductSpace, SimilaritySpace, bits
from .syntax import Dle, Gimp, Logic, Outer, Signature, check_syntax, conj_literals, enumerate_mecs

__all__ = [
    "SearchBounds", "Entailed", "Countermodel", "Unknown", "decide_entailment",
    "iter_sim_matrices", "candidate_models", "ModelCatalogue",
    "canonical_space", "CanonicalResult",
]

EXHAUSTIVE_MAX_VARS = 3
EXHAUSTIVE_MAX_SORTS = 2


# ---------------------------------------------------------------- bounds and verdicts


@dataclass(frozen=True)
class SearchBounds:
    """Caps on the candidate enumeration.

    ``max_world_subsets`` caps the number of first-branch items and
    ``max_sim_assignments`` the number of candidates inside one item.  With
    ``exhaustive`` every cap is lifted and an ``Entailed`` verdict is final.
    """

    max_worlds: int | None = 8
    max_chain: int | None = 4
    max_levels: int | None = 4
    max_world_subsets: int | None = 4096
    max_sim_assignments: int | None = 4096
    exhaustive: bool = False

    def __post_init__(self):
        for name in ("max_worlds", "max_chain", "max_levels", "max_world_subsets", "max_sim_assignments"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise ValueError(f"{name} must be positive")
            if self.exhaustive and value is not None:
                raise ValueError("exhaustive bounds carry no caps")

    @classmethod
    def full(cls) -> "SearchBounds":
        return cls(None, None, None, None, None, True)

    @classmethod
    def parse(cls, text: str) -> "SearchBounds":
        """``exhaustive`` or comma-separated ``worlds=N``, ``chain=N``, ``levels=N``, ``subsets=N``, ``sims=N``."""
        text = text.strip()
        if text == "exhaustive":
            return cls.full()
        keys = {"worlds": "max_worlds", "chain": "max_chain", "levels": "max_levels",
                "subsets": "max_world_subsets", "sims": "max_sim_assignments"}
        kw = {}
        for part in filter(None, (p.strip() for p in text.split(","))):
            key, _, value = part.partition("=")
            if key not in keys or not value:
                raise ValueError(f"bad bounds item {part!r}")
            kw[keys[key]] = int(value)
        return cls(**kw)


@dataclass
class Entailed:
    checked: int = 0
    verdict = "ENTAILED"


@dataclass
class Countermodel:
    evaluation: Evaluation
    position: tuple = ()
    checked: int = 0
    verdict = "COUNTERMODEL"

    @property
    def space(self) -> SimilaritySpace:
        return self.evaluation.space


@dataclass
class Unknown:
    reason: str
    checked: int = 0
    verdict = "UNKNOWN"


# ---------------------------------------------------------------- similarity matrices

_MATRIX_CACHE: dict = {}


def iter_sim_matrices(scale: GradeScale, n: int, chain: bool = False) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All valid similarity matrices on ``n`` worlds (level indices).

    Entries of the upper triangle are chosen row-major in ascending level
    order; a partial matrix is abandoned as soon as a completed triangle
    breaks transitivity (and, with ``chain``, compatibility with the order
    ``0 < 1 < ... < n-1``).
    """
    key = (scale.levels, scale.table, n, chain)
    cached = _MATRIX_CACHE.get(key)
    if cached is not None:
        yield from cached
        return
    if n <= 5:
        found = list(_gen_matrices(scale, n, chain))
        _MATRIX_CACHE[key] = found
        yield from found
    else:
        yield from _gen_matrices(scale, n, chain)


def _gen_matrices(scale: GradeScale, n: int, chain: bool):
    top, t = scale.top, scale.table
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    s = [[top if i == j else -1 for j in range(n)] for i in range(n)]

    def fits(i, j):
        c = s[i][j]
        for k in range(n):
            if k == i or k == j:
                continue
            a, b = s[i][k], s[k][j]
            if a < 0 or b < 0:
                continue
            if c < t[a][b] or a < t[c][b] or b < t[a][c]:
                return False
            if chain:
                x, y, z = sorted((i, j, k))
                if min(s[x][y], s[y][z]) < s[x][z]:
                    return False
        return True

    def rec(p):
        if p == len(pairs):
            yield tuple(tuple(row) for row in s)
            return
        i, j = pairs[p]
        for g in range(top):
            s[i][j] = s[j][i] = g
            if fits(i, j):
                yield from rec(p + 1)
        s[i][j] = s[j][i] = -1

    yield from rec(0)


# ---------------------------------------------------------------- candidate plan


def _world_names(prefix: str, k: int) -> list[str]:
    return [f"{prefix}{i + 1}" for i in range(k)]


def _sort_prefix(name: str, i: int) -> str:
    return name if name.isidentifier() else f"s{i + 1}_"


class _Plan:
    """First-branch items and their expansion into evaluations."""

    def __init__(self, variant: Logic, sig: Signature, scale: GradeScale, bounds: SearchBounds):
        self.variant, self.sig, self.scale, self.bounds = variant, sig, scale, bounds
        if bounds.max_levels is not None and len(scale) > bounds.max_levels:
            raise ResourceLimit(f"scale has {len(scale)} levels, bound is {bounds.max_levels}")
        if bounds.exhaustive:
            sizes = [len(names) for _, names in sig.sorts] if variant is Logic.LAEPC else [len(sig.sorted_variables)]
            if variant is Logic.LAEPC and len(sig.sorts) > EXHAUSTIVE_MAX_SORTS:
                raise ResourceLimit(f"exhaustive search refuses more than {EXHAUSTIVE_MAX_SORTS} sorts")
            if any(k > EXHAUSTIVE_MAX_VARS for k in sizes):
                raise ResourceLimit(f"exhaustive search refuses more than {EXHAUSTIVE_MAX_VARS} variables per sort")
        self.truncated = False
        if variant is Logic.LAEPC:
            self.sort_lits = [[dict(conj_literals(m)) for m in enumerate_mecs(sig, variant, sort=i)]
                              for i in range(len(sig.sorts))]
        else:
            self.lits = [dict(conj_literals(m)) for m in enumerate_mecs(sig, variant)]
        self.items = self._items()

    # -- first branch
    def _cap(self, gen, cap):
        if cap is None:
            return list(gen)
        out = list(islice(gen, cap + 1))
        if len(out) > cap:
            self.truncated = True
            out = out[:cap]
        return out

    def _items(self):
        b = self.bounds
        if self.variant is Logic.LAE:
            m = len(self.lits)
            top = m if b.max_worlds is None else min(m, b.max_worlds)
            if top < m:
                self.truncated = True
            gen = (c for k in range(1, top + 1) for c in combinations(range(m), k))
            return self._cap(gen, b.max_world_subsets)
        if self.variant is Logic.LAEC:
            return self._cap(self._sequences(len(self.lits)), b.max_world_subsets)
        per_sort = [list(self._sequences(len(lits))) for lits in self.sort_lits]
        return self._cap(product(*per_sort), b.max_world_subsets)

    def _sequences(self, m):
        top = m if self.bounds.max_chain is None else min(m, self.bounds.max_chain)
        if top < m:
            self.truncated = True
        return (p for k in range(1, top + 1) for p in permutations(range(m), k))

    # -- expansion
    def expand(self, item) -> Iterator[Evaluation]:
        """Evaluations of one item, at most ``max_sim_assignments`` of them."""
        gen = self._expand(item)
        cap = self.bounds.max_sim_assignments
        if cap is None:
            yield from gen
            return
        for count, ev in enumerate(gen):
            if count == cap:
                self.truncated = True
                return
            yield ev

    def _expand(self, item):
        sig, scale, variant = self.sig, self.scale, self.variant
        if variant is Logic.LAEPC:
            yield from self._expand_product(item)
            return
        k = len(item)
        names = _world_names("w", k)
        assignment = {}
        for v in sig.sorted_variables:
            mask = 0
            for w, mi in enumerate(item):
                if self.lits[mi][v]:
                    mask |= 1 << w
            assignment[v] = mask
        chain = variant is Logic.LAEC
        for sim in iter_sim_matrices(scale, k, chain):
            if chain:
                space = ChainSpace(scale, names, sim, check=False)
            else:
                space = SimilaritySpace(scale, names, sim, check=False)
            yield Evaluation(space, sig, assignment, variant, check=False)

    def _expand_product(self, item):
        sig, scale = self.sig, self.scale
        seqs = item
        comp_names = [_world_names(_sort_prefix(name, i), len(seq))
                      for i, ((name, _), seq) in enumerate(zip(sig.sorts, seqs))]
        sims = [list(iter_sim_matrices(scale, len(seq), True)) for seq in seqs]
        for combo in product(*sims):
            comps = [ChainSpace(scale, comp_names[i], combo[i], check=False) for i in range(len(seqs))]
            space = ProductSpace(comps, [name for name, _ in sig.sorts], check=False)
            assignment = {}
            for i, ((_, names), seq) in enumerate(zip(sig.sorts, seqs)):
                lits = self.sort_lits[i]
                for v in names:
                    comp_mask = 0
                    for x, mi in enumerate(seq):
                        if lits[mi][v]:
                            comp_mask |= 1 << x
                    assignment[v] = space.cyl(i, comp_mask)
            if not sig.unsorted:
                yield Evaluation(space, sig, dict(assignment), Logic.LAEPC, check=False)
                continue
            for masks in product(range(space.full + 1), repeat=len(sig.unsorted)):
                full_assignment = dict(assignment)
                full_assignment.update(zip(sig.unsorted, masks))
                yield Evaluation(space, sig, full_assignment, Logic.LAEPC, check=False)


def candidate_models(variant, sig: Signature, scale: GradeScale, bounds: SearchBounds | None = None):
    """All candidate evaluations in enumeration order (for inspection and tests)."""
    plan = _Plan(Logic.of(variant), sig, scale, bounds or SearchBounds())
    for item in plan.items:
        yield from plan.expand(item)


# ---------------------------------------------------------------- search


def _search(plan: _Plan, items: Sequence, theory, query, start: int = 0, stop_flag=None, chunk: int = 0):
    """Scan ``items``; return ``(position, evaluation, checked)`` of the first countermodel."""
    checked = 0
    for offset, item in enumerate(items):
        if stop_flag is not None and stop_flag.value < chunk:
            return None, None, checked, True
        for j, ev in enumerate(plan.expand(item)):
            checked += 1
            cache: dict = {}
            if not sat_formula(ev, query, cache) and sat_theory(ev, theory, cache):
                return (start + offset, j), ev, checked, False
    return None, None, checked, False


_STOP = None


def _init_worker(flag):
    global _STOP
    _STOP = flag


def _worker(args):
    variant, sig, scale, bounds, theory, query, chunk, start, items = args
    plan = _Plan(variant, sig, scale, bounds)
    plan.truncated = False
    pos, ev, checked, skipped = _search(plan, items, theory, query, start, _STOP, chunk)
    if pos is not None:
        with _STOP.get_lock():
            if chunk < _STOP.value:
                _STOP.value = chunk
    payload = None if ev is None else (ev.space, ev.assignment)
    return chunk, pos, payload, checked, plan.truncated, skipped


def decide_entailment(variant, sig: Signature, scale: GradeScale, theory: Sequence[Outer], query: Outer,
                      bounds: SearchBounds | None = None, workers: int = 1,
                      catalogue: "ModelCatalogue | None" = None):
    """Entailed, Countermodel or Unknown for ``theory |= query``.

    The reported countermodel is the first one in enumeration order whatever
    the number of workers.  ``Entailed`` is only returned when no cap cut the
    enumeration short.
    """
    variant = Logic.of(variant)
    bounds = bounds or SearchBounds()
    theory = tuple(theory)
    sig.check_for(variant)
    for f in theory + (query,):
        if not isinstance(f, Outer):
            raise VariantError("theory members and the query must be outer formulas")
        check_syntax(f, sig, variant, scale)
    if catalogue is not None:
        return catalogue.decide(theory, query)
    try:
        plan = _Plan(variant, sig, scale, bounds)
    except ResourceLimit as exc:
        return Unknown(str(exc))

    items = plan.items
    if workers <= 1 or len(items) < 2:
        pos, ev, checked, _ = _search(plan, items, theory, query)
        if ev is not None:
            return _confirm(ev, theory, query, pos, checked)
        if plan.truncated:
            return Unknown("search bounds reached without a countermodel", checked)
        return Entailed(checked)

    nchunks = min(len(items), workers * 4)
    size = -(-len(items) // nchunks)
    tasks = []
    for c in range(0, len(items), size):
        tasks.append((variant, sig, scale, bounds, theory, query, len(tasks), c, items[c:c + size]))
    flag = mp.get_context("fork").Value("i", len(tasks) + 1)
    results = []
    with ProcessPoolExecutor(max_workers=workers, mp_context=mp.get_context("fork"),
                             initializer=_init_worker, initargs=(flag,)) as pool:
        results = list(pool.map(_worker, tasks))
    results.sort(key=lambda r: r[0])
    checked = sum(r[3] for r in results)
    truncated = plan.truncated
    for chunk, pos, payload, _, trunc, skipped in results:
        if payload is not None:
            space, assignment = payload
            ev = Evaluation(space, sig, assignment, variant, check=False)
            return _confirm(ev, theory, query, pos, checked)
        truncated = truncated or trunc
    if truncated:
        return Unknown("search bounds reached without a countermodel", checked)
    return Entailed(checked)


def _confirm(ev: Evaluation, theory, query, pos, checked) -> Countermodel:
    """Re-check a countermodel from scratch: validated structures, fresh caches."""
    ev.space.check()
    fresh = Evaluation(ev.space, ev.sig, ev.assignment, ev.variant, check=True)
    if not sat_theory(fresh, theory) or sat_formula(fresh, query):
        raise AssertionError("countermodel failed re-verification")
    return Countermodel(fresh, pos, checked)


# ---------------------------------------------------------------- catalogue


class ModelCatalogue:
    """All candidates of a small signature with cached truth vectors.

    Bit ``k`` of a truth vector says whether candidate ``k`` (enumeration
    order) satisfies the formula, so deciding many entailments over the same
    signature costs a few integer operations each.
    """

    def __init__(self, variant, sig: Signature, scale: GradeScale, bounds: SearchBounds | None = None,
                 limit: int = 200_000):
        self.variant = Logic.of(variant)
        self.sig, self.scale = sig, scale
        plan = _Plan(self.variant, sig, scale, bounds or SearchBounds())
        self.models: list[Evaluation] = []
        self.positions: list[tuple] = []
        for i, item in enumerate(plan.items):
            for j, ev in enumerate(plan.expand(item)):
                self.models.append(ev)
                self.positions.append((i, j))
                if len(self.models) > limit:
                    raise ResourceLimit(f"more than {limit} candidate models")
        self.truncated = plan.truncated
        self.full = (1 << len(self.models)) - 1
        self._vectors: dict[Outer, int] = {}

    def __len__(self):
        return len(self.models)

    def vector(self, f: Outer) -> int:
        from .syntax import OAnd, OIff, OImp, ONot, OOr
        out = self._vectors.get(f)
        if out is not None:
            return out
        if isinstance(f, Gimp):
            out = 0
            for k, ev in enumerate(self.models):
                if sat_gimp(ev, f):
                    out |= 1 << k
        elif isinstance(f, ONot):
            out = self.full ^ self.vector(f.arg)
        elif isinstance(f, OAnd):
            out = self.vector(f.left) & self.vector(f.right)
        elif isinstance(f, OOr):
            out = self.vector(f.left) | self.vector(f.right)
        elif isinstance(f, OImp):
            out = (self.full ^ self.vector(f.left)) | self.vector(f.right)
        elif isinstance(f, OIff):
            out = self.full ^ (self.vector(f.left) ^ self.vector(f.right))
        else:
            raise TypeError(f"not an outer formula: {f!r}")
        self._vectors[f] = out
        return out

    def decide(self, theory: Sequence[Outer], query: Outer):
        models = self.full
        for f in theory:
            models &= self.vector(f)
        bad = models & ~self.vector(query)
        if bad:
            k = (bad & -bad).bit_length() - 1
            return _confirm(self.models[k], theory, query, self.positions[k], k + 1)
        if self.truncated:
            return Unknown("search bounds reached without a countermodel", len(self.models))
        return Entailed(len(self.models))


# ---------------------------------------------------------------- canonical space


@dataclass
class CanonicalResult:
    """The canonical model of an evaluation and the world map into it."""

    evaluation: Evaluation
    mapping: list[int]
    isomorphic: bool
    mismatches: list[str] = field(default_factory=list)

    @property
    def space(self) -> SimilaritySpace:
        return self.evaluation.space


def _max_grade(ev: Evaluation, delta, eps) -> int:
    best = 0
    for ci, c in enumerate(ev.space.scale.levels):
        if sat_gimp(ev, Gimp(delta, c, eps)):
            best = ci
    return best


def _chain_from(ev: Evaluation, mecs, names: list[str]) -> tuple[ChainSpace, list[int]]:
    """Chain on the given realized m.e.c.s: sims by maximal grade, order by the down-diamond."""
    k = len(mecs)
    sim = [[_max_grade(ev, mecs[a], mecs[b]) for b in range(k)] for a in range(k)]
    below = [[sat_gimp(ev, Gimp(Dle(mecs[a]), 1, Dle(mecs[b]))) for b in range(k)] for a in range(k)]
    rank = [sum(1 for b in range(k) if below[b][a]) - 1 for a in range(k)]
    if sorted(rank) != list(range(k)):
        raise DegenerateModel("the down-diamond comparisons do not form a total order")
    order = sorted(range(k), key=lambda a: rank[a])
    return ChainSpace(ev.space.scale, names, sim, order), rank


def canonical_space(ev: Evaluation, variant=None) -> CanonicalResult:
    """Rebuild ``ev`` from satisfaction queries alone.

    Worlds become the m.e.c.s realized in ``ev``; the similarity of two of
    them is the largest grade of a satisfied graded implication between
    them; chain orders come from comparing down-diamonds.
    """
    variant = ev.variant if variant is None else Logic.of(variant)
    space, sig = ev.space, ev.sig
    if variant is Logic.LAEPC:
        return _canonical_product(ev)
    mecs = enumerate_mecs(sig, variant)
    realized, mapping = [], [None] * space.n
    for m in mecs:
        ext = eval_basic(ev, m)
        if not ext:
            continue
        if ext & (ext - 1):
            raise DegenerateModel(f"{len(list(bits(ext)))} worlds realize the m.e.c. {m}")
        w = ext.bit_length() - 1
        mapping[w] = len(realized)
        realized.append(m)
    if any(x is None for x in mapping):
        raise DegenerateModel("a world realizes no m.e.c.")
    names = [space.worlds[mapping.index(k)] for k in range(len(realized))]
    if variant is Logic.LAEC:
        if not space.ordered:
            raise VariantError("laec needs a chain space")
        new_space, _ = _chain_from(ev, realized, names)
    else:
        k = len(realized)
        sim = [[_max_grade(ev, realized[a], realized[b]) for b in range(k)] for a in range(k)]
        new_space = SimilaritySpace(space.scale, names, sim)
    assignment = {}
    for v in sig.variables:
        assignment[v] = 0
        for k, m in enumerate(realized):
            if dict(conj_literals(m))[v]:
                assignment[v] |= 1 << k
    new_ev = Evaluation(new_space, sig, assignment, variant)
    mismatches = _compare(ev, new_ev, mapping, variant)
    return CanonicalResult(new_ev, mapping, not mismatches, mismatches)


def _canonical_product(ev: Evaluation) -> CanonicalResult:
    space, sig = ev.space, ev.sig
    if not isinstance(space, ProductSpace):
        raise VariantError("laepc needs a product space")
    comps, coord_of = [], [[None] * len(sig.sorts) for _ in range(space.n)]
    for i, (name, _) in enumerate(sig.sorts):
        realized = []
        for m in enumerate_mecs(sig, Logic.LAEPC, sort=i):
            ext = eval_basic(ev, m)
            if not ext:
                continue
            for w in bits(ext):
                coord_of[w][i] = len(realized)
            realized.append(m)
        names = [space.components[i].worlds[next(bits(space.project(i, eval_basic(ev, m))))] for m in realized]
        chain, _ = _chain_from(ev, realized, names)
        comps.append((chain, realized))
    new_space = ProductSpace([c for c, _ in comps], space.sort_names)
    mapping = []
    for w in range(space.n):
        if any(x is None for x in coord_of[w]):
            raise DegenerateModel("a world realizes no m.e.c.")
        mapping.append(new_space.index_of(coord_of[w]))
    if sorted(mapping) != list(range(new_space.n)):
        raise DegenerateModel("worlds do not correspond one-to-one to realized m.e.c.s")
    assignment = {}
    for i, (_, names) in enumerate(sig.sorts):
        chain, realized = comps[i]
        for v in names:
            comp_mask = 0
            for x, m in enumerate(realized):
                if dict(conj_literals(m))[v]:
                    comp_mask |= 1 << x
            assignment[v] = new_space.cyl(i, comp_mask)
    for a in sig.unsorted:
        assignment[a] = 0
        for w in bits(ev.assignment[a]):
            assignment[a] |= 1 << mapping[w]
    new_ev = Evaluation(new_space, sig, assignment, Logic.LAEPC)
    mismatches = _compare(ev, new_ev, mapping, Logic.LAEPC)
    return CanonicalResult(new_ev, mapping, not mismatches, mismatches)


def _compare(old: Evaluation, new: Evaluation, mapping: list[int], variant: Logic) -> list[str]:
    """Differences between ``old`` and ``new`` under the world map ``mapping``."""
    out = []
    a, b = old.space, new.space
    if a.n != b.n or sorted(mapping) != list(range(b.n)):
        return [f"world counts differ: {a.n} vs {b.n}"]
    for u in range(a.n):
        for v in range(a.n):
            if a.sim_index(u, v) != b.sim_index(mapping[u], mapping[v]):
                out.append(f"similarity of {a.worlds[u]}, {a.worlds[v]}")
    if variant is Logic.LAEC:
        for u in range(a.n):
            for v in range(a.n):
                if a.le(u, v) != b.le(mapping[u], mapping[v]):
                    out.append(f"order of {a.worlds[u]}, {a.worlds[v]}")
    if variant is Logic.LAEPC:
        for i in range(len(a.components)):
            for u in range(a.n):
                for v in range(a.n):
                    if a.le_i(i, u, v) != b.le_i(i, mapping[u], mapping[v]):
                        out.append(f"preorder {i + 1} on {a.worlds[u]}, {a.worlds[v]}")
    for var in old.sig.variables:
        image = 0
        for w in bits(old.assignment[var]):
            image |= 1 << mapping[w]
        if image != new.assignment[var]:
            out.append(f"extension of {var}")
    return out
