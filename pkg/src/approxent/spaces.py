"""Similarity spaces, chains and products of chains.

World sets are Python ints used as bitmasks over the world enumeration:
bit ``k`` set means world ``k`` is in the set.  Similarities are stored as
level indices into the scale, so every comparison is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Sequence

from .errors import SpaceError
from .grades import GradeScale, format_grade

__all__ = [
    "SimilaritySpace", "ChainSpace", "ProductSpace", "Violation",
    "neighborhood", "diamond_chain", "diamond_product", "cylinder", "validate",
    "bits", "popcount", "mask_of", "LE", "GE", "PRODUCT_CAP",
]

PRODUCT_CAP = 4096
LE = "le"
GE = "ge"


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def mask_of(indices: Iterable[int]) -> int:
    out = 0
    for k in indices:
        out |= 1 << k
    return out


def _check_dir(direction: str) -> str:
    d = {"le": LE, "<=": LE, "≤": LE, "dle": LE, "ge": GE, ">=": GE, "≥": GE, "dge": GE}.get(direction)
    if d is None:
        raise ValueError(f"direction must be 'le' or 'ge', not {direction!r}")
    return d


@dataclass(frozen=True)
class Violation:
    law: str
    witness: tuple
    detail: str = ""

    def __str__(self):
        return f"{self.law} at {self.witness}" + (f": {self.detail}" if self.detail else "")


class SimilaritySpace:
    """Finite worlds with a graded similarity matrix (level indices)."""

    ordered = False

    def __init__(self, scale: GradeScale, worlds: Sequence[str], sim: Sequence[Sequence[int]], check: bool = True):
        self.scale = scale
        self.worlds = tuple(str(w) for w in worlds)
        self.n = len(self.worlds)
        self.full = (1 << self.n) - 1
        self.sim = tuple(tuple(int(x) for x in row) for row in sim)
        self._nb: dict[int, tuple[int, ...]] = {}
        self._cache: dict[tuple[int, int], int] = {}
        if check:
            self.check()

    @classmethod
    def from_grades(cls, scale: GradeScale, worlds, pairs: dict, check: bool = True, **kw):
        """Build from ``{(u, v): grade}`` with world names; unspecified pairs are 0."""
        worlds = tuple(worlds)
        pos = {w: i for i, w in enumerate(worlds)}
        n = len(worlds)
        sim = [[scale.top if i == j else 0 for j in range(n)] for i in range(n)]
        for (u, v), g in pairs.items():
            i, j = pos[u], pos[v]
            if i == j:
                continue
            sim[i][j] = sim[j][i] = scale.index(g)
        return cls(scale, worlds, sim, check=check, **kw)

    # -- access
    def sim_index(self, u: int, v: int) -> int:
        return self.sim[u][v]

    def sim_grade(self, u: int, v: int):
        return self.scale.levels[self.sim_index(u, v)]

    def world_index(self, name: str) -> int:
        try:
            return self.worlds.index(name)
        except ValueError:
            raise SpaceError([Violation("unknown world", (name,))]) from None

    def names(self, mask: int) -> list[str]:
        return [self.worlds[k] for k in bits(mask)]

    # -- neighborhoods
    def _singles(self, ci: int) -> tuple[int, ...]:
        nb = self._nb.get(ci)
        if nb is None:
            nb = tuple(self._single(ci, w) for w in range(self.n))
            self._nb[ci] = nb
        return nb

    def _single(self, ci: int, w: int) -> int:
        row = self.sim[w]
        return mask_of(x for x in range(self.n) if row[x] >= ci)

    def neighborhood_index(self, ci: int, mask: int) -> int:
        key = (ci, mask)
        out = self._cache.get(key)
        if out is None:
            nb = self._singles(ci)
            out = 0
            for w in bits(mask):
                out |= nb[w]
            if len(self._cache) < 1 << 16:
                self._cache[key] = out
        return out

    def neighborhood(self, c, mask: int) -> int:
        """``U_c(mask)``: worlds at similarity at least ``c`` to some member."""
        return self.neighborhood_index(self.scale.index(c), mask)

    # -- validation
    def violations(self) -> list[Violation]:
        out: list[Violation] = []
        n, top, scale = self.n, self.scale.top, self.scale
        if n == 0:
            out.append(Violation("non-empty", (), "a space needs at least one world"))
        if len(set(self.worlds)) != n:
            out.append(Violation("distinct names", tuple(self.worlds)))
        if len(self.sim) != n or any(len(row) != n for row in self.sim):
            out.append(Violation("dimension", (n,), "similarity matrix must be square over the worlds"))
            return out
        for u, v in product(range(n), repeat=2):
            g = self.sim[u][v]
            if not 0 <= g <= top:
                out.append(Violation("grade", (self.worlds[u], self.worlds[v]), f"index {g} is not a level"))
        if out:
            return out
        for u in range(n):
            if self.sim[u][u] != top:
                out.append(Violation("reflexivity", (self.worlds[u],), "S(w,w) must be 1"))
        for u in range(n):
            for v in range(u + 1, n):
                if self.sim[u][v] == top:
                    out.append(Violation("strictness", (self.worlds[u], self.worlds[v]), "S = 1 on distinct worlds"))
                if self.sim[u][v] != self.sim[v][u]:
                    out.append(Violation("symmetry", (self.worlds[u], self.worlds[v])))
        for u, v, w in product(range(n), repeat=3):
            need = scale.table[self.sim[u][v]][self.sim[v][w]]
            if self.sim[u][w] < need:
                out.append(Violation(
                    "transitivity", (self.worlds[u], self.worlds[v], self.worlds[w]),
                    f"S(u,w) = {format_grade(self.sim_grade(u, w))} < "
                    f"{format_grade(self.sim_grade(u, v))} ⊙ {format_grade(self.sim_grade(v, w))}"))
        return out

    def check(self) -> "SimilaritySpace":
        bad = self.violations()
        if bad:
            raise SpaceError(bad)
        return self

    def __repr__(self):
        return f"{type(self).__name__}({list(self.worlds)})"


class ChainSpace(SimilaritySpace):
    """A similarity space with a total order compatible with the similarity.

    ``order`` lists world indices from the smallest to the largest.
    """

    ordered = True

    def __init__(self, scale, worlds, sim, order: Sequence[int] | None = None, check: bool = True):
        n = len(worlds)
        self.order = tuple(range(n)) if order is None else tuple(int(k) for k in order)
        self.rank = [0] * n
        if sorted(self.order) == list(range(n)):
            for r, w in enumerate(self.order):
                self.rank[w] = r
        super().__init__(scale, worlds, sim, check=False)
        self._down: list[int] = []
        self._up: list[int] = []
        if sorted(self.order) == list(range(n)):
            acc = 0
            for w in self.order:
                acc |= 1 << w
                self._down.append(acc)
            acc = 0
            for w in reversed(self.order):
                acc |= 1 << w
                self._up.append(acc)
            self._up.reverse()
        if check:
            self.check()

    def le(self, u: int, v: int) -> bool:
        return self.rank[u] <= self.rank[v]

    def down_rank(self, r: int) -> int:
        """Worlds of rank at most ``r``."""
        return self._down[r]

    def up_rank(self, r: int) -> int:
        """Worlds of rank at least ``r``."""
        return self._up[r]

    def diamond(self, direction: str, mask: int) -> int:
        """``(-inf, max A]`` for ``le`` and ``[min A, inf)`` for ``ge``; empty stays empty."""
        if not mask:
            return 0
        ranks = [self.rank[w] for w in bits(mask)]
        if _check_dir(direction) is LE:
            return self._down[max(ranks)]
        return self._up[min(ranks)]

    def violations(self) -> list[Violation]:
        out = super().violations()
        n = self.n
        if sorted(self.order) != list(range(n)):
            out.append(Violation("order", tuple(self.order), "order must list every world exactly once"))
            return out
        if any(v.law in ("dimension", "grade") for v in out):
            return out
        o = self.order
        for a in range(n):
            for b in range(a, n):
                for c in range(b, n):
                    u, v, w = o[a], o[b], o[c]
                    if min(self.sim[u][v], self.sim[v][w]) < self.sim[u][w]:
                        out.append(Violation(
                            "compatibility", (self.worlds[u], self.worlds[v], self.worlds[w]),
                            "similarity grows when moving away along the chain"))
        return out


class ProductSpace(SimilaritySpace):
    """Product of chains, one per sort, with the minimum of component similarities.

    Worlds are all tuples of component worlds in lexicographic order (first
    component most significant); world ``k`` has coordinates ``coords[k]``.
    """

    ordered = True

    def __init__(self, components: Sequence[ChainSpace], sort_names: Sequence[str] | None = None, check: bool = True):
        comps = tuple(components)
        if not comps:
            raise SpaceError([Violation("components", (), "a product needs at least one component")])
        scale = comps[0].scale
        total = 1
        for c in comps:
            total *= c.n
        if total > PRODUCT_CAP:
            raise SpaceError([Violation("size", (total,), f"more than {PRODUCT_CAP} product worlds")])
        self.components = comps
        self.sort_names = tuple(sort_names) if sort_names is not None else tuple(f"s{i + 1}" for i in range(len(comps)))
        self.coords = tuple(product(*(range(c.n) for c in comps)))
        names = ["(" + ",".join(c.worlds[x] for c, x in zip(comps, t)) + ")" for t in self.coords]
        self.scale = scale
        self.worlds = tuple(names)
        self.n = total
        self.full = (1 << total) - 1
        self._nb = {}
        self._cache = {}
        self._pos = {t: k for k, t in enumerate(self.coords)}
        self._coord_masks = [
            [mask_of(k for k, t in enumerate(self.coords) if t[i] == x) for x in range(c.n)]
            for i, c in enumerate(comps)
        ]
        self._cyl_cache: dict[tuple[int, int], int] = {}
        if check:
            self.check()

    # the matrix is never materialized
    @property
    def sim(self):
        return _LazyMatrix(self)

    def sim_index(self, u: int, v: int) -> int:
        tu, tv = self.coords[u], self.coords[v]
        return min(c.sim[a][b] for c, a, b in zip(self.components, tu, tv))

    def index_of(self, coords: Sequence[int]) -> int:
        return self._pos[tuple(coords)]

    def _single(self, ci: int, w: int) -> int:
        out = self.full
        for i, (c, x) in enumerate(zip(self.components, self.coords[w])):
            out &= self.cyl(i, c._singles(ci)[x])
        return out

    def cyl(self, i: int, comp_mask: int) -> int:
        """Cylinder over component ``i`` of a set of component worlds."""
        key = (i, comp_mask)
        out = self._cyl_cache.get(key)
        if out is None:
            out = 0
            for x in bits(comp_mask):
                out |= self._coord_masks[i][x]
            self._cyl_cache[key] = out
        return out

    def project(self, i: int, mask: int) -> int:
        """Component-``i`` worlds occurring as the ``i``-th coordinate of a member."""
        out = 0
        for k in bits(mask):
            out |= 1 << self.coords[k][i]
        return out

    def is_cylinder(self, i: int, mask: int) -> bool:
        return self.cyl(i, self.project(i, mask)) == mask

    def le_i(self, i: int, u: int, v: int) -> bool:
        """The preorder comparing only coordinate ``i``."""
        c = self.components[i]
        return c.rank[self.coords[u][i]] <= c.rank[self.coords[v][i]]

    def diamond(self, direction: str, mask: int) -> int:
        """Coordinate-wise closure through the extreme coordinates of ``mask``."""
        if not mask:
            return 0
        d = _check_dir(direction)
        out = self.full
        for i, c in enumerate(self.components):
            ranks = [c.rank[self.coords[k][i]] for k in bits(mask)]
            out &= self.cyl(i, c.down_rank(max(ranks)) if d is LE else c.up_rank(min(ranks)))
        return out

    def violations(self) -> list[Violation]:
        out: list[Violation] = []
        for name, c in zip(self.sort_names, self.components):
            if c.scale != self.scale:
                out.append(Violation("scale", (name,), "components must share one scale"))
            out.extend(Violation(v.law, (name,) + v.witness, v.detail) for v in c.violations())
        if len(self.sort_names) != len(self.components):
            out.append(Violation("sorts", tuple(self.sort_names), "one sort name per component"))
        if out:
            return out
        # the product laws follow from the component laws; re-check on small products
        if self.n <= 64:
            out.extend(SimilaritySpace.violations(self))
        return out

    def __repr__(self):
        return f"ProductSpace({' x '.join(str(list(c.worlds)) for c in self.components)})"


class _LazyMatrix:
    def __init__(self, space: ProductSpace):
        self.space = space

    def __len__(self):
        return self.space.n

    def __getitem__(self, u):
        space = self.space
        return _LazyRow(space, u)

    def __iter__(self):
        return (self[u] for u in range(self.space.n))


class _LazyRow:
    def __init__(self, space, u):
        self.space, self.u = space, u

    def __len__(self):
        return self.space.n

    def __getitem__(self, v):
        return self.space.sim_index(self.u, v)

    def __iter__(self):
        return (self[v] for v in range(self.space.n))


# ---------------------------------------------------------------- functional API


def neighborhood(space: SimilaritySpace, c, a: int) -> int:
    return space.neighborhood(c, a)


def diamond_chain(space: ChainSpace, direction: str, a: int) -> int:
    return space.diamond(direction, a)


def diamond_product(space: ProductSpace, direction: str, a: int) -> int:
    return space.diamond(direction, a)


def cylinder(space: ProductSpace, sorts: Sequence[int], tuples: Iterable[Sequence[int]]) -> int:
    """Full tuples whose coordinates at ``sorts`` form one of ``tuples``."""
    sorts = tuple(sorts)
    if not sorts:
        raise ValueError("cylinder needs at least one sort")
    wanted = {tuple(t) for t in tuples}
    return mask_of(k for k, t in enumerate(space.coords) if tuple(t[i] for i in sorts) in wanted)


def validate(space: SimilaritySpace) -> list[Violation]:
    """Every violated law with a witness; empty when the space is valid."""
    return space.violations()
