"""Independent reference implementations used only by the tests.

Nothing here imports the package's spaces, semantics or decision modules:
formulas are walked through their class names and fields, t-norms are
written out as arithmetic on fractions and world sets are Python sets.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

HALF = Fraction(1, 2)
LEVELS = (Fraction(0), HALF, Fraction(1))


def t_min(a, b):
    return min(a, b)


def t_luk(a, b):
    return max(Fraction(0), a + b - 1)


def raw_matrices(n, levels=LEVELS, tnorm=t_min):
    """Symmetric, strictly reflexive, t-transitive matrices by brute force."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    below_one = [g for g in levels if g != 1]
    out = []
    for values in product(below_one, repeat=len(pairs)):
        s = [[Fraction(1) if i == j else None for j in range(n)] for i in range(n)]
        for (i, j), g in zip(pairs, values):
            s[i][j] = s[j][i] = g
        if all(s[u][w] >= tnorm(s[u][v], s[v][w]) for u in range(n) for v in range(n) for w in range(n)):
            out.append(s)
    return out


def raw_models(names, max_worlds=4, levels=LEVELS, tnorm=t_min):
    """Every separated model over ``names`` with up to ``max_worlds`` worlds.

    Labellings are all functions from worlds to truth assignments, filtered
    by separation; nothing is restricted to a canonical form.
    """
    rows = list(product((False, True), repeat=len(names)))
    for n in range(1, max_worlds + 1):
        mats = raw_matrices(n, levels, tnorm)
        for labels in product(rows, repeat=n):
            if len(set(labels)) < n:
                continue
            val = {v: {w for w in range(n) if labels[w][k]} for k, v in enumerate(names)}
            for s in mats:
                yield n, s, val


def ext(e, n, s, val):
    kind = type(e).__name__
    if kind == "Var":
        return val[e.name]
    if kind == "Top":
        return set(range(n))
    if kind == "Bot":
        return set()
    if kind == "Not":
        return set(range(n)) - ext(e.arg, n, s, val)
    if kind == "And":
        return ext(e.left, n, s, val) & ext(e.right, n, s, val)
    if kind == "Or":
        return ext(e.left, n, s, val) | ext(e.right, n, s, val)
    raise ValueError(f"oracle handles plain expressions only, not {kind}")


def holds(f, n, s, val):
    kind = type(f).__name__
    if kind == "Gimp":
        a, b, c = ext(f.lhs, n, s, val), ext(f.rhs, n, s, val), f.grade
        return all(any(s[w][v] >= c for v in b) for w in a)
    if kind == "ONot":
        return not holds(f.arg, n, s, val)
    if kind == "OAnd":
        return holds(f.left, n, s, val) and holds(f.right, n, s, val)
    if kind == "OOr":
        return holds(f.left, n, s, val) or holds(f.right, n, s, val)
    if kind == "OImp":
        return (not holds(f.left, n, s, val)) or holds(f.right, n, s, val)
    if kind == "OIff":
        return holds(f.left, n, s, val) == holds(f.right, n, s, val)
    raise ValueError(kind)


class RawCatalogue:
    """Truth vectors over the raw model list, one bit per model."""

    def __init__(self, names, max_worlds=4, levels=LEVELS, tnorm=t_min):
        self.models = list(raw_models(names, max_worlds, levels, tnorm))
        self.full = (1 << len(self.models)) - 1
        self._vec = {}

    def vector(self, f):
        out = self._vec.get(f)
        if out is None:
            out = 0
            for k, m in enumerate(self.models):
                if holds(f, *m):
                    out |= 1 << k
            self._vec[f] = out
        return out

    def entails(self, theory, query):
        models = self.full
        for f in theory:
            models &= self.vector(f)
        return not (models & ~self.vector(query))


def raw_chain_diamond(direction, a, order):
    """Down or up closure of ``a`` along ``order`` (a list of worlds)."""
    if not a:
        return set()
    rank = {w: r for r, w in enumerate(order)}
    if direction == "le":
        top = max(rank[w] for w in a)
        return {w for w in order if rank[w] <= top}
    low = min(rank[w] for w in a)
    return {w for w in order if rank[w] >= low}
