"""Evaluations and satisfaction.

An :class:`Evaluation` assigns each declared variable a world set (bitmask)
in a space.  Extensions of compound basic expressions follow the Boolean
operations, and the diamonds are computed by the space itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import EvaluationError, VariantError
from .spaces import GE, LE, ChainSpace, ProductSpace, SimilaritySpace, bits
from .syntax import (And, Basic, Bot, Dge, Dle, Gimp, Logic, Not, OAnd, OIff, OImp, ONot, OOr, Or,
                     Outer, Signature, Top, Var)

__all__ = [
    "Evaluation", "Diagnostic", "validate_evaluation", "infer_variant",
    "eval_basic", "sat_gimp", "sat_formula", "sat_theory", "gimp_witness", "failing_members",
]


@dataclass(frozen=True)
class Diagnostic:
    problem: str
    witness: tuple
    detail: str = ""

    def __str__(self):
        return f"{self.problem} at {self.witness}" + (f": {self.detail}" if self.detail else "")


def infer_variant(space: SimilaritySpace) -> Logic:
    if isinstance(space, ProductSpace):
        return Logic.LAEPC
    if isinstance(space, ChainSpace):
        return Logic.LAEC
    return Logic.LAE


class Evaluation:
    """Variable assignment over a space.

    ``assignment`` maps variable names to world bitmasks.  By default the
    evaluation is validated on construction and :class:`EvaluationError`
    carries every diagnostic.
    """

    def __init__(self, space: SimilaritySpace, sig: Signature, assignment: Mapping[str, int],
                 variant: Logic | str | None = None, check: bool = True):
        self.space = space
        self.sig = sig
        self.assignment = {str(k): int(v) for k, v in assignment.items()}
        self.variant = infer_variant(space) if variant is None else Logic.of(variant)
        self._cache: dict[Basic, int] = {}
        if check:
            diags = validate_evaluation(self)
            if diags:
                raise EvaluationError(diags)

    def extension(self, var: str) -> int:
        return self.assignment[var]

    def eval(self, e: Basic) -> int:
        return eval_basic(self, e)

    def holds(self, f: Outer) -> bool:
        return sat_formula(self, f)

    def world_literals(self, w: int) -> tuple[tuple[str, bool], ...]:
        """The variables true at world ``w``, as ``(name, positive)`` in declaration order."""
        return tuple((v, bool(self.assignment[v] >> w & 1)) for v in self.sig.variables)

    def __repr__(self):
        shown = ", ".join(f"{v}: {self.space.names(m)}" for v, m in self.assignment.items())
        return f"Evaluation({shown})"


def validate_evaluation(ev: Evaluation) -> list[Diagnostic]:
    """Every structural problem of ``ev``; empty when it is a valid evaluation."""
    space, sig, variant = ev.space, ev.sig, ev.variant
    out: list[Diagnostic] = []
    if variant is Logic.LAEC and not isinstance(space, ChainSpace):
        out.append(Diagnostic("variant", (variant.value,), "laec needs a totally ordered space"))
    if variant is Logic.LAEPC and not isinstance(space, ProductSpace):
        out.append(Diagnostic("variant", (variant.value,), "laepc needs a product of chains"))
    if variant is not Logic.LAEPC and sig.unsorted:
        out.append(Diagnostic("variant", tuple(sig.unsorted), "unsorted variables need laepc"))
    for v in sig.variables:
        if v not in ev.assignment:
            out.append(Diagnostic("unassigned variable", (v,)))
    for v, m in ev.assignment.items():
        if v not in sig:
            out.append(Diagnostic("undeclared variable", (v,)))
        elif m < 0 or m & ~space.full:
            out.append(Diagnostic("foreign worlds", (v,), "extension mentions worlds outside the space"))
    if out:
        return out

    names = [v for v in sig.variables]
    seen: dict[tuple, int] = {}
    for w in range(space.n):
        key = tuple(ev.assignment[v] >> w & 1 for v in names)
        if key in seen:
            out.append(Diagnostic("separation", (space.worlds[seen[key]], space.worlds[w]),
                                  "no variable contains exactly one of the two worlds"))
        else:
            seen[key] = w

    if variant is Logic.LAEPC and isinstance(space, ProductSpace):
        if len(sig.sorts) != len(space.components):
            out.append(Diagnostic("sorts", (len(sig.sorts), len(space.components)),
                                  "one chain component per declared sort"))
            return out
        for i, (_, names_i) in enumerate(sig.sorts):
            for v in names_i:
                if not space.is_cylinder(i, ev.assignment[v]):
                    out.append(Diagnostic("cylinder", (v,), f"extension is not a cylinder over sort {i + 1}"))
        cells: dict[tuple, int] = {}
        sorted_vars = sig.sorted_variables
        for w in range(space.n):
            key = tuple(ev.assignment[v] >> w & 1 for v in sorted_vars)
            cells[key] = cells.get(key, 0) | 1 << w
        for a in sig.unsorted:
            m = ev.assignment[a]
            for cell in cells.values():
                part = m & cell
                if part and part != cell:
                    inside = next(bits(part))
                    outside = next(bits(cell & ~m))
                    out.append(Diagnostic("saturation", (a, space.worlds[inside], space.worlds[outside]),
                                          "splits a cell of the sorted variables"))
                    break
    return out


def eval_basic(ev: Evaluation, e: Basic, cache: dict | None = None) -> int:
    """Extension of ``e`` as a world bitmask."""
    if cache is None:
        cache = ev._cache
    out = cache.get(e)
    if out is not None:
        return out
    full = ev.space.full
    if isinstance(e, Var):
        try:
            out = ev.assignment[e.name]
        except KeyError:
            raise VariantError(f"variable {e.name!r} has no extension") from None
    elif isinstance(e, Top):
        out = full
    elif isinstance(e, Bot):
        out = 0
    elif isinstance(e, Not):
        out = full & ~eval_basic(ev, e.arg, cache)
    elif isinstance(e, And):
        out = eval_basic(ev, e.left, cache) & eval_basic(ev, e.right, cache)
    elif isinstance(e, Or):
        out = eval_basic(ev, e.left, cache) | eval_basic(ev, e.right, cache)
    elif isinstance(e, (Dle, Dge)):
        if not ev.space.ordered:
            raise VariantError("diamonds need an ordered space")
        out = ev.space.diamond(LE if isinstance(e, Dle) else GE, eval_basic(ev, e.arg, cache))
    else:
        raise TypeError(f"not a basic expression: {e!r}")
    cache[e] = out
    return out


def gimp_witness(ev: Evaluation, g: Gimp) -> int | None:
    """A world of the left side outside the grade neighbourhood of the right side, if any."""
    lhs = eval_basic(ev, g.lhs)
    if not lhs:
        return None
    rhs = eval_basic(ev, g.rhs)
    bad = lhs & ~ev.space.neighborhood(g.grade, rhs)
    return next(bits(bad)) if bad else None


def sat_gimp(ev: Evaluation, g: Gimp) -> bool:
    lhs = eval_basic(ev, g.lhs)
    if not lhs:
        return True
    rhs = eval_basic(ev, g.rhs)
    return not lhs & ~ev.space.neighborhood(g.grade, rhs)


def sat_formula(ev: Evaluation, f: Outer, cache: dict | None = None) -> bool:
    """Classical evaluation over the truth values of the graded implications."""
    if isinstance(f, Gimp):
        if cache is None:
            return sat_gimp(ev, f)
        out = cache.get(f)
        if out is None:
            out = cache[f] = sat_gimp(ev, f)
        return out
    if isinstance(f, ONot):
        return not sat_formula(ev, f.arg, cache)
    if isinstance(f, OAnd):
        return sat_formula(ev, f.left, cache) and sat_formula(ev, f.right, cache)
    if isinstance(f, OOr):
        return sat_formula(ev, f.left, cache) or sat_formula(ev, f.right, cache)
    if isinstance(f, OImp):
        return not sat_formula(ev, f.left, cache) or sat_formula(ev, f.right, cache)
    if isinstance(f, OIff):
        return sat_formula(ev, f.left, cache) == sat_formula(ev, f.right, cache)
    raise TypeError(f"not an outer formula: {f!r}")


def sat_theory(ev: Evaluation, theory: Iterable[Outer], cache: dict | None = None) -> bool:
    return all(sat_formula(ev, f, cache) for f in theory)


def failing_members(ev: Evaluation, theory: Iterable[Outer]) -> list[int]:
    """Positions (0-based) of theory members that ``ev`` violates."""
    return [k for k, f in enumerate(theory) if not sat_formula(ev, f)]
