"""Axiom recognition and Hilbert-style proof checking.

Each schema has a recognizer that matches an outer formula syntactically.
Two m.e.c.s are considered the same when they have the same canonical
literal sequence; everything else must match node for node.  Chains of
outer conjunctions in antecedents are flattened, so their bracketing is
irrelevant.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import ResourceLimit, UnknownGrade, VariantError
from .grades import GradeScale, godel
from .syntax import (BOT, TOP, And, Basic, Bot, Dge, Dle, Gimp, Logic, Not, OAnd, OIff, OImp, ONot, OOr, Or,
                     Outer, Signature, check_syntax, cpl_implies, cpl_tautology, has_diamond, is_mec,
                     is_one_sorted, is_one_sorted_mec, sort_predicates, variables)

__all__ = [
    "AXIOM_ORDER", "recognize_axiom", "matches_axiom", "axioms_for",
    "ProofLine", "AxiomStep", "HypStep", "MPStep", "ProofResult", "check_proof", "normalize_axiom_id",
]

AXIOM_ORDER = (
    "A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9", "A10", "A11",
    "A12a", "A12b", "A13a", "A13b", "A14a", "A14b", "A15a", "A15b", "A16",
    "A17a", "A17b", "A18a", "A18b", "A19", "A20", "A21a", "A21b", "A22",
)

_LAE = AXIOM_ORDER[:11]
_LAEC = AXIOM_ORDER[:25]
_LAEPC = AXIOM_ORDER


def axioms_for(variant) -> tuple[str, ...]:
    variant = Logic.of(variant)
    return {Logic.LAE: _LAE, Logic.LAEC: _LAEC, Logic.LAEPC: _LAEPC}[variant]


def normalize_axiom_id(text: str) -> str:
    """``a1'`` -> ``A1``; family names such as ``A12`` stay as they are."""
    t = text.strip().replace("′", "'")
    if t[:1] in "aA":
        t = "A" + t[1:]
    return t.rstrip("'")


# ---------------------------------------------------------------- matching helpers


class _Ctx:
    def __init__(self, variant: Logic, sig: Signature, scale: GradeScale):
        self.variant, self.sig, self.scale = variant, sig, scale

    def mec(self, e):
        return is_mec(e, self.sig, self.variant)

    def same(self, a: Basic, b: Basic) -> bool:
        """Syntactic identity, or the same m.e.c. up to literal order."""
        if a == b:
            return True
        ma = self.mec(a)
        return ma is not None and ma == self.mec(b)

    def same_one_sorted_mec(self, a, b) -> bool:
        if a == b:
            return True
        ma = is_one_sorted_mec(a, self.sig)
        return ma is not None and ma == is_one_sorted_mec(b, self.sig)


def _gimp(f, grade=None):
    if isinstance(f, Gimp) and (grade is None or f.grade == grade):
        return f
    return None


def _flat_and(f: Outer) -> list[Outer]:
    if isinstance(f, OAnd):
        return _flat_and(f.left) + _flat_and(f.right)
    return [f]


def _imp(f):
    return (f.left, f.right) if isinstance(f, OImp) else (None, None)


def _bot_gimp(f):
    """``x =>{1} _|_`` -> ``x``."""
    g = _gimp(f, 1)
    return g.lhs if g is not None and isinstance(g.rhs, Bot) else None


def _neg_bot_gimp(f):
    return _bot_gimp(f.arg) if isinstance(f, ONot) else None


def _diamond_conjunction(e: Basic) -> bool:
    if isinstance(e, And):
        return _diamond_conjunction(e.left) and _diamond_conjunction(e.right)
    return isinstance(e, (Dle, Dge))


# ---------------------------------------------------------------- schemas


def _a1(f, cx: _Ctx):
    g = _gimp(f, 1)
    if g is None:
        return False
    if cx.variant is Logic.LAE and has_diamond(g):
        return False
    return cpl_implies(g.lhs, g.rhs)


def _a2(f, cx):
    a, b = _imp(f)
    g = _gimp(a, 1)
    if g is None:
        return False
    return b == Gimp(And(g.lhs, Not(g.rhs)), 1, BOT)


def _a3(f, cx):
    a, b = _imp(f)
    ga, gb = _gimp(a), _gimp(b)
    return (ga is not None and gb is not None and ga.lhs == gb.lhs and ga.rhs == gb.rhs
            and gb.grade <= ga.grade)


def _a4(f, cx):
    a, b = _imp(f)
    psi = _neg_bot_gimp(a)
    gb = _gimp(b, 0)
    return psi is not None and gb is not None and gb.rhs == psi


def _a5(f, cx):
    a, b = _imp(f)
    ga = _gimp(a)
    return ga is not None and isinstance(ga.rhs, Bot) and b == Gimp(ga.lhs, 1, BOT)


def _a6(f, cx):
    a, b = _imp(f)
    if a is None:
        return False
    parts = _flat_and(a)
    if len(parts) != 2:
        return False
    delta = _neg_bot_gimp(parts[0])
    g, h = _gimp(parts[1]), _gimp(b)
    if delta is None or g is None or h is None or g.grade != h.grade:
        return False
    if cx.mec(delta) is None or cx.mec(g.rhs) is None:
        return False
    return cx.same(delta, g.lhs) and cx.same(h.lhs, g.rhs) and cx.same(h.rhs, delta)


def _a7(f, cx):
    a, b = _imp(f)
    if a is None:
        return False
    parts = _flat_and(a)
    if len(parts) != 2:
        return False
    g1, g2, h = _gimp(parts[0]), _gimp(parts[1]), _gimp(b)
    if None in (g1, g2, h):
        return False
    return (g1.grade == g2.grade == h.grade and g1.rhs == g2.rhs == h.rhs
            and h.lhs == Or(g1.lhs, g2.lhs))


def _a8(f, cx):
    a, b = _imp(f)
    g = _gimp(a)
    if g is None or not isinstance(g.rhs, Or) or not isinstance(b, OOr) or cx.mec(g.lhs) is None:
        return False
    return b == OOr(Gimp(g.lhs, g.grade, g.rhs.left), Gimp(g.lhs, g.grade, g.rhs.right))


def _a9(f, cx):
    a, b = _imp(f)
    if a is None:
        return False
    parts = _flat_and(a)
    if len(parts) != 2:
        return False
    g1, g2, h = _gimp(parts[0]), _gimp(parts[1]), _gimp(b)
    if None in (g1, g2, h) or g1.rhs != g2.lhs or h.lhs != g1.lhs or h.rhs != g2.rhs:
        return False
    try:
        return h.grade == cx.scale.combine(g1.grade, g2.grade)
    except UnknownGrade:
        return False


def _a10(f, cx):
    return f == ONot(Gimp(TOP, 1, BOT))


def _a11(f, cx):
    return not isinstance(f, Gimp) and cpl_tautology(f)


def _dia(kind):
    return Dle if kind == "a" else Dge


def _co(kind):
    return Dge if kind == "a" else Dle


def _a12(kind):
    def rec(f, cx):
        g = _gimp(f, 1)
        return g is not None and g.rhs == _dia(kind)(g.lhs)
    return rec


def _a13(kind):
    def rec(f, cx):
        g = _gimp(f, 1)
        d = _dia(kind)
        return g is not None and isinstance(g.rhs, d) and g.lhs == d(g.rhs)
    return rec


def _a14(kind):
    def rec(f, cx):
        return f == Gimp(_dia(kind)(BOT), 1, BOT)
    return rec


def _a15(kind):
    def rec(f, cx):
        if not isinstance(f, OOr):
            return False
        d = _dia(kind)
        g1, g2 = _gimp(f.left, 1), _gimp(f.right, 1)
        if g1 is None or g2 is None or not isinstance(g1.lhs, d) or not isinstance(g1.rhs, d):
            return False
        if g2 != Gimp(g1.rhs, 1, g1.lhs):
            return False
        if cx.variant is Logic.LAEPC:
            return sort_predicates(g1.lhs.arg, g1.rhs.arg, cx.sig).same_sort
        return True
    return rec


def _a16(f, cx):
    g = _gimp(f, 1)
    if g is None or not isinstance(g.lhs, And):
        return False
    le, ge = g.lhs.left, g.lhs.right
    if not isinstance(le, Dle) or not isinstance(ge, Dge):
        return False
    if cx.variant is Logic.LAEPC:
        if is_one_sorted_mec(g.rhs, cx.sig) is None:
            return False
        return cx.same_one_sorted_mec(le.arg, g.rhs) and cx.same_one_sorted_mec(ge.arg, g.rhs)
    if cx.mec(g.rhs) is None:
        return False
    return cx.same(le.arg, g.rhs) and cx.same(ge.arg, g.rhs)


def _a17(kind):
    def rec(f, cx):
        a, b = _imp(f)
        ga = _gimp(a)
        d = _dia(kind)
        return ga is not None and b == Gimp(d(ga.lhs), ga.grade, d(ga.rhs))
    return rec


def _a18(kind):
    # a: (phi & dle psi =>1 _|_) -> (dge phi & dle psi =>1 _|_); b swaps the diamonds
    def rec(f, cx):
        a, b = _imp(f)
        x, y = _bot_gimp(a), _bot_gimp(b)
        d, co = _dia(kind), _co(kind)
        if x is None or y is None or not isinstance(x, And) or not isinstance(x.right, d):
            return False
        if y != And(co(x.left), x.right):
            return False
        if cx.variant is Logic.LAEPC:
            return is_one_sorted(x.left, cx.sig)
        return True
    return rec


def _a19(f, cx):
    a, b = _imp(f)
    h = _gimp(b)
    if a is None or h is None or not isinstance(h.rhs, And):
        return False
    rho, sigma = h.rhs.left, h.rhs.right
    if not (_diamond_conjunction(rho) and _diamond_conjunction(sigma)):
        return False
    parts = _flat_and(a)
    if len(parts) != 3:
        return False
    return (_neg_bot_gimp(parts[0]) == h.rhs and parts[1] == Gimp(h.lhs, h.grade, rho)
            and parts[2] == Gimp(h.lhs, h.grade, sigma))


def _a20(f, cx):
    a, b = _imp(f)
    both = _neg_bot_gimp(a)
    if both is None or not isinstance(both, And) or not isinstance(b, OIff):
        return False
    phi, phi2 = both.left, both.right
    left = _flat_and(b.left)
    h = _gimp(b.right)
    if len(left) != 2 or h is None or h.lhs != both or not isinstance(h.rhs, And):
        return False
    psi, psi2 = h.rhs.left, h.rhs.right
    if left[0] != Gimp(phi, h.grade, psi) or left[1] != Gimp(phi2, h.grade, psi2):
        return False
    return sort_predicates(And(phi, psi), And(phi2, psi2), cx.sig).disjoint_sorted


def _a21(kind):
    # a uses the up-diamond, b the down-diamond
    d = Dge if kind == "a" else Dle

    def rec(f, cx):
        a, b = _imp(f)
        whole = _bot_gimp(a)
        if whole is None or not isinstance(b, OOr):
            return False
        x, y = _bot_gimp(b.left), _bot_gimp(b.right)
        if x is None or y is None or not isinstance(x, And) or not isinstance(y, And):
            return False
        if x.left != y.left or not isinstance(x.left, d):
            return False
        dia, chi, psi = x.left, x.right, y.right
        if whole not in (And(And(dia, chi), psi), And(dia, And(chi, psi))):
            return False
        return sort_predicates(chi, psi, cx.sig).disjoint_sorted
    return rec


def _a22(f, cx):
    if not isinstance(f, OOr):
        return False
    g1, g2 = _gimp(f.left, 1), _gimp(f.right, 1)
    if g1 is None or g2 is None or cx.mec(g1.lhs) is None or not cx.same(g1.lhs, g2.lhs):
        return False
    return g2.rhs == Not(g1.rhs)


_RECOGNIZERS: dict[str, Callable] = {
    "A1": _a1, "A2": _a2, "A3": _a3, "A4": _a4, "A5": _a5, "A6": _a6, "A7": _a7, "A8": _a8,
    "A9": _a9, "A10": _a10, "A11": _a11,
    "A12a": _a12("a"), "A12b": _a12("b"), "A13a": _a13("a"), "A13b": _a13("b"),
    "A14a": _a14("a"), "A14b": _a14("b"), "A15a": _a15("a"), "A15b": _a15("b"), "A16": _a16,
    "A17a": _a17("a"), "A17b": _a17("b"), "A18a": _a18("a"), "A18b": _a18("b"), "A19": _a19,
    "A20": _a20, "A21a": _a21("a"), "A21b": _a21("b"), "A22": _a22,
}


def _context(variant, sig, scale, f) -> _Ctx:
    variant = Logic.of(variant)
    if sig is None:
        if variant is Logic.LAEPC:
            raise VariantError("laepc axioms need a signature with sorts")
        sig = Signature.plain(sorted(variables(f)))
    return _Ctx(variant, sig, scale or godel())


def _applicable(f, cx: _Ctx) -> bool:
    try:
        check_syntax(f, cx.sig, cx.variant)
    except Exception:
        return False
    return isinstance(f, Outer)


def matches_axiom(f: Outer, axiom: str, variant, sig: Signature | None = None,
                  scale: GradeScale | None = None) -> bool:
    """Whether ``f`` is an instance of ``axiom`` (an id such as ``A9``, ``A12`` or ``A12a``).

    The schema must belong to the axiom list of ``variant``.
    """
    cx = _context(variant, sig, scale, f)
    if not _applicable(f, cx):
        return False
    wanted = normalize_axiom_id(axiom)
    allowed = axioms_for(cx.variant)
    ids = [a for a in allowed if a == wanted or (a[-1] in "ab" and a[:-1] == wanted)]
    return any(_RECOGNIZERS[a](f, cx) for a in ids)


def recognize_axiom(f: Outer, variant, sig: Signature | None = None, scale: GradeScale | None = None):
    """First axiom id (in the fixed order) that ``f`` instantiates, or ``None``.

    Tautology checks may raise :class:`ResourceLimit`.
    """
    cx = _context(variant, sig, scale, f)
    if not _applicable(f, cx):
        return None
    for a in axioms_for(cx.variant):
        if _RECOGNIZERS[a](f, cx):
            return a
    return None


# ---------------------------------------------------------------- proofs


@dataclass(frozen=True)
class AxiomStep:
    axiom: str
    note: str = ""

    def __str__(self):
        return f"axiom {self.axiom}"


@dataclass(frozen=True)
class HypStep:
    index: int  # 1-based position in the theory

    def __str__(self):
        return f"hyp {self.index}"


@dataclass(frozen=True)
class MPStep:
    first: int
    second: int

    def __str__(self):
        return f"mp {self.first} {self.second}"


@dataclass(frozen=True)
class ProofLine:
    number: int
    formula: Outer
    step: AxiomStep | HypStep | MPStep


@dataclass
class ProofResult:
    accepted: bool
    conclusion: Outer | None = None
    line: int | None = None
    reason: str = ""

    def __bool__(self):
        return self.accepted


def check_proof(theory: Sequence[Outer], script: Sequence[ProofLine], variant,
                sig: Signature | None = None, scale: GradeScale | None = None) -> ProofResult:
    """Accept ``script`` iff every line is an axiom instance, a hypothesis or follows by modus ponens."""
    variant = Logic.of(variant)
    theory = tuple(theory)
    if not script:
        return ProofResult(False, None, None, "empty proof")
    if sig is None and variant is not Logic.LAEPC:
        names: set[str] = set()
        for f in theory:
            names |= variables(f)
        for line in script:
            names |= variables(line.formula)
        sig = Signature.plain(sorted(names))
    scale = scale or godel()
    seen: dict[int, Outer] = {}
    last = None
    for line in script:
        n, f, step = line.number, line.formula, line.step
        if seen and n <= last:
            return ProofResult(False, None, n, "line numbers must increase")
        try:
            check_syntax(f, sig, variant, scale)
        except Exception as exc:
            return ProofResult(False, None, n, f"ill-formed line: {exc}")
        if isinstance(step, HypStep):
            if not 1 <= step.index <= len(theory):
                return ProofResult(False, None, n, f"no theory member {step.index}")
            if theory[step.index - 1] != f:
                return ProofResult(False, None, n, f"not theory member {step.index}")
        elif isinstance(step, AxiomStep):
            try:
                ok = matches_axiom(f, step.axiom, variant, sig, scale)
            except ResourceLimit as exc:
                return ProofResult(False, None, n, str(exc))
            if not ok:
                return ProofResult(False, None, n, f"not an {normalize_axiom_id(step.axiom)} instance")
        elif isinstance(step, MPStep):
            i, j = step.first, step.second
            for k in (i, j):
                if k not in seen:
                    return ProofResult(False, None, n, f"mp refers to line {k}, which is not an earlier line")
            a, b = seen[i], seen[j]
            if not (b == OImp(a, f) or a == OImp(b, f)):
                return ProofResult(False, None, n, f"lines {i} and {j} do not give this line by modus ponens")
        else:
            return ProofResult(False, None, n, "unknown justification")
        seen[n] = f
        last = n
    return ProofResult(True, script[-1].formula, None, "")
