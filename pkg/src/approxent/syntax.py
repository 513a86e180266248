"""Two-level formula language.

Basic expressions are Boolean combinations of variables, ``T``, ``_|_`` and the
order diamonds ``dle``/``dge``.  A graded implication ``lhs =>{c} rhs`` joins
two basic expressions; outer formulas are Boolean combinations of graded
implications.  The concrete syntax, loosest binding last::

    !  dle  dge        (basic, prefix)
    &                  (basic)
    |                  (basic)
    =>{c}              (graded implication, not nestable)
    !                  (outer, prefix)
    &  |               (outer)
    ->  <->            (outer, right associative)

Because ``!``, ``&`` and ``|`` exist at both levels, an outer operand that is
itself a graded implication is printed inside parentheses.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, fields
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Iterable, NamedTuple, Sequence, Union

from .errors import ParseError, ResourceLimit, SortError, VariantError
from .grades import GradeScale, format_grade, parse_grade

__all__ = [
    "Logic", "Signature",
    "Var", "Top", "Bot", "Not", "And", "Or", "Dle", "Dge", "TOP", "BOT",
    "Gimp", "ONot", "OAnd", "OOr", "OImp", "OIff",
    "Basic", "Outer", "Theory",
    "parse", "parse_formula", "parse_basic", "to_text",
    "check_syntax", "variables", "has_diamond", "is_basic", "is_outer",
    "conj", "disj", "oconj", "literal", "mec_expr",
    "is_mec", "is_one_sorted_mec", "is_one_sorted", "conj_literals", "enumerate_mecs", "sort_predicates", "SortInfo",
    "cpl_tautology", "cpl_implies",
    "MEC_CAP", "TAUTOLOGY_CAP",
]

MEC_CAP = 16
TAUTOLOGY_CAP = 20


class Logic(str, Enum):
    LAE = "lae"
    LAEC = "laec"
    LAEPC = "laepc"

    @classmethod
    def of(cls, value) -> "Logic":
        if isinstance(value, Logic):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise VariantError(f"unknown logic {value!r}; expected lae, laec or laepc") from None

    @property
    def ordered(self) -> bool:
        return self is not Logic.LAE


# ---------------------------------------------------------------- signature


@dataclass(frozen=True)
class Signature:
    """Declared variables.

    ``sorts`` is a sequence of ``(sort name, variable names)``; plain LAE and
    LAEC use one anonymous sort.  ``unsorted`` variables only occur in LAEPC.
    """

    sorts: tuple[tuple[str, tuple[str, ...]], ...]
    unsorted: tuple[str, ...] = ()

    def __post_init__(self):
        sorts = tuple((str(name), tuple(names)) for name, names in self.sorts)
        object.__setattr__(self, "sorts", sorts)
        object.__setattr__(self, "unsorted", tuple(self.unsorted))
        seen: set[str] = set()
        for name, names in sorts:
            if not names:
                raise SortError(f"sort {name!r} declares no variables")
            for v in names:
                if v in seen:
                    raise SortError(f"variable {v!r} declared twice")
                seen.add(v)
        for v in self.unsorted:
            if v in seen:
                raise SortError(f"variable {v!r} declared twice")
            seen.add(v)
        snames = [name for name, _ in sorts]
        if len(set(snames)) != len(snames):
            raise SortError("duplicate sort names")

    @classmethod
    def plain(cls, names: Iterable[str]) -> "Signature":
        names = tuple(names)
        return cls(((("", names),) if names else ()), ())

    @property
    def sort_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.sorts)

    @property
    def sorted_variables(self) -> tuple[str, ...]:
        return tuple(v for _, names in self.sorts for v in names)

    @property
    def variables(self) -> tuple[str, ...]:
        return self.sorted_variables + self.unsorted

    def sort_vars(self, sort: int | str) -> tuple[str, ...]:
        return self.sorts[self.sort_index(sort)][1]

    def sort_index(self, sort: int | str) -> int:
        if isinstance(sort, int):
            if not 0 <= sort < len(self.sorts):
                raise SortError(f"no sort number {sort}")
            return sort
        for i, (name, _) in enumerate(self.sorts):
            if name == sort:
                return i
        raise SortError(f"unknown sort {sort!r}")

    def sort_of(self, var: str) -> int | None:
        """Index of the sort of ``var``; ``None`` for unsorted variables."""
        table = self.__dict__.get("_sort_of")
        if table is None:
            table = {v: i for i, (_, names) in enumerate(self.sorts) for v in names}
            table.update({v: None for v in self.unsorted})
            object.__setattr__(self, "_sort_of", table)
        try:
            return table[var]
        except KeyError:
            raise SortError(f"undeclared variable {var!r}") from None

    def __contains__(self, var: str) -> bool:
        return var in self.variables

    def position(self, var: str) -> int:
        return self.variables.index(var)

    def check_for(self, variant: Logic) -> None:
        if variant is not Logic.LAEPC and self.unsorted:
            raise VariantError(f"unsorted variables are only meaningful in laepc, not {variant.value}")


# ---------------------------------------------------------------- AST


class _Node:
    """Structural equality and a cached hash for the immutable tree nodes."""

    __slots__ = ()

    def _key(self):
        key = self.__dict__.get("_k")
        if key is None:
            key = (type(self).__name__,) + tuple(getattr(self, f.name) for f in fields(self))
            object.__setattr__(self, "_k", key)
        return key

    def __eq__(self, other):
        if self is other:
            return True
        if type(other) is not type(self):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        h = self.__dict__.get("_h")
        if h is None:
            h = hash(self._key())
            object.__setattr__(self, "_h", h)
        return h

    def __str__(self):
        return to_text(self)


_node = dataclass(frozen=True, eq=False, repr=True)


class Basic(_Node):
    __slots__ = ()


class Outer(_Node):
    __slots__ = ()


@_node
class Var(Basic):
    name: str


@_node
class Top(Basic):
    pass


@_node
class Bot(Basic):
    pass


@_node
class Not(Basic):
    arg: Basic


@_node
class And(Basic):
    left: Basic
    right: Basic


@_node
class Or(Basic):
    left: Basic
    right: Basic


@_node
class Dle(Basic):
    arg: Basic


@_node
class Dge(Basic):
    arg: Basic


@_node
class Gimp(Outer):
    lhs: Basic
    grade: Fraction
    rhs: Basic

    def __post_init__(self):
        object.__setattr__(self, "grade", parse_grade(self.grade))


@_node
class ONot(Outer):
    arg: Outer


@_node
class OAnd(Outer):
    left: Outer
    right: Outer


@_node
class OOr(Outer):
    left: Outer
    right: Outer


@_node
class OImp(Outer):
    left: Outer
    right: Outer


@_node
class OIff(Outer):
    left: Outer
    right: Outer


TOP = Top()
BOT = Bot()

Theory = tuple  # ordered collection of Outer formulas; hypothesis numbers are 1-based positions
Formula = Union[Basic, Outer]


def is_basic(node) -> bool:
    return isinstance(node, Basic)


def is_outer(node) -> bool:
    return isinstance(node, Outer)


def literal(name: str, positive: bool = True) -> Basic:
    return Var(name) if positive else Not(Var(name))


def conj(items: Sequence[Basic]) -> Basic:
    """Left-nested conjunction; ``T`` for no items."""
    items = list(items)
    if not items:
        return TOP
    out = items[0]
    for item in items[1:]:
        out = And(out, item)
    return out


def disj(items: Sequence[Basic]) -> Basic:
    """Left-nested disjunction; ``_|_`` for no items."""
    items = list(items)
    if not items:
        return BOT
    out = items[0]
    for item in items[1:]:
        out = Or(out, item)
    return out


def oconj(items: Sequence[Outer]) -> Outer:
    items = list(items)
    if not items:
        raise ValueError("empty outer conjunction")
    out = items[0]
    for item in items[1:]:
        out = OAnd(out, item)
    return out


def mec_expr(literals: Sequence[tuple[str, bool]]) -> Basic:
    return conj([literal(name, pos) for name, pos in literals])


def variables(node) -> frozenset[str]:
    out: set[str] = set()
    stack = [node]
    while stack:
        n = stack.pop()
        if isinstance(n, Var):
            out.add(n.name)
        elif isinstance(n, (Top, Bot)):
            pass
        elif isinstance(n, Gimp):
            stack.extend((n.lhs, n.rhs))
        elif isinstance(n, (Not, Dle, Dge, ONot)):
            stack.append(n.arg)
        else:
            stack.extend((n.left, n.right))
    return frozenset(out)


def has_diamond(node) -> bool:
    stack = [node]
    while stack:
        n = stack.pop()
        if isinstance(n, (Dle, Dge)):
            return True
        if isinstance(n, Gimp):
            stack.extend((n.lhs, n.rhs))
        elif isinstance(n, (Not, ONot)):
            stack.append(n.arg)
        elif isinstance(n, (And, Or, OAnd, OOr, OImp, OIff)):
            stack.extend((n.left, n.right))
    return False


def _grades(node):
    stack = [node]
    while stack:
        n = stack.pop()
        if isinstance(n, Gimp):
            yield n.grade
        elif isinstance(n, ONot):
            stack.append(n.arg)
        elif isinstance(n, (OAnd, OOr, OImp, OIff)):
            stack.extend((n.left, n.right))


def check_syntax(node, sig: Signature | None = None, variant: Logic | str | None = None,
                 scale: GradeScale | None = None) -> None:
    """Raise if ``node`` uses undeclared variables, diamonds under LAE, or foreign grades."""
    if variant is not None:
        variant = Logic.of(variant)
        if variant is Logic.LAE and has_diamond(node):
            raise VariantError("diamond operators are not part of lae")
    if sig is not None:
        for v in sorted(variables(node)):
            sig.sort_of(v)
        if variant is not None:
            sig.check_for(variant)
    if scale is not None:
        for g in _grades(node):
            if g not in scale:
                raise ParseError(f"grade {g} is not a level of the scale")


# ---------------------------------------------------------------- lexer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<gimp>(?:=>|⇒)\{(?P<grade>[^}]*)\})
  | (?P<iff><->|↔)
  | (?P<imp>->|→)
  | (?P<bot>_\|_|⊥)
  | (?P<not>!|¬|~)
  | (?P<and>&|∧)
  | (?P<or>\||∨)
  | (?P<lp>\()
  | (?P<rp>\))
  | (?P<top>⊤)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
    """,
    re.VERBOSE,
)

_KEYWORDS = {"T": "top", "dle": "dle", "dge": "dge"}


class _Tok(NamedTuple):
    kind: str
    text: str
    line: int
    col: int


def _tokenize(source: str, line: int = 1) -> list[_Tok]:
    toks: list[_Tok] = []
    pos, col = 0, 1
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if not m:
            if source.startswith("=>", pos) or source.startswith("⇒", pos):
                raise ParseError("graded implication needs a grade in braces", line, col, ("=>{c}",))
            raise ParseError(f"unexpected character {source[pos]!r}", line, col)
        kind = m.lastgroup
        text = m.group(0)
        if kind == "grade":
            kind = "gimp"
        if kind == "gimp":
            toks.append(_Tok("gimp", m.group("grade").strip(), line, col))
        elif kind == "ident":
            toks.append(_Tok(_KEYWORDS.get(text, "ident"), text, line, col))
        elif kind != "ws":
            toks.append(_Tok(kind, text, line, col))
        nl = text.count("\n")
        if nl:
            line += nl
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)
        pos = m.end()
    toks.append(_Tok("eof", "", line, col))
    return toks


_SHOW = {
    "gimp": "=>{c}", "iff": "<->", "imp": "->", "bot": "_|_", "not": "!", "and": "&",
    "or": "|", "lp": "(", "rp": ")", "top": "T", "ident": "variable", "eof": "end of input",
    "dle": "dle", "dge": "dge",
}


class _Parser:
    def __init__(self, toks: list[_Tok], scale: GradeScale | None):
        self.toks = toks
        self.i = 0
        self.scale = scale
        self.best: ParseError | None = None
        self.best_at = -1

    # -- helpers
    def peek(self) -> _Tok:
        return self.toks[self.i]

    def fail(self, expected: Iterable[str], message: str | None = None):
        tok = self.peek()
        what = message or f"unexpected {_SHOW.get(tok.kind, tok.kind)}" + (f" {tok.text!r}" if tok.text else "")
        err = ParseError(what, tok.line, tok.col, [_SHOW.get(e, e) for e in expected])
        if self.i > self.best_at or (self.i == self.best_at and self.best is not None
                                     and set(err.expected) - set(self.best.expected)):
            if self.i == self.best_at and self.best is not None:
                err = ParseError(what, tok.line, tok.col, set(err.expected) | set(self.best.expected))
            self.best, self.best_at = err, self.i
        raise err

    def expect(self, kind: str) -> _Tok:
        tok = self.peek()
        if tok.kind != kind:
            self.fail([kind])
        self.i += 1
        return tok

    # -- outer level
    def formula(self) -> Outer:
        left = self.imp()
        if self.peek().kind == "iff":
            self.i += 1
            return OIff(left, self.formula())
        return left

    def imp(self) -> Outer:
        left = self.oor()
        if self.peek().kind == "imp":
            self.i += 1
            return OImp(left, self.imp())
        return left

    def oor(self) -> Outer:
        left = self.oand()
        while self.peek().kind == "or":
            self.i += 1
            left = OOr(left, self.oand())
        return left

    def oand(self) -> Outer:
        left = self.ounary()
        while self.peek().kind == "and":
            self.i += 1
            left = OAnd(left, self.ounary())
        return left

    def ounary(self) -> Outer:
        start = self.i
        try:
            return self.gimp()
        except ParseError as exc:
            if getattr(exc, "hard", False):
                raise
            self.i = start
        kind = self.peek().kind
        if kind == "not":
            self.i += 1
            return ONot(self.ounary())
        if kind == "lp":
            self.i += 1
            inner = self.formula()
            self.expect("rp")
            return inner
        raise self.best

    def gimp(self) -> Gimp:
        lhs = self.basic()
        tok = self.peek()
        if tok.kind != "gimp":
            self.fail(["gimp", "and", "or"])
        self.i += 1
        try:
            grade = parse_grade(tok.text)
        except Exception:
            grade = None
        if grade is None or (self.scale is not None and grade not in self.scale):
            what = f"bad grade {tok.text!r}" if grade is None else f"grade {grade} is not a level of the scale"
            err = ParseError(what, tok.line, tok.col)
            err.hard = True
            raise err
        rhs = self.basic()
        return Gimp(lhs, grade, rhs)

    # -- basic level
    def basic(self) -> Basic:
        left = self.band()
        while self.peek().kind == "or":
            self.i += 1
            left = Or(left, self.band())
        return left

    def band(self) -> Basic:
        left = self.bunary()
        while self.peek().kind == "and":
            self.i += 1
            left = And(left, self.bunary())
        return left

    def bunary(self) -> Basic:
        tok = self.peek()
        if tok.kind == "not":
            self.i += 1
            return Not(self.bunary())
        if tok.kind == "dle":
            self.i += 1
            return Dle(self.bunary())
        if tok.kind == "dge":
            self.i += 1
            return Dge(self.bunary())
        if tok.kind == "ident":
            self.i += 1
            return Var(tok.text)
        if tok.kind == "top":
            self.i += 1
            return TOP
        if tok.kind == "bot":
            self.i += 1
            return BOT
        if tok.kind == "lp":
            self.i += 1
            inner = self.basic()
            self.expect("rp")
            return inner
        self.fail(["not", "dle", "dge", "ident", "top", "bot", "lp"])


def _run(source: str, entry: str, scale, line: int):
    p = _Parser(_tokenize(source, line), scale)
    node = getattr(p, entry)()
    if p.peek().kind != "eof":
        p.fail(["eof", "and", "or", "imp", "iff"] if entry == "formula" else ["eof", "and", "or"])
    return node


def parse_formula(source: str, sig: Signature | None = None, scale: GradeScale | None = None,
                  variant: Logic | str | None = None, line: int = 1) -> Outer:
    node = _run(source, "formula", scale, line)
    check_syntax(node, sig, variant, scale)
    return node


def parse_basic(source: str, sig: Signature | None = None, variant: Logic | str | None = None,
                line: int = 1) -> Basic:
    node = _run(source, "basic", None, line)
    check_syntax(node, sig, variant)
    return node


def parse(source: str, sig: Signature | None = None, scale: GradeScale | None = None,
          variant: Logic | str | None = None, line: int = 1) -> Formula:
    """Parse an outer formula, or a basic expression when no ``=>{c}`` occurs."""
    try:
        node = _run(source, "formula", scale, line)
    except ParseError as outer_err:
        try:
            node = _run(source, "basic", None, line)
        except ParseError:
            raise outer_err from None
    check_syntax(node, sig, variant, scale)
    return node


# ---------------------------------------------------------------- printer

_BASIC_PREC = {Or: 1, And: 2, Not: 3, Dle: 3, Dge: 3, Var: 4, Top: 4, Bot: 4}
_OUTER_PREC = {OIff: 1, OImp: 2, OOr: 3, OAnd: 4, ONot: 5, Gimp: 6}


def _basic_text(e: Basic, need: int = 0) -> str:
    prec = _BASIC_PREC[type(e)]
    if isinstance(e, Var):
        s = e.name
    elif isinstance(e, Top):
        s = "T"
    elif isinstance(e, Bot):
        s = "_|_"
    elif isinstance(e, Not):
        s = "!" + _basic_text(e.arg, 3)
    elif isinstance(e, Dle):
        s = "dle " + _basic_text(e.arg, 3)
    elif isinstance(e, Dge):
        s = "dge " + _basic_text(e.arg, 3)
    elif isinstance(e, And):
        s = f"{_basic_text(e.left, 2)} & {_basic_text(e.right, 3)}"
    else:
        s = f"{_basic_text(e.left, 1)} | {_basic_text(e.right, 2)}"
    return f"({s})" if prec < need else s


def _side(e: Basic) -> str:
    text = _basic_text(e)
    return f"({text})" if isinstance(e, (And, Or)) else text


def _outer_text(f: Outer, need: int = 0, operand: bool = False) -> str:
    if isinstance(f, Gimp):
        s = f"{_side(f.lhs)} =>{{{format_grade(f.grade)}}} {_side(f.rhs)}"
        return f"({s})" if operand else s
    prec = _OUTER_PREC[type(f)]
    if isinstance(f, ONot):
        if isinstance(f.arg, ONot):
            s = "!" + _outer_text(f.arg)
        else:
            s = f"!({_outer_text(f.arg)})"
    elif isinstance(f, OIff):
        s = f"{_outer_text(f.left, 2, True)} <-> {_outer_text(f.right, 1, True)}"
    elif isinstance(f, OImp):
        s = f"{_outer_text(f.left, 3, True)} -> {_outer_text(f.right, 2, True)}"
    elif isinstance(f, OOr):
        s = f"{_outer_text(f.left, 3, True)} | {_outer_text(f.right, 4, True)}"
    else:
        s = f"{_outer_text(f.left, 4, True)} & {_outer_text(f.right, 5, True)}"
    return f"({s})" if prec < need else s


def to_text(node: Formula) -> str:
    """Canonical concrete syntax; ``parse(to_text(x)) == x``."""
    if isinstance(node, Basic):
        return _basic_text(node)
    return _outer_text(node)


# ---------------------------------------------------------------- m.e.c.s


def conj_literals(e: Basic):
    """Flatten a conjunction of literals into ``[(name, positive)]`` or return ``None``."""
    out = []
    stack = [e]
    while stack:
        n = stack.pop()
        if isinstance(n, And):
            stack.append(n.right)
            stack.append(n.left)
        elif isinstance(n, Var):
            out.append((n.name, True))
        elif isinstance(n, Not) and isinstance(n.arg, Var):
            out.append((n.arg.name, False))
        else:
            return None
    return out


def _required(sig: Signature, variant: Logic, sort) -> tuple[str, ...]:
    if sort is not None:
        return sig.sort_vars(sort)
    return sig.sorted_variables


def is_mec(e: Basic, sig: Signature, variant: Logic | str = Logic.LAE, sort: int | str | None = None):
    """Canonical literal tuple if ``e`` is a m.e.c., else ``None``.

    A m.e.c. is a conjunction of literals containing every required variable
    exactly once and nothing else.  Required variables are all sorted
    variables, or the variables of ``sort`` for a one-sorted m.e.c.
    """
    variant = Logic.of(variant)
    lits = conj_literals(e)
    if lits is None:
        return None
    required = _required(sig, variant, sort)
    seen: dict[str, bool] = {}
    for name, pos in lits:
        if name in seen or name not in required:
            return None
        seen[name] = pos
    if len(seen) != len(required):
        return None
    return tuple((name, seen[name]) for name in required)


def is_one_sorted_mec(e: Basic, sig: Signature):
    """Canonical literals if ``e`` is a m.e.c. of some single sort."""
    for i in range(len(sig.sorts)):
        lits = is_mec(e, sig, Logic.LAEPC, sort=i)
        if lits is not None:
            return lits
    return None


def enumerate_mecs(sig: Signature, variant: Logic | str = Logic.LAE, sort: int | str | None = None,
                   cap: int = MEC_CAP) -> list[Basic]:
    """All ``2**k`` m.e.c.s, positive literals first, first variable most significant."""
    variant = Logic.of(variant)
    if sort is not None and variant is Logic.LAE:
        raise VariantError("one-sorted m.e.c.s need laec or laepc")
    names = _required(sig, variant, sort)
    if len(names) > cap:
        raise ResourceLimit(f"{len(names)} variables exceed the m.e.c. cap of {cap}")
    return [mec_expr(tuple(zip(names, bits))) for bits in product((True, False), repeat=len(names))]


class SortInfo(NamedTuple):
    one_sorted: bool
    same_sort: bool
    disjoint_sorted: bool


def _sorts_of(e: Basic, sig: Signature):
    """Set of sort indices used by ``e``, or ``None`` if an unsorted variable occurs."""
    out = set()
    for v in variables(e):
        s = sig.sort_of(v)
        if s is None:
            return None
        out.add(s)
    return out


def sort_predicates(a: Basic, b: Basic, sig: Signature) -> SortInfo:
    """Sort classification of ``a`` and of the pair ``(a, b)``; constants belong to every sort."""
    sa, sb = _sorts_of(a, sig), _sorts_of(b, sig)
    one = sa is not None and len(sa) <= 1
    same = sa is not None and sb is not None and len(sa | sb) <= 1
    disjoint = sa is not None and sb is not None and not (sa & sb)
    return SortInfo(one, same, disjoint)


def is_one_sorted(e: Basic, sig: Signature) -> bool:
    return sort_predicates(e, e, sig).one_sorted


# ---------------------------------------------------------------- CPL oracle


def _atoms(node, out: dict):
    if isinstance(node, (Top, Bot)):
        return
    if isinstance(node, (Not, ONot)):
        _atoms(node.arg, out)
    elif isinstance(node, (And, Or, OAnd, OOr, OImp, OIff)):
        _atoms(node.left, out)
        _atoms(node.right, out)
    else:  # Var, Dle, Dge, Gimp are opaque
        out.setdefault(node, len(out))


def _column(node, cols: dict, full: int) -> int:
    if isinstance(node, Top):
        return full
    if isinstance(node, Bot):
        return 0
    if isinstance(node, (Not, ONot)):
        return full ^ _column(node.arg, cols, full)
    if isinstance(node, (And, OAnd)):
        return _column(node.left, cols, full) & _column(node.right, cols, full)
    if isinstance(node, (Or, OOr)):
        return _column(node.left, cols, full) | _column(node.right, cols, full)
    if isinstance(node, OImp):
        return (full ^ _column(node.left, cols, full)) | _column(node.right, cols, full)
    if isinstance(node, OIff):
        return full ^ (_column(node.left, cols, full) ^ _column(node.right, cols, full))
    return cols[node]


def cpl_tautology(f: Formula, cap: int = TAUTOLOGY_CAP) -> bool:
    """Truth-table check of ``f`` as a classical propositional formula.

    Atoms are variables and diamond subexpressions (basic level) or graded
    implications (outer level).  All ``2**k`` rows are evaluated at once, one
    bit per row.
    """
    atoms: dict = {}
    _atoms(f, atoms)
    k = len(atoms)
    if k > cap:
        raise ResourceLimit(f"{k} atoms exceed the tautology cap of {cap}")
    rows = 1 << k
    full = (1 << rows) - 1
    cols = {}
    for atom, j in atoms.items():
        # bit r of the column is bit j of the row number r
        block = (1 << (1 << j)) - 1
        pattern = 0
        period = 1 << (j + 1)
        for start in range(1 << j, rows, period):
            pattern |= block << start
        cols[atom] = pattern
    return _column(f, cols, full) == full


def cpl_implies(phi: Basic, psi: Basic, cap: int = TAUTOLOGY_CAP) -> bool:
    """Whether ``phi -> psi`` is a CPL tautology (diamond subterms opaque)."""
    return cpl_tautology(Or(Not(phi), psi), cap)
