"""Finite grade scales: a totally ordered set of rationals with a finite t-norm.

Grades are exact :class:`fractions.Fraction` values.  Internally every
operation works on *level indices* (position in the ascending level list),
so comparisons of grades are comparisons of small integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from .errors import ScaleError, UnknownGrade

__all__ = [
    "GradeScale",
    "build_scale",
    "combine",
    "godel",
    "lukasiewicz",
    "parse_grade",
    "format_grade",
    "scale_from_tokens",
]


def parse_grade(text: str | int | Fraction) -> Fraction:
    """Read a grade written as ``1/2``, ``0.25``, ``1`` or an existing number."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise UnknownGrade(f"not a rational grade: {text!r}") from exc


def format_grade(value: Fraction) -> str:
    return str(value)


@dataclass(frozen=True)
class GradeScale:
    """A validated finite t-norm ``(V, ⊙)``.

    ``table[i][j]`` is the index of ``levels[i] ⊙ levels[j]``.  Instances are
    only produced by :func:`build_scale` (or the named constructors), which
    check every law exhaustively.
    """

    levels: tuple[Fraction, ...]
    table: tuple[tuple[int, ...], ...]
    name: str | None = None

    def __len__(self) -> int:
        return len(self.levels)

    @property
    def top(self) -> int:
        return len(self.levels) - 1

    def index(self, grade) -> int:
        value = parse_grade(grade)
        try:
            return self._positions[value]
        except KeyError:
            raise UnknownGrade(f"{value} is not a level of the scale") from None

    def __contains__(self, grade) -> bool:
        try:
            self.index(grade)
        except UnknownGrade:
            return False
        return True

    @property
    def _positions(self) -> dict[Fraction, int]:
        cached = self.__dict__.get("_pos")
        if cached is None:
            cached = {v: i for i, v in enumerate(self.levels)}
            object.__setattr__(self, "_pos", cached)
        return cached

    def combine(self, a, b) -> Fraction:
        return self.levels[self.table[self.index(a)][self.index(b)]]

    def combine_index(self, i: int, j: int) -> int:
        return self.table[i][j]

    def to_text(self) -> str:
        """Text form used in theory and model files (without the ``scale`` keyword)."""
        levels = " ".join(format_grade(v) for v in self.levels)
        if self.name in ("godel", "lukasiewicz"):
            return f"{self.name} {levels}"
        cells = " ".join(str(k) for row in self.table for k in row)
        return f"table {levels} {cells}"

    def __str__(self) -> str:
        return self.to_text()


def combine(scale: GradeScale, a, b) -> Fraction:
    """``a ⊙ b`` on ``scale``; raises :class:`UnknownGrade` for foreign grades."""
    return scale.combine(a, b)


def build_scale(levels: Sequence, table: Sequence[Sequence[int]], name: str | None = None) -> GradeScale:
    """Validate ``levels`` and the index ``table`` and return a :class:`GradeScale`.

    Raises :class:`ScaleError` naming the first violated law.
    """
    values = tuple(parse_grade(v) for v in levels)
    n = len(values)
    if n < 2:
        raise ScaleError("missing 0/1", "a scale needs at least the grades 0 and 1")
    for a, b in zip(values, values[1:]):
        if not a < b:
            raise ScaleError("unordered levels", f"{a} is not below {b}")
    if values[0] != 0 or values[-1] != 1:
        raise ScaleError("missing 0/1", f"levels run from {values[0]} to {values[-1]}")

    rows = tuple(tuple(int(k) for k in row) for row in table)
    if len(rows) != n or any(len(row) != n for row in rows):
        raise ScaleError("dimension", f"table must be {n}x{n}")
    for i, j in product(range(n), repeat=2):
        if not 0 <= rows[i][j] < n:
            raise ScaleError("range", f"entry ({i},{j}) = {rows[i][j]} is not a level index")

    top = n - 1
    for a in range(n):
        if rows[a][top] != a or rows[top][a] != a:
            raise ScaleError("neutrality", f"{values[a]} ⊙ 1 != {values[a]}")
    for a, b in product(range(n), repeat=2):
        if rows[a][b] != rows[b][a]:
            raise ScaleError("commutativity", f"{values[a]} ⊙ {values[b]}")
    for a, b, c in product(range(n), repeat=3):
        if rows[rows[a][b]][c] != rows[a][rows[b][c]]:
            raise ScaleError("associativity", f"({values[a]}, {values[b]}, {values[c]})")
    for a, b in product(range(n), repeat=2):
        if a < top and rows[a][b] > rows[a + 1][b]:
            raise ScaleError("monotonicity", f"{values[a]} <= {values[a + 1]} but products decrease at {values[b]}")
    for a, b in product(range(n), repeat=2):
        if rows[a][b] > min(a, b):
            raise ScaleError("boundedness", f"{values[a]} ⊙ {values[b]} exceeds the minimum")
    return GradeScale(values, rows, name)


def godel(levels: Iterable = (0, Fraction(1, 2), 1)) -> GradeScale:
    """Scale with ``⊙ = min``."""
    values = tuple(parse_grade(v) for v in levels)
    n = len(values)
    return build_scale(values, [[min(i, j) for j in range(n)] for i in range(n)], "godel")


def lukasiewicz(levels: Iterable | int = 2) -> GradeScale:
    """Discrete Łukasiewicz t-norm ``max(0, a + b - 1)`` on evenly spaced levels.

    Pass either the number of steps ``n`` (levels ``0, 1/n, ..., 1``) or the
    levels themselves, which must then be evenly spaced.
    """
    if isinstance(levels, int):
        values = tuple(Fraction(k, levels) for k in range(levels + 1))
    else:
        values = tuple(parse_grade(v) for v in levels)
    n = len(values)
    if n < 2:
        raise ScaleError("missing 0/1", "a scale needs at least the grades 0 and 1")
    steps = n - 1
    if values != tuple(Fraction(k, steps) for k in range(n)):
        raise ScaleError("spacing", "Łukasiewicz levels must be 0, 1/n, ..., 1")
    return build_scale(values, [[max(0, i + j - steps) for j in range(n)] for i in range(n)], "lukasiewicz")


def scale_from_tokens(tokens: Sequence[str]) -> GradeScale:
    """Inverse of :meth:`GradeScale.to_text` (tokens after the ``scale`` keyword).

    Accepted forms: ``godel <levels>``, ``lukasiewicz <levels>``,
    ``lukasiewicz <n>`` and ``table <levels> <row-major indices>``.
    """
    if not tokens:
        raise ScaleError("syntax", "empty scale declaration")
    kind, rest = tokens[0].lower(), list(tokens[1:])
    if kind in ("godel", "min"):
        return godel(rest or (0, Fraction(1, 2), 1))
    if kind in ("lukasiewicz", "luk"):
        if len(rest) == 1 and "/" not in rest[0] and rest[0] not in ("0", "1"):
            return lukasiewicz(int(rest[0]))
        return lukasiewicz(rest or 2)
    if kind == "table":
        # n levels followed by n*n indices
        total = len(rest)
        n = 1
        while n + n * n < total:
            n += 1
        if n + n * n != total:
            raise ScaleError("dimension", f"{total} tokens cannot hold n levels and an n x n table")
        levels = rest[:n]
        cells = [int(t) for t in rest[n:]]
        table = [cells[i * n:(i + 1) * n] for i in range(n)]
        return build_scale(levels, table)
    raise ScaleError("syntax", f"unknown scale kind {tokens[0]!r}")
