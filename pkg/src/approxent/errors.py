"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class ApproxEntError(Exception):
    """Base class for every error raised by this package."""


class ScaleError(ApproxEntError):
    """A grade table violates one of the monoid laws.

    ``law`` names the violated law (``"neutrality"``, ``"associativity"``, ...).
    """

    def __init__(self, law: str, detail: str = ""):
        self.law = law
        self.detail = detail
        super().__init__(f"{law}: {detail}" if detail else law)


class UnknownGrade(ApproxEntError):
    pass


class ParseError(ApproxEntError):
    def __init__(self, message: str, line: int = 1, column: int = 1, expected=()):
        self.line = line
        self.column = column
        self.expected = tuple(sorted(set(expected)))
        where = f"line {line}, column {column}"
        hint = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{where}: {message}{hint}")


class SortError(ApproxEntError):
    pass


class VariantError(ApproxEntError):
    pass


class ResourceLimit(ApproxEntError):
    pass


class SpaceError(ApproxEntError):
    """Raised when a space that must be valid is not; carries the violations."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations) or "invalid space")


class EvaluationError(ApproxEntError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics) or "invalid evaluation")


class DegenerateModel(ApproxEntError):
    pass
