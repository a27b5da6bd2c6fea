"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class CactusError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(CactusError, ValueError):
    """Input does not describe a valid cactus or instance."""


class Disconnected(ValidationError):
    pass


class EdgeInTwoCycles(ValidationError):
    pass


class DegenerateCycle(ValidationError):
    pass


class NotATree(ValidationError):
    pass


class UnknownLinkId(CactusError, KeyError):
    pass


class NotATwoCut(CactusError, ValueError):
    pass


class NotLeafToLeafPlus(CactusError, ValueError):
    pass


class InfeasibleInstance(CactusError):
    """Some 2-cut of the instance is not crossed by any link."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class Infeasible(CactusError):
    """A link set (or arc set) leaves a 2-cut uncovered; ``witness`` is that cut."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class BudgetExceeded(CactusError):
    pass


class SubcactusTooLarge(CactusError):
    pass


class GuaranteeViolated(CactusError, AssertionError):
    """A checked postcondition (an approximation bound) failed."""


class DomainError(CactusError, ValueError):
    pass


class GenerationFailed(CactusError):
    pass


class ParseError(CactusError, ValueError):
    def __init__(self, message: str, *, line: int | None = None, field: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.line = line
        self.field = field
