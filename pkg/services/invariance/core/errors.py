"""Exception hierarchy shared by every package of the verifier.

Each exception carries a ``code`` from ``protocol/schemas/error.yaml`` and a
``details`` mapping so that the CLI and the HTTP surface can report it as an
``ErrorModel`` without knowing the concrete class.
"""

from typing import Any

from schemas.models import ErrorModel


class InvarianceError(Exception):
    """Base class for all verifier failures."""

    code = "INTERNAL_ERROR"

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details: dict[str, Any] = details


class ExpressionSyntaxError(InvarianceError):
    """Malformed expression text."""

    code = "SYNTAX_ERROR"

    def __init__(self, message: str, position: int, token: str):
        super().__init__(
            f"{message} at position {position} (token {token!r})",
            position=position,
            token=token,
        )
        self.position = position
        self.token = token


class UnknownIdentifier(InvarianceError):
    """Identifier that is neither a variable, a parameter nor a function."""

    code = "UNKNOWN_IDENTIFIER"

    def __init__(self, name: str, position: int):
        super().__init__(
            f"unknown identifier {name!r} at position {position}",
            name=name,
            position=position,
        )
        self.name = name
        self.position = position


class ArityMismatch(InvarianceError):
    """Wrong number of function arguments or wrong point dimensions."""

    code = "ARITY_MISMATCH"


class DomainError(InvarianceError):
    """Evaluation outside the domain of definition of a sub-expression."""

    code = "DOMAIN_ERROR"

    def __init__(self, expression: str, reason: str, **details: Any):
        super().__init__(f"{reason} in {expression!r}", expression=expression, **details)
        self.expression = expression
        self.reason = reason

    def at(self, **location: Any) -> "DomainError":
        """Annotate with where it happened (node, point, s) and return self."""
        self.details.update(location)
        return self


class NoConvergence(InvarianceError):
    """Iterative solver exhausted its budget."""

    code = "NO_CONVERGENCE"

    def __init__(self, message: str, iterations: int, residual: float, **details: Any):
        super().__init__(message, iterations=iterations, residual=residual, **details)
        self.iterations = iterations
        self.residual = residual


class SingularJacobian(InvarianceError):
    """Newton system without a unique solution."""

    code = "SINGULAR_JACOBIAN"


class UnsupportedFamily(InvarianceError):
    """Family that cannot be checked in the requested mode."""

    code = "BAD_REQUEST"


class NotFound(InvarianceError):
    """Unknown registry entry, family or file."""

    code = "NOT_FOUND"

    def __init__(self, name: str, available: list[str] | None = None):
        super().__init__(f"{name!r} not found", name=name, available=available or [])
        self.name = name


class ProblemFileError(InvarianceError):
    """Problem document rejected; lists every diagnostic, not just the first."""

    code = "VALIDATION_ERROR"

    def __init__(self, diagnostics: list[str], source: str = "<document>"):
        super().__init__(
            f"{source}: {len(diagnostics)} problem(s): " + "; ".join(diagnostics),
            diagnostics=diagnostics,
            source=source,
        )
        self.diagnostics = diagnostics


def to_error_model(exc: Exception) -> ErrorModel:
    """Convert any exception to the wire error model."""
    if isinstance(exc, InvarianceError):
        return ErrorModel(code=exc.code, message=exc.message, details=exc.details or None)
    return ErrorModel(code="INTERNAL_ERROR", message=str(exc), details={"type": type(exc).__name__})
