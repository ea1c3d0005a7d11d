from __future__ import annotations

from typing import Any


class FolresException(Exception):
    """Base exception for boundary-facing errors raised by folres."""

    default_code = "folres.error"

    def __init__(
        self,
        message: str,
        *,
        code: str | None = None,
        context: dict[str, Any] | None = None,
        retryable: bool = False,
    ) -> None:
        self.code = code or self.default_code
        self.message = message
        self.context = context or {}
        self.retryable = retryable
        Exception.__init__(self, message)

    def __str__(self) -> str:
        return self.message

    def to_dict(self) -> dict[str, Any]:
        """Return the stable boundary shape used by logs, reports, and tests."""
        return {
            "code": self.code,
            "message": self.message,
            "context": self.context,
            "retryable": self.retryable,
        }


class InputError(FolresException, ValueError):
    """Raised when external input is invalid at a package, cli, or driver boundary."""

    default_code = "input.invalid"


class ParseError(InputError):
    """Raised for malformed problem files; context carries `line` and `column` when known."""

    default_code = "parse.syntax"


class UnknownVariableError(ParseError):
    default_code = "parse.unknown_variable"


class NonRationalCoefficientError(ParseError):
    default_code = "parse.non_rational"


class CenterError(InputError):
    """Raised for centers that are not coordinate subspaces of codimension at least two."""

    default_code = "input.invalid_center"


class UnsupportedDerivationError(InputError):
    """Raised when an operation needs a diagonal or coordinate derivation and gets something else."""

    default_code = "foliation.unsupported_form"


class ConfigurationError(InputError):
    default_code = "config.invalid_value"


class AlgebraError(FolresException):
    """Raised for exact-arithmetic contract violations."""

    default_code = "algebra.error"


class FrameMismatchError(AlgebraError, ValueError):
    """Raised when operands live in different variable frames."""

    default_code = "algebra.frame_mismatch"


class NonUnitError(AlgebraError, ValueError):
    """Raised when an element that must be invertible at the origin vanishes there."""

    default_code = "algebra.non_unit"


class SubclassAbort(FolresException):
    """Raised when an input leaves the class the driver can resolve (non-monomial Cl, Unknown form)."""

    default_code = "resolve.subclass_abort"


class BudgetExhausted(FolresException):
    """Raised when a configured budget runs out before the computation finishes."""

    default_code = "budget.exhausted"


class StageBudgetExhausted(BudgetExhausted):
    default_code = "budget.stages"


class BranchBudgetExhausted(BudgetExhausted):
    default_code = "budget.branches"


class JetBudgetExhausted(BudgetExhausted):
    default_code = "budget.jet_order"


class VerificationFailure(FolresException):
    """Raised when a resolution report fails its checks."""

    default_code = "verify.failed"


class InternalInconsistency(FolresException, RuntimeError):
    """Raised for states the underlying mathematics rules out."""

    default_code = "internal.inconsistent"


class MoraBudgetExceeded(BudgetExhausted):
    """Raised when a Mora reduction overruns its step budget."""

    default_code = "budget.mora_steps"


class DataIOError(FolresException):
    """Raised for expected report read, write, or decode failures."""

    default_code = "io.error"


class ArtifactDecodeError(DataIOError):
    default_code = "io.decode_failed"


class ArtifactWriteError(DataIOError):
    default_code = "io.write_failed"
