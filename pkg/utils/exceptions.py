"""
Exception hierarchy shared by every flexlocus app.

Validation-type failures subclass Django's ValidationError so they carry
``messages`` the same way model and serializer validation does; management
commands map them to exit code 2. Internal inconsistencies map to exit
code 3.
"""

from django.core.exceptions import ValidationError


class FlexlocusError(Exception):
    """Base class for errors raised by the toolkit."""


class HypothesisViolation(ValidationError, FlexlocusError):
    """The input violates a standing hypothesis (squarefree, d >= n, ...)."""

    exit_code = 2


class PreconditionError(HypothesisViolation):
    """An operation was called outside its precondition."""


class UsageError(HypothesisViolation):
    """Operands do not share a variable count or field context."""


class EnumerationTooLarge(HypothesisViolation):
    """A brute-force domain exceeds the configured enumeration limit."""


class InternalInconsistency(FlexlocusError):
    """A self-check failed: wrong degree bound, bad certificate, broken identity."""

    exit_code = 3


def error_message(exc):
    """Flatten a toolkit exception into a single line of text."""
    if isinstance(exc, ValidationError):
        return '; '.join(str(m) for m in exc.messages)
    return str(exc)
