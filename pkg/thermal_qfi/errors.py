from __future__ import annotations


class ThermalQfiError(Exception):
    """
    Base class for every error raised by thermal_qfi.
    `exit_code` is the CLI exit status the error maps to.
    """
    exit_code: int = 1


class DomainError(ThermalQfiError, ValueError):
    """A precondition or value invariant was violated."""
    exit_code = 2


class NumericalError(ThermalQfiError, ArithmeticError):
    """A numerical routine failed its own residual or range checks."""
    exit_code = 3


def with_context(err: ThermalQfiError, context: str) -> ThermalQfiError:
    """
    Same error class, message prefixed with `context`.
    """
    out = type(err)(f"{context}: {err}")
    return out
