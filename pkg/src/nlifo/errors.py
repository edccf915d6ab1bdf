"""Exception types raised across the package."""


class NlifoError(Exception):
    """Base class for all package errors."""


class DomainError(NlifoError, ValueError):
    """An argument lies outside the domain where a quantity is defined."""


class UnphysicalMomentsError(NlifoError, ValueError):
    """Second-order moments violate the bosonic physicality bound."""


class QuadratureError(NlifoError, ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, message, achieved):
        super().__init__(f"{message} (achieved relative tolerance {achieved:.3e})")
        self.detail = message
        self.achieved = achieved


class ConfigError(NlifoError, ValueError):
    """A configuration file is malformed or inconsistent."""


def annotate(exc: NlifoError, where: str) -> NlifoError:
    """Copy of ``exc`` with a location prefix, preserving its type."""
    if isinstance(exc, QuadratureError):
        return QuadratureError(f"{where}: {exc.detail}", exc.achieved)
    return type(exc)(f"{where}: {exc}")
