"""Exceptions raised by the numerical layers.

Every failure mode that would otherwise leak a NaN or an Inf is reported
through one of these classes. They all derive from ``NumericalError`` so the
CLI can catch them in one place.
"""

from __future__ import annotations

__all__ = [
    "AccuracyError",
    "BranchError",
    "ConvergenceError",
    "DomainError",
    "FitError",
    "NumericalError",
    "OrbitProximityError",
    "ParameterError",
    "PoleError",
    "PoleProximityError",
    "SingularSetError",
    "SingularityError",
    "StepError",
]


class NumericalError(ArithmeticError):
    """Base class for evaluation failures."""


class PoleError(NumericalError):
    """Argument sits on a pole of a meromorphic function."""


class DomainError(NumericalError, ValueError):
    """Argument outside the domain of definition."""


class ParameterError(NumericalError, ValueError):
    """Parameter combination excluded by the construction."""


class AccuracyError(NumericalError):
    """Requested tolerance not reachable with the available budget."""


class BranchError(NumericalError):
    """Argument on a branch point or cut."""


class PoleProximityError(NumericalError):
    """J(tau) too close to J(z) for a reliable H_z evaluation."""


class SingularSetError(NumericalError):
    """Point lies on the orbit of the positive imaginary axis."""


class ConvergenceError(NumericalError):
    """Truncated sum or integral tail exceeds the requested tolerance."""


class OrbitProximityError(NumericalError):
    """An orbit point M z comes too close to tau."""


class SingularityError(NumericalError):
    """Kernel evaluated on its diagonal."""


class StepError(NumericalError):
    """Finite-difference levels disagree beyond tolerance."""


class FitError(NumericalError):
    """Residual fit is ill-conditioned or inconsistent."""
