"""Result containers shared by the evaluation modules."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

from harmonic_lfun.errors import AccuracyError

__all__ = ["EvalResult", "checked"]


@dataclass(frozen=True)
class EvalResult:
    """Complex value with an error estimate and evaluation diagnostics.

    ``diagnostics`` holds truncation radii, panel counts, regimes and any
    warnings raised along the way, keyed by short names.
    """

    value: complex
    err_est: float
    diagnostics: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        checked(self.value, "evaluation")
        if not self.err_est >= 0.0:
            raise AccuracyError(f"invalid error estimate {self.err_est!r}")

    def __add__(self, other: EvalResult) -> EvalResult:
        return EvalResult(
            self.value + other.value,
            self.err_est + other.err_est,
            {**self.diagnostics, **other.diagnostics},
        )

    def __sub__(self, other: EvalResult) -> EvalResult:
        return EvalResult(
            self.value - other.value,
            self.err_est + other.err_est,
            {**self.diagnostics, **other.diagnostics},
        )

    def scaled(self, factor: complex) -> EvalResult:
        """Multiply value and error estimate by a constant."""
        return EvalResult(
            complex(self.value * factor),
            self.err_est * abs(factor),
            dict(self.diagnostics),
        )

    def shifted(self, offset: complex, offset_err: float = 0.0) -> EvalResult:
        """Add a constant (with its own error) to the value."""
        return EvalResult(
            complex(self.value + offset),
            self.err_est + offset_err,
            dict(self.diagnostics),
        )

    @property
    def rel_err(self) -> float:
        """Error estimate relative to max(|value|, tiny)."""
        return self.err_est / max(abs(self.value), 1e-300)


def checked(value: complex, what: str) -> complex:
    """Return ``value`` as a complex after refusing NaN and Inf.

    Raises:
        AccuracyError: If either component is not finite.
    """
    value = complex(value)
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise AccuracyError(f"{what} produced a non-finite value {value!r}")
    return value
