"""Budget and run configuration models."""

from __future__ import annotations

import math
from enum import Enum
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

__all__ = [
    "Budget",
    "Command",
    "LatticeTruncation",
    "OutputFormat",
    "QuadratureSpec",
    "RunConfig",
    "SeriesBudget",
]


def _finite(v: Any) -> Any:
    if isinstance(v, float) and not math.isfinite(v):
        raise ValueError(f"must be finite, got {v!r}")
    return v


class SeriesBudget(BaseModel):
    """Term and tolerance limits for power and asymptotic series."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    max_terms: int = Field(default=400, ge=1)
    abs_tol: float = Field(default=1e-15, gt=0)
    rel_tol: float = Field(default=1e-13, gt=0)

    @field_validator("abs_tol", "rel_tol", mode="before")
    @classmethod
    def reject_non_finite(cls, v: Any) -> Any:
        """Reject NaN and infinite tolerances."""
        return _finite(v)


class QuadratureSpec(BaseModel):
    """Split point, tolerances and panel budget for Mellin-type integrals.

    ``tail_T`` is the upper truncation of integrals to infinity. ``None``
    lets each integral pick its own cutoff from the decay of its integrand.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    t0: float = Field(default=1.0, gt=0)
    abs_tol: float = Field(default=1e-13, gt=0)
    rel_tol: float = Field(default=1e-11, gt=0)
    max_subdiv: int = Field(default=400, ge=1)
    tail_T: float | None = None
    near_pole_refine: bool = True

    @field_validator("t0", "abs_tol", "rel_tol", "tail_T", mode="before")
    @classmethod
    def reject_non_finite(cls, v: Any) -> Any:
        """Reject NaN and infinite values."""
        return _finite(v)

    @model_validator(mode="after")
    def tail_beyond_split(self) -> QuadratureSpec:
        """Require tail_T > t0 when a cutoff is given."""
        if self.tail_T is not None and self.tail_T <= self.t0:
            raise ValueError(f"tail_T ({self.tail_T}) must exceed t0 ({self.t0})")
        return self

    def with_split(self, t0: float) -> QuadratureSpec:
        """Copy with a new split point, validated like a loaded spec.

        Raises:
            pydantic.ValidationError: If t0 is not positive and finite or
                does not lie below ``tail_T``.
        """
        return QuadratureSpec.model_validate({**self.model_dump(), "t0": t0})

    def refined(self, factor: float = 10.0) -> QuadratureSpec:
        """Tighter copy used as a refinement oracle."""
        return self.model_copy(
            update={
                "abs_tol": self.abs_tol / factor,
                "rel_tol": self.rel_tol / factor,
                "max_subdiv": int(self.max_subdiv * factor),
                "tail_T": None if self.tail_T is None else 2.0 * self.tail_T,
            }
        )


class LatticeTruncation(BaseModel):
    """Truncation radius for coset and orbit sums.

    For Eisenstein series ``radius`` bounds |c tau + d| / sqrt(v); for the
    resolvent it is the radius of the hyperbolic ball 2 cosh d <= radius**2.
    Terms in the outer half of the shell are damped by a smooth taper.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    radius: int = Field(default=120, ge=4)
    tol: float = Field(default=1e-2, gt=0)

    @field_validator("tol", mode="before")
    @classmethod
    def reject_non_finite(cls, v: Any) -> Any:
        """Reject NaN and infinite tolerances."""
        return _finite(v)

    def tail_bound(self, k: int, sigma: float, v: float) -> float:
        """Bound on the neglected tail of a weight-k Eisenstein coset sum.

        Integral comparison over the shell beyond R/2. For k = 0 the smooth
        part of the tail is added back analytically and for k >= 2 it
        integrates to zero, so one power of R is gained in both cases.

        Args:
            k: Weight.
            sigma: Real part of the spectral parameter.
            v: Imaginary part of the (reduced) point.
        """
        r_half = self.radius / 2.0
        expo = 2.0 * sigma + k - 1.0
        if expo <= 0:
            return math.inf
        return 6.0 / math.pi * v ** (-k / 2.0) * r_half ** (-expo) / expo

    def scaled(self, factor: float) -> LatticeTruncation:
        """Copy with the radius multiplied by ``factor``."""
        return self.model_copy(
            update={"radius": max(4, round(self.radius * factor))}
        )


class Budget(BaseModel):
    """All numerical budgets of one run, scaled together by a preset."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str = "default"
    series: SeriesBudget = Field(default_factory=SeriesBudget)
    quadrature: QuadratureSpec = Field(default_factory=QuadratureSpec)
    eisenstein: LatticeTruncation = Field(
        default_factory=lambda: LatticeTruncation(radius=400)
    )
    resolvent: LatticeTruncation = Field(default_factory=LatticeTruncation)


class Command(str, Enum):
    """CLI commands."""

    EVAL_LZ = "eval-lz"
    EVAL_LE2 = "eval-le2"
    EVAL_EISENSTEIN = "eval-eisenstein"
    EVAL_RESOLVENT = "eval-resolvent"
    VERIFY = "verify"
    LIMIT = "limit"
    SWEEP = "sweep"


class OutputFormat(str, Enum):
    """Output encodings."""

    CSV = "csv"
    JSON = "json"
    TEXT = "text"


class RunConfig(BaseModel):
    """Resolved configuration of one CLI invocation."""

    command: Command
    params: dict[str, Any] = Field(default_factory=dict)
    output: Path | None = None
    format: OutputFormat = OutputFormat.TEXT
    seed: int = 0
    budget: Budget = Field(default_factory=Budget)

    @field_validator("params", mode="after")
    @classmethod
    def finite_params(cls, v: dict[str, Any]) -> dict[str, Any]:
        """Reject NaN or infinite numeric parameters."""
        for key, value in v.items():
            values = value if isinstance(value, (list, tuple)) else [value]
            for item in values:
                if isinstance(item, (int, float, complex)) and not math.isfinite(
                    abs(item)
                ):
                    raise ValueError(f"parameter '{key}' must be finite, got {item!r}")
        return v
