"""Common result container for the SOP evaluators."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SopResult:
    """One secrecy outage probability value with provenance.

    ``method`` is one of ``"closed-form"``, ``"asymptotic"``, ``"quadrature"``
    or ``"monte-carlo"``.  Quadrature results carry an error estimate;
    Monte Carlo results carry a confidence interval.  Closed-form results
    that had to be clipped into [0, 1] keep the clamp magnitude so callers
    can see how far the raw expression strayed.
    """

    value: float
    method: str
    error_estimate: float | None = None
    ci: tuple[float, float] | None = None
    clamped: bool = False
    clamp_amount: float = 0.0
    warnings: tuple[str, ...] = ()
