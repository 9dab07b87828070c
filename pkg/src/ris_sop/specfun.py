"""Gaussian tail functions and combinatorial machinery for the outage sums.

Everything here is pure and reentrant.  The Q-function is evaluated through
the complementary error function; a log-domain variant is provided so that
products of the form ``exp(a) * Q(b)`` can be assembled without overflow even
when ``a`` runs into the thousands (which happens routinely at the extremes
of a transmit-SNR sweep).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import special as _sp

from .errors import CapacityError, DomainError

_SQRT2 = math.sqrt(2.0)

# Three-exponential fit of the Gaussian tail probability: for x >= 0,
#   Q(x) ~= sum_i (w_i / 2) * exp(-p_i x^2 / 2)
# and the mirrored form 1 - (same sum) for x < 0.  Worst absolute error is
# 1/12 at x = 0 and stays below 1e-3 once |x| >= 1.


class QApproxWeights(NamedTuple):
    w: tuple[float, float, float]
    p: tuple[float, float, float]


Q_APPROX = QApproxWeights(
    w=(1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0),
    p=(1.0, 4.0, 4.0 / 3.0),
)

#: Largest multinomial expansion order the term enumeration will serve.
ORDER_CAP = 16


def _asarray_checked(x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if np.isnan(arr).any():
        raise DomainError("Q-function argument must not be NaN")
    return arr


def q_exact(x):
    """Gaussian tail probability Q(x), elementwise on arrays.

    Computed as erfc(x / sqrt(2)) / 2, which keeps full relative accuracy in
    the far right tail and satisfies Q(-x) = 1 - Q(x) to float precision.
    """
    arr = _asarray_checked(x)
    out = 0.5 * _sp.erfc(arr / _SQRT2)
    return out if arr.ndim else float(out)


def log_q(x):
    """Natural log of the Gaussian tail probability, stable for huge |x|.

    For x >= 0 the scaled complementary error function is used, so the result
    is accurate (relative error well under 1e-12) even for x up to 1e4 where
    Q(x) itself underflows.  For x < 0 the value is log1p(-Q(-x)).
    """
    arr = _asarray_checked(x)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    out = np.empty_like(arr)
    pos = arr >= 0
    if pos.any():
        z = arr[pos]
        out[pos] = np.log(0.5 * _sp.erfcx(z / _SQRT2)) - 0.5 * z * z
    if (~pos).any():
        z = arr[~pos]
        out[~pos] = np.log1p(-0.5 * _sp.erfc(-z / _SQRT2))
    return float(out[0]) if scalar else out


def q_approx3(x):
    """Three-exponential approximation of Q(x), elementwise on arrays.

    The branch point x = 0 belongs to the nonnegative branch, so
    q_approx3(0) = 5/12.
    """
    arr = _asarray_checked(x)
    x2 = arr * arr
    s = np.zeros_like(x2)
    for w, p in zip(Q_APPROX.w, Q_APPROX.p):
        s += (0.5 * w) * np.exp(-0.5 * p * x2)
    out = np.where(arr >= 0, s, 1.0 - s)
    return float(out) if arr.ndim == 0 else out


def exp_times_q(a: float, b: float) -> float:
    """exp(a) * Q(b) assembled in log domain.

    Returns 0.0 for a = -inf.  May return inf when the product genuinely
    overflows; callers that need finiteness must check.
    """
    if a == -math.inf:
        return 0.0
    return float(np.exp(a + log_q(b)))


@dataclass(frozen=True)
class MultinomialTerm:
    """One composition k = (k1, k2, k3) of the expansion order m.

    ``coef`` is the exact multinomial coefficient m! / (k1! k2! k3!),
    ``weight_product`` is w1^k1 w2^k2 w3^k3 / 2^(m-1), and ``p_dot_k`` is
    sum_i k_i p_i (always >= m * min(p)).
    """

    k: tuple[int, int, int]
    coef: int
    weight_product: float
    p_dot_k: float

    @property
    def m(self) -> int:
        return self.k[0] + self.k[1] + self.k[2]


def multinomial_set(m: int) -> list[MultinomialTerm]:
    """All integer triples (k1, k2, k3) with k1+k2+k3 = m, exactly once.

    The list has (m+1)(m+2)/2 entries.  Coefficients are exact integers for
    every supported order; orders above ORDER_CAP are refused because the
    binomial prefactors of the outage sum grow factorially.
    """
    if m < 1:
        raise DomainError(f"expansion order must be >= 1, got {m}")
    if m > ORDER_CAP:
        raise CapacityError(f"expansion order {m} exceeds cap {ORDER_CAP}")
    w1, w2, w3 = Q_APPROX.w
    p1, p2, p3 = Q_APPROX.p
    fact_m = math.factorial(m)
    half_pow = 2.0 ** (m - 1)
    terms = []
    for k1 in range(m + 1):
        for k2 in range(m - k1 + 1):
            k3 = m - k1 - k2
            coef = fact_m // (
                math.factorial(k1) * math.factorial(k2) * math.factorial(k3)
            )
            wp = (w1**k1) * (w2**k2) * (w3**k3) / half_pow
            terms.append(
                MultinomialTerm(
                    k=(k1, k2, k3),
                    coef=coef,
                    weight_product=wp,
                    p_dot_k=k1 * p1 + k2 * p2 + k3 * p3,
                )
            )
    return terms


def signed_binom(x: int, y: int) -> int:
    """Alternating binomial prefactor (-1)^(y+1) * C(x, y)."""
    if y < 0 or y > x:
        raise DomainError(f"signed_binom requires 0 <= y <= x, got ({x}, {y})")
    c = math.comb(x, y)
    return c if y % 2 == 1 else -c
