"""Closed-form secrecy outage probability of the opportunistic scheduler.

The SOP integral factors, after a multinomial expansion of the powered
three-exponential Q approximation, into elementary terms of the form
``exp(.) + coeff * exp(.) * Q(.)``.  The exponents routinely exceed +-700
across a wide transmit-SNR sweep, so every term is assembled in log domain
and recombined through :func:`ris_sop.specfun.exp_times_q`; a naive
evaluation overflows long before the interesting operating points.

Two integration branches exist depending on whether the Q-function argument
can go negative inside the integral, selected by the sign of
``mu_d^2 * gamma0 - (rho - 1)``; the boundary itself belongs to the simpler
single-branch case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import CapacityError, ContractError, EvaluationError
from .result import SopResult
from .specfun import MultinomialTerm, exp_times_q, multinomial_set, signed_binom
from .sysmodel import CltParams, SystemConfig, derive_clt_params

_SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class TermContext:
    """Per-term constants shared by the closed-form integrals.

    ``sigma_mk`` is the composition-scaled amplitude deviation
    sigma_d / sqrt(sum_i k_i p_i); ``upsilon_mk`` the combined quadratic
    coefficient 1/(2 sigma_mk^2) + gamma0 / (rho * lambda_e); ``alpha`` the
    branch split point of the outer integral (negative on the low-SNR
    branch).
    """

    m: int
    k: MultinomialTerm
    sigma_mk: float
    upsilon_mk: float
    alpha: float


def term_context(k: MultinomialTerm, params: CltParams) -> TermContext:
    sigma_mk = math.sqrt(params.sigma2_d / k.p_dot_k)
    upsilon_mk = 1.0 / (2.0 * sigma_mk**2) + params.gamma0 / (
        params.rho * params.lambda_e
    )
    alpha = (params.mu_d**2 * params.gamma0 - (params.rho - 1.0)) / params.rho
    return TermContext(
        m=k.m, k=k, sigma_mk=sigma_mk, upsilon_mk=upsilon_mk, alpha=alpha
    )


def _require_finite(value: float, label: str, ctx: TermContext) -> float:
    if not math.isfinite(value):
        raise EvaluationError(
            f"{label} lost finiteness for m={ctx.m}, k={ctx.k.k}: got {value}"
        )
    return value


def j_plus_term(ctx: TermContext, params: CltParams) -> float:
    """Single multinomial term of the full-range outage integral.

    Equals (1/2) * integral over x in [0, inf) of
    exp(-chi_k(x)^2 / 2) * exppdf(x), where chi_k is the composition-scaled
    Q argument; the quadrature oracle checks exactly this.
    """
    mu, rho, lam, g0 = params.mu_d, params.rho, params.lambda_e, params.gamma0
    s2 = ctx.sigma_mk**2
    ups = ctx.upsilon_mk
    pref = g0 / (2.0 * rho * lam * ups)
    u0 = math.sqrt((rho - 1.0) / g0)
    t1 = math.exp(-((u0 - mu) ** 2) / (2.0 * s2))
    beta = mu / (2.0 * s2 * ups)
    a = (rho - 1.0) / (rho * lam) - mu**2 * g0 / (2.0 * s2 * rho * lam * ups)
    b = math.sqrt(2.0 * ups) * (u0 - beta)
    t2 = (mu * _SQRT_PI / (s2 * math.sqrt(ups))) * exp_times_q(a, b)
    return _require_finite(pref * (t1 + t2), "j_plus_term", ctx)


def i_plus_term(ctx: TermContext, params: CltParams) -> float:
    """Single multinomial term of the tail integral over x in [alpha, inf).

    Only meaningful on the branch with alpha > 0; at alpha -> 0 the value
    meets j_plus_term because the integration domains coincide.
    """
    if ctx.alpha <= 0:
        raise ContractError(
            f"i_plus_term requires alpha > 0, got alpha={ctx.alpha}"
        )
    mu, rho, lam, g0 = params.mu_d, params.rho, params.lambda_e, params.gamma0
    s2 = ctx.sigma_mk**2
    ups = ctx.upsilon_mk
    pref = g0 / (2.0 * rho * lam * ups)
    t1 = math.exp(-(mu**2 * g0 - (rho - 1.0)) / (rho * lam))
    a = (rho - 1.0) / (rho * lam) - mu**2 * g0 / (2.0 * s2 * rho * lam * ups)
    b = math.sqrt(2.0) * mu * g0 / (rho * lam * math.sqrt(ups))
    t2 = (mu * _SQRT_PI / (s2 * math.sqrt(ups))) * exp_times_q(a, b)
    return _require_finite(pref * (t1 + t2), "i_plus_term", ctx)


def j_plus(m: int, params: CltParams) -> float:
    """Order-m full-range outage integral, via the multinomial expansion."""
    return sum(
        k.coef * k.weight_product * j_plus_term(term_context(k, params), params)
        for k in multinomial_set(m)
    )


def i_plus(m: int, params: CltParams) -> float:
    """Order-m tail integral over [alpha, inf); subset of j_plus by domain."""
    return sum(
        k.coef * k.weight_product * i_plus_term(term_context(k, params), params)
        for k in multinomial_set(m)
    )


def _i_minus_from(m: int, j_vals, i_vals, exp_alpha: float) -> float:
    correction = sum(
        signed_binom(m, j) * (j_vals[j] - i_vals[j]) for j in range(1, m + 1)
    )
    return 1.0 - exp_alpha - correction


def i_minus(m: int, params: CltParams) -> float:
    """Order-m head integral over [0, alpha] of the mirrored-branch power.

    Expressed through the binomial expansion as
    1 - exp(-alpha/lambda_e) - sum_j V(m,j) (J+(j) - I+(j)).
    """
    alpha = (params.mu_d**2 * params.gamma0 - (params.rho - 1.0)) / params.rho
    if alpha <= 0:
        raise ContractError(f"i_minus requires mu^2*gamma0 > rho-1, got alpha={alpha}")
    j_vals = {j: j_plus(j, params) for j in range(1, m + 1)}
    i_vals = {j: i_plus(j, params) for j in range(1, m + 1)}
    return _i_minus_from(m, j_vals, i_vals, math.exp(-alpha / params.lambda_e))


def sop_closed_form(cfg: SystemConfig) -> SopResult:
    """Closed-form SOP of the best-user scheduler.

    Combines the per-order integrals with the alternating binomial weights
    and the normalization constant xi.  The approximation can leave [0, 1]
    by a hair at extreme parameters, so the result is clipped with the clamp
    magnitude surfaced rather than hidden.
    """
    params = derive_clt_params(cfg)
    m_users = cfg.n_users
    if m_users > 16:
        raise CapacityError(f"n_users capped at 16 for the closed form, got {m_users}")
    xi = params.xi
    boundary = params.mu_d**2 * params.gamma0
    if boundary <= params.rho - 1.0:
        total = sum(
            signed_binom(m_users, m) * xi**m * j_plus(m, params)
            for m in range(1, m_users + 1)
        )
    else:
        alpha = (boundary - (params.rho - 1.0)) / params.rho
        exp_alpha = math.exp(-alpha / params.lambda_e)
        j_vals = {j: j_plus(j, params) for j in range(1, m_users + 1)}
        i_vals = {j: i_plus(j, params) for j in range(1, m_users + 1)}
        total = sum(
            signed_binom(m_users, m)
            * xi**m
            * (i_vals[m] + _i_minus_from(m, j_vals, i_vals, exp_alpha))
            for m in range(1, m_users + 1)
        )
    raw = 1.0 - total
    value = min(1.0, max(0.0, raw))
    return SopResult(
        value=value,
        method="closed-form",
        clamped=value != raw,
        clamp_amount=abs(value - raw),
    )
