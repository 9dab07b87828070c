"""Physical configuration and the derived channel statistics.

The configuration mirrors the usual narrowband RIS downlink setup: a source
talks to M single-antenna users through an N-element reflecting surface while
a passive eavesdropper listens.  All links are Rayleigh with log-distance
path loss.  Every other module consumes only the derived linear-domain
statistics collected in :class:`CltParams`; dB values appear at this
configuration boundary and nowhere else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .specfun import log_q


@dataclass(frozen=True)
class SystemConfig:
    """Static description of one RIS-aided downlink scenario.

    Distances are in meters, ``z0`` is the reference path loss in dB at 1 m,
    ``upsilon`` the path-loss exponent, ``gamma0_db`` the transmit SNR in dB
    and ``r_th`` the secrecy-rate threshold in bits per channel use.
    """

    n_elements: int = 64
    n_users: int = 3
    d_sr: float = 45.0
    d_rd: float = 45.0
    d_re: float = 30.0
    z0: float = 42.0
    upsilon: float = 3.5
    gamma0_db: float = 20.0
    r_th: float = 1.0

    def __post_init__(self):
        if self.n_elements < 1:
            raise DomainError(f"n_elements must be >= 1, got {self.n_elements}")
        if self.n_users < 1:
            raise DomainError(f"n_users must be >= 1, got {self.n_users}")
        for name in ("d_sr", "d_rd", "d_re"):
            if getattr(self, name) <= 0:
                raise DomainError(f"{name} must be positive, got {getattr(self, name)}")
        if self.r_th <= 0:
            raise DomainError(f"r_th must be positive, got {self.r_th}")
        if self.upsilon <= 0:
            raise DomainError(f"upsilon must be positive, got {self.upsilon}")


@dataclass(frozen=True)
class CltParams:
    """Linear-domain statistics of the destination and eavesdropper SNRs.

    ``mu_d`` and ``sigma2_d`` are the mean and variance of the aggregated
    destination channel amplitude under the Gaussian (large-N) model,
    ``xi`` the normalization constant that makes the implied truncated
    amplitude distribution integrate to one, and ``lambda_e`` the mean of the
    exponentially distributed eavesdropper SNR.
    """

    mu_d: float
    sigma2_d: float
    xi: float
    lambda_e: float
    gamma0: float
    rho: float
    zeta_sr: float
    zeta_rd: float
    zeta_re: float

    @property
    def sigma_d(self) -> float:
        return math.sqrt(self.sigma2_d)


def path_loss_linear(d: float, z0: float, upsilon: float) -> float:
    """Linear channel power gain of the log-distance path loss model.

    Evaluates 10^((z0 - 10 * upsilon * log10(d)) / 10); strictly decreasing
    in the distance ``d``.
    """
    if d <= 0:
        raise DomainError(f"distance must be positive, got {d}")
    return 10.0 ** ((z0 - 10.0 * upsilon * math.log10(d)) / 10.0)


def rho_of(r_th: float) -> float:
    """Linear secrecy threshold 2^r_th."""
    return 2.0**r_th


def derive_clt_params(cfg: SystemConfig) -> CltParams:
    """Derive every distribution parameter the evaluators need.

    The amplitude mean scales like N and the variance like N, so the ratio
    mu_d / sigma_d grows like sqrt(N) and ``xi`` converges to 1 quickly.
    ``xi`` is computed through the log-domain tail routine to avoid the
    1/(1 - tiny) cancellation at large N.
    """
    zeta_sr = path_loss_linear(cfg.d_sr, cfg.z0, cfg.upsilon)
    zeta_rd = path_loss_linear(cfg.d_rd, cfg.z0, cfg.upsilon)
    zeta_re = path_loss_linear(cfg.d_re, cfg.z0, cfg.upsilon)
    gamma0 = 10.0 ** (cfg.gamma0_db / 10.0)
    pair_gain = zeta_rd * zeta_sr  # second moment of one amplitude product
    # Keep N as the final factor so doubling N scales both exactly.
    mu_d = (math.pi / 4.0) * math.sqrt(pair_gain) * cfg.n_elements
    sigma2_d = ((16.0 - math.pi**2) / 16.0) * pair_gain * cfg.n_elements
    z = mu_d / math.sqrt(sigma2_d)
    xi = math.exp(-log_q(-z))  # 1 / Q(-z) without forming 1 - Q(z)
    lambda_e = (zeta_re * zeta_sr * gamma0) * cfg.n_elements
    return CltParams(
        mu_d=mu_d,
        sigma2_d=sigma2_d,
        xi=xi,
        lambda_e=lambda_e,
        gamma0=gamma0,
        rho=rho_of(cfg.r_th),
        zeta_sr=zeta_sr,
        zeta_rd=zeta_rd,
        zeta_re=zeta_re,
    )
