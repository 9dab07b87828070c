"""Physical Monte Carlo simulation of the multi-user RIS downlink.

Unlike the analytic chain, nothing here relies on the Gaussian amplitude
model or the destination/eavesdropper independence assumption: channels are
drawn as the actual complex fading coefficients (or exact distributional
reductions of them) and outages are counted.

Reproducibility contract: all randomness comes from counter-based streams
keyed by (seed, chunk-of-slots, link tag), so the outage count for a given
(seed, trials, scheme, mode) is bit-identical no matter how many workers
split the chunks or in which order they finish.

Two sampling modes exist.  ``physical`` shares the single source-to-surface
draw between the scheduled user and the eavesdropper within a slot, which is
the true model.  ``independent`` gives the eavesdropper path a fresh
source-to-surface draw, matching the independence assumption the analytic
route makes; comparing the two quantifies that assumption.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ContractError, DomainError
from .sysmodel import SystemConfig, derive_clt_params

#: Slots per independently-seeded chunk; fixed so that worker count and
#: total trial count never change which stream a slot draws from.
CHUNK_SLOTS = 1 << 14

_TAG_SLOT = 0  # single-slot sampling helper
_TAG_DEST_SR = 1  # source-to-surface powers shared by the legitimate links
_TAG_DEST_RD = 2  # surface-to-user links
_TAG_EAV = 3  # eavesdropper combining draw
_TAG_EAV_SR = 4  # fresh source-to-surface powers (independent mode only)

_WILSON_Z = 1.959963984540054  # two-sided 95%

SCHEMES = ("OUS", "NOMA_BU", "NOMA_WU")
MODES = ("physical", "independent")


def _check_seed(seed: int) -> int:
    if not 0 <= seed < 2**64:
        raise DomainError(f"seed must be an integer in [0, 2^64), got {seed}")
    return seed


def _rng(seed: int, block: int, tag: int) -> np.random.Generator:
    key = np.array([seed, (block << 4) | tag], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True)
class ChannelRealization:
    """One draw of every fading coefficient for one time slot.

    ``h_sr`` has shape (N,), ``h_rd`` shape (N, M), ``h_re`` shape (N,);
    all entries are zero-mean circularly-symmetric complex Gaussians whose
    second moment equals the linear path gain of the respective link.
    """

    h_sr: np.ndarray
    h_rd: np.ndarray
    h_re: np.ndarray


@dataclass(frozen=True)
class SlotOutcome:
    """Per-slot scheduling result (user indices are 0-based)."""

    selected_user: int
    gamma_d_star: float
    gamma_e: float
    secrecy_rate: float
    outage: bool


@dataclass(frozen=True)
class NomaSlot:
    """Both per-user outcomes of one NOMA-pair slot plus the chosen split."""

    bu: SlotOutcome
    wu: SlotOutcome
    a_bu: float


@dataclass(frozen=True)
class McEstimate:
    """Outage-count estimate with a 95% Wilson interval."""

    trials: int
    outages: int
    sop_hat: float
    ci_low: float
    ci_high: float
    seed: int

    @property
    def stderr(self) -> float:
        """One Wilson standard error (interval half-width over z)."""
        return (self.ci_high - self.ci_low) / (2.0 * _WILSON_Z)


def _wilson(outages: int, trials: int, seed: int) -> McEstimate:
    n = trials
    p = outages / n
    z2 = _WILSON_Z**2
    denom = 1.0 + z2 / n
    center = (p + z2 / (2.0 * n)) / denom
    half = _WILSON_Z * math.sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom
    return McEstimate(
        trials=n,
        outages=outages,
        sop_hat=p,
        ci_low=max(0.0, center - half),
        ci_high=min(1.0, center + half),
        seed=seed,
    )


def realization_rng(seed: int, slot: int) -> np.random.Generator:
    """Counter-based stream for one explicitly indexed slot."""
    return _rng(seed, slot, _TAG_SLOT)


def _complex_gaussian(rng, shape, gain: float) -> np.ndarray:
    z = rng.standard_normal(shape + (2,))
    return (z[..., 0] + 1j * z[..., 1]) * math.sqrt(gain / 2.0)


def sample_realization(cfg: SystemConfig, rng: np.random.Generator) -> ChannelRealization:
    """Draw one slot's worth of fading coefficients.

    Coefficients come out in a fixed order (source-surface, surface-users,
    surface-eavesdropper) so a given stream state always yields the same
    realization.
    """
    p = derive_clt_params(cfg)
    n, m = cfg.n_elements, cfg.n_users
    return ChannelRealization(
        h_sr=_complex_gaussian(rng, (n,), p.zeta_sr),
        h_rd=_complex_gaussian(rng, (n, m), p.zeta_rd),
        h_re=_complex_gaussian(rng, (n,), p.zeta_re),
    )


def _secrecy_rate(gamma_d: float, gamma_e: float) -> float:
    return max(math.log2((1.0 + gamma_d) / (1.0 + gamma_e)), 0.0)


def ous_slot(cfg: SystemConfig, realization: ChannelRealization) -> SlotOutcome:
    """Schedule the best user and evaluate the slot's secrecy outcome.

    The surface phases are aligned to the selected user, which turns its
    destination SNR into the squared sum of amplitude products; the
    eavesdropper sees those same phases applied to its own (unaligned)
    channel.  Ties in the selection break toward the lowest user index.
    """
    p = derive_clt_params(cfg)
    amps = np.abs(realization.h_rd) * np.abs(realization.h_sr)[:, None]
    sums = amps.sum(axis=0)
    best = int(np.argmax(sums))
    gamma_d = p.gamma0 * sums[best] ** 2
    theta = -(np.angle(realization.h_sr) + np.angle(realization.h_rd[:, best]))
    g_e = np.sum(realization.h_re * np.exp(1j * theta) * realization.h_sr)
    gamma_e = p.gamma0 * abs(g_e) ** 2
    rate = _secrecy_rate(gamma_d, gamma_e)
    return SlotOutcome(
        selected_user=best,
        gamma_d_star=float(gamma_d),
        gamma_e=float(gamma_e),
        secrecy_rate=rate,
        outage=rate < cfg.r_th,
    )


def _power_grid(power_grid_size: int) -> np.ndarray:
    # Strong-user fractions strictly inside (0, 1/2): the weak user always
    # keeps the larger share and the boundary split is excluded.
    i = np.arange(1, power_grid_size + 1, dtype=float)
    return i / (2.0 * (power_grid_size + 1))


def noma_slot(
    cfg: SystemConfig,
    realization: ChannelRealization,
    power_grid_size: int = 99,
) -> NomaSlot:
    """Run one slot of the two-user NOMA benchmark.

    The pair is the best user (surface phases aligned to it, exactly as in
    the opportunistic scheme) and the worst user under those same phases.
    The power split is picked by a grid search maximizing the instantaneous
    legitimate sum rate subject to the strong user getting the smaller
    share.  Decoding order everywhere (eavesdropper included): weak-user
    message first, treating the strong user's signal as interference; the
    strong user cancels it before decoding its own.
    """
    if cfg.n_users < 2:
        raise ContractError(f"NOMA pairing needs n_users >= 2, got {cfg.n_users}")
    p = derive_clt_params(cfg)
    amps = np.abs(realization.h_rd) * np.abs(realization.h_sr)[:, None]
    sums = amps.sum(axis=0)
    bu = int(np.argmax(sums))
    theta = -(np.angle(realization.h_sr) + np.angle(realization.h_rd[:, bu]))
    rot = np.exp(1j * theta) * realization.h_sr
    g_all = rot @ realization.h_rd  # aligned effective channel of every user
    gamma_all = p.gamma0 * np.abs(g_all) ** 2
    masked = gamma_all.copy()
    masked[bu] = np.inf
    wu = int(np.argmin(masked))
    gamma_bu = p.gamma0 * sums[bu] ** 2
    gamma_wu = float(gamma_all[wu])
    g_e = np.sum(realization.h_re * rot)
    gamma_e = p.gamma0 * abs(g_e) ** 2

    grid = _power_grid(power_grid_size)
    rate_bu_g = np.log2(1.0 + grid * gamma_bu)
    rate_wu_g = np.log2(1.0 + (1.0 - grid) * gamma_wu / (grid * gamma_wu + 1.0))
    a_bu = float(grid[int(np.argmax(rate_bu_g + rate_wu_g))])

    rate_bu = math.log2(1.0 + a_bu * gamma_bu)
    eav_bu = math.log2(1.0 + a_bu * gamma_e)
    sinr_wu = (1.0 - a_bu) * gamma_wu / (a_bu * gamma_wu + 1.0)
    rate_wu = math.log2(1.0 + sinr_wu)
    eav_wu = math.log2(1.0 + (1.0 - a_bu) * gamma_e / (a_bu * gamma_e + 1.0))
    cs_bu = max(rate_bu - eav_bu, 0.0)
    cs_wu = max(rate_wu - eav_wu, 0.0)
    return NomaSlot(
        bu=SlotOutcome(
            selected_user=bu,
            gamma_d_star=float(a_bu * gamma_bu),
            gamma_e=float(a_bu * gamma_e),
            secrecy_rate=cs_bu,
            outage=cs_bu < cfg.r_th,
        ),
        wu=SlotOutcome(
            selected_user=wu,
            gamma_d_star=float(sinr_wu),
            gamma_e=float((1.0 - a_bu) * gamma_e / (a_bu * gamma_e + 1.0)),
            secrecy_rate=cs_wu,
            outage=cs_wu < cfg.r_th,
        ),
        a_bu=a_bu,
    )


# ---------------------------------------------------------------------------
# Vectorized chunk kernels.
#
# These apply two exact distributional reductions to cut the per-slot draw
# count (no approximation is involved; both follow from the rotation
# invariance of circularly-symmetric Gaussians):
#   * the source-surface phases cancel everywhere, so only the per-element
#     amplitudes (root-exponential powers) are drawn;
#   * conditioned on everything else, the eavesdropper's combined channel is
#     complex Gaussian with power proportional to the summed source-surface
#     element powers, so its SNR is one exponential draw times that sum
#     (or times a fresh gamma-distributed sum in independent mode).
# The surface-to-user coefficients stay fully complex for the NOMA kernel
# because the worst-user selection couples their amplitudes and phases.
# ---------------------------------------------------------------------------


def _eav_snr(p, g_sr_powers, seed, block, size, independent):
    if independent:
        s2 = p.zeta_sr * _rng(seed, block, _TAG_EAV_SR).standard_gamma(
            g_sr_powers.shape[1], size=size
        )
    else:
        s2 = p.zeta_sr * g_sr_powers.sum(axis=1)
    e = _rng(seed, block, _TAG_EAV).standard_exponential(size)
    return p.gamma0 * p.zeta_re * s2 * e


def _ous_chunk(cfg, p, seed, block, size, independent) -> int:
    n, m = cfg.n_elements, cfg.n_users
    g_sr = _rng(seed, block, _TAG_DEST_SR).standard_exponential((size, n))
    g_rd = _rng(seed, block, _TAG_DEST_RD).standard_exponential((size, n, m))
    sums = np.matmul(np.sqrt(g_sr)[:, None, :], np.sqrt(g_rd))[:, 0, :]
    best = sums.max(axis=1)
    gamma_d = p.gamma0 * p.zeta_rd * p.zeta_sr * best**2
    gamma_e = _eav_snr(p, g_sr, seed, block, size, independent)
    return int(np.count_nonzero(gamma_d < p.rho * gamma_e + (p.rho - 1.0)))


def _noma_chunk(cfg, p, seed, block, size, independent, power_grid_size):
    n, m = cfg.n_elements, cfg.n_users
    g_sr = _rng(seed, block, _TAG_DEST_SR).standard_exponential((size, n))
    sr_amp = np.sqrt(p.zeta_sr * g_sr)
    z = _rng(seed, block, _TAG_DEST_RD).standard_normal((size, n, m, 2))
    h_rd = (z[..., 0] + 1j * z[..., 1]) * math.sqrt(p.zeta_rd / 2.0)
    sums = np.matmul(sr_amp[:, None, :], np.abs(h_rd))[:, 0, :]
    bu = np.argmax(sums, axis=1)
    rows = np.arange(size)
    gamma_bu = p.gamma0 * sums[rows, bu] ** 2
    h_bu = np.take_along_axis(h_rd, bu[:, None, None], axis=2)[:, :, 0]
    rot = (np.conj(h_bu) / np.abs(h_bu)) * sr_amp
    g_all = np.matmul(rot[:, None, :], h_rd)[:, 0, :]
    gamma_all = p.gamma0 * np.abs(g_all) ** 2
    gamma_all[rows, bu] = np.inf
    wu = np.argmin(gamma_all, axis=1)
    gamma_wu = gamma_all[rows, wu]
    gamma_e = _eav_snr(p, g_sr, seed, block, size, independent)

    grid = _power_grid(power_grid_size)
    rate_bu_g = np.log2(1.0 + grid[None, :] * gamma_bu[:, None])
    gw = gamma_wu[:, None]
    rate_wu_g = np.log2(1.0 + (1.0 - grid[None, :]) * gw / (grid[None, :] * gw + 1.0))
    a = grid[np.argmax(rate_bu_g + rate_wu_g, axis=1)]

    cs_bu = np.log2(1.0 + a * gamma_bu) - np.log2(1.0 + a * gamma_e)
    cs_wu = np.log2(1.0 + (1.0 - a) * gamma_wu / (a * gamma_wu + 1.0)) - np.log2(
        1.0 + (1.0 - a) * gamma_e / (a * gamma_e + 1.0)
    )
    bu_out = int(np.count_nonzero(np.maximum(cs_bu, 0.0) < cfg.r_th))
    wu_out = int(np.count_nonzero(np.maximum(cs_wu, 0.0) < cfg.r_th))
    # Full-power outcome of the same realizations: the opportunistic scheme
    # on identical draws, for paired scheme comparisons.
    ous_out = int(
        np.count_nonzero(gamma_bu < p.rho * gamma_e + (p.rho - 1.0))
    )
    return bu_out, wu_out, ous_out


def _chunks(trials: int):
    block = 0
    done = 0
    while done < trials:
        size = min(CHUNK_SLOTS, trials - done)
        yield block, size
        block += 1
        done += size


def _run_chunks(fn, trials: int, workers: int):
    if workers <= 1:
        return [fn(block, size) for block, size in _chunks(trials)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, block, size) for block, size in _chunks(trials)]
        return [f.result() for f in futures]


def estimate_sop(
    cfg: SystemConfig,
    scheme: str,
    trials: int,
    seed: int,
    mode: str = "physical",
    workers: int = 1,
    power_grid_size: int = 99,
) -> McEstimate:
    """Monte Carlo SOP estimate for one scheme at one operating point."""
    if scheme not in SCHEMES:
        raise DomainError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")
    if mode not in MODES:
        raise DomainError(f"unknown mode {mode!r}; expected one of {MODES}")
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    _check_seed(seed)
    if scheme == "OUS":
        p = derive_clt_params(cfg)
        independent = mode == "independent"
        counts = _run_chunks(
            lambda block, size: _ous_chunk(cfg, p, seed, block, size, independent),
            trials,
            workers,
        )
        return _wilson(sum(counts), trials, seed)
    bu, wu = estimate_noma_pair(
        cfg, trials, seed, mode=mode, workers=workers, power_grid_size=power_grid_size
    )
    return bu if scheme == "NOMA_BU" else wu


def estimate_noma_pair(
    cfg: SystemConfig,
    trials: int,
    seed: int,
    mode: str = "physical",
    workers: int = 1,
    power_grid_size: int = 99,
) -> tuple[McEstimate, McEstimate]:
    """Both NOMA users' SOP estimates from one shared simulation pass."""
    if mode not in MODES:
        raise DomainError(f"unknown mode {mode!r}; expected one of {MODES}")
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    _check_seed(seed)
    if cfg.n_users < 2:
        raise ContractError(f"NOMA pairing needs n_users >= 2, got {cfg.n_users}")
    p = derive_clt_params(cfg)
    independent = mode == "independent"
    counts = _run_chunks(
        lambda block, size: _noma_chunk(
            cfg, p, seed, block, size, independent, power_grid_size
        ),
        trials,
        workers,
    )
    bu_total = sum(c[0] for c in counts)
    wu_total = sum(c[1] for c in counts)
    return _wilson(bu_total, trials, seed), _wilson(wu_total, trials, seed)


def estimate_schemes_paired(
    cfg: SystemConfig,
    trials: int,
    seed: int,
    mode: str = "physical",
    workers: int = 1,
    power_grid_size: int = 99,
) -> dict[str, McEstimate]:
    """OUS, NOMA-BU and NOMA-WU estimates from the same channel draws.

    Pairing removes the sampling noise from scheme comparisons: on identical
    realizations the full-power scheduled user can only do at least as well
    as its power-sharing NOMA counterpart, so ordering checks become exact
    rather than statistical.
    """
    if mode not in MODES:
        raise DomainError(f"unknown mode {mode!r}; expected one of {MODES}")
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    _check_seed(seed)
    if cfg.n_users < 2:
        raise ContractError(f"NOMA pairing needs n_users >= 2, got {cfg.n_users}")
    p = derive_clt_params(cfg)
    independent = mode == "independent"
    counts = _run_chunks(
        lambda block, size: _noma_chunk(
            cfg, p, seed, block, size, independent, power_grid_size
        ),
        trials,
        workers,
    )
    return {
        "NOMA_BU": _wilson(sum(c[0] for c in counts), trials, seed),
        "NOMA_WU": _wilson(sum(c[1] for c in counts), trials, seed),
        "OUS": _wilson(sum(c[2] for c in counts), trials, seed),
    }


def sample_gamma_e(
    cfg: SystemConfig,
    n_samples: int,
    seed: int,
    mode: str = "physical",
) -> np.ndarray:
    """Eavesdropper SNR samples as the estimator kernels generate them."""
    if mode not in MODES:
        raise DomainError(f"unknown mode {mode!r}; expected one of {MODES}")
    _check_seed(seed)
    p = derive_clt_params(cfg)
    independent = mode == "independent"
    out = []
    for block, size in _chunks(n_samples):
        g_sr = _rng(seed, block, _TAG_DEST_SR).standard_exponential(
            (size, cfg.n_elements)
        )
        out.append(_eav_snr(p, g_sr, seed, block, size, independent))
    return np.concatenate(out)
