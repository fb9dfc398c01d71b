"""Achievable-rate lower bounds, Monte Carlo expectations and spectral efficiency."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .channel import SystemParams
from .moments import gain_moments
from .precoding import PrecoderKind
from .simulation import simulate_trials

__all__ = [
    "RateMode",
    "RateResult",
    "SpectralEfficiency",
    "baseline_rate_per_user",
    "bft_rates",
    "genie_rates",
    "monte_carlo_rate",
    "monte_carlo_rates",
    "rate_term_bft",
    "rate_term_genie",
    "se_baseline",
    "se_bft",
    "spectral_efficiency",
]

MIN_TRIALS = 100


class RateMode(str, enum.Enum):
    BFT_MRT = "BFT_MRT"
    BFT_ZF = "BFT_ZF"
    GENIE_MRT = "GENIE_MRT"
    GENIE_ZF = "GENIE_ZF"
    BASELINE_MRT = "BASELINE_MRT"
    BASELINE_ZF = "BASELINE_ZF"

    @property
    def scheme(self) -> str:
        return self.value.split("_")[0]

    @property
    def kind(self) -> PrecoderKind:
        return PrecoderKind(self.value.split("_")[1])

    @classmethod
    def of(cls, scheme: str, kind) -> "RateMode":
        return cls(f"{scheme}_{PrecoderKind(kind).value}")


@dataclass(frozen=True)
class RateResult:
    """Per-user ergodic rates (bits/channel use) with Monte Carlo standard errors.

    ``sum_rate_se`` is computed from the per-trial sum over users, so it keeps
    the correlation between users of the same trial.
    """

    mode: RateMode
    per_user_rate: np.ndarray
    standard_error: np.ndarray
    n_trials: int
    sum_rate: float
    sum_rate_se: float


@dataclass(frozen=True)
class SpectralEfficiency:
    value: float
    prelog: float
    stderr: float = 0.0


def _interference(power: np.ndarray) -> np.ndarray:
    """Sum over i != k of ``power[..., k, i]``."""
    diag = np.diagonal(power, axis1=-2, axis2=-1)
    return power.sum(axis=-1) - diag


def bft_rates(a_hat: np.ndarray, eps_var_sum: float, p_d: float) -> np.ndarray:
    """Rate-bound integrand for every user; ``a_hat`` has shape ``(..., K, K)``."""
    g = np.abs(a_hat) ** 2
    signal = p_d * np.diagonal(g, axis1=-2, axis2=-1)
    denom = p_d * eps_var_sum + p_d * _interference(g) + 1.0
    return np.log2(1.0 + signal / denom)


def genie_rates(a_true: np.ndarray, p_d: float) -> np.ndarray:
    g = np.abs(a_true) ** 2
    signal = p_d * np.diagonal(g, axis1=-2, axis2=-1)
    return np.log2(1.0 + signal / (p_d * _interference(g) + 1.0))


def _check_user(a: np.ndarray, k: int) -> None:
    if not 0 <= k < a.shape[-1]:
        raise IndexError(f"user index {k} out of range for K={a.shape[-1]}")


def rate_term_bft(a_hat, eps_var_sum: float, k: int, params: SystemParams) -> float:
    """Single-realisation integrand for user ``k``.

    ``a_hat`` is user k's length-K estimate vector or the full K x K matrix
    (row k used). ``eps_var_sum`` is K times the per-gain error variance.
    """
    a_hat = np.atleast_2d(np.asarray(a_hat, dtype=complex))
    row = a_hat[0] if a_hat.shape[0] == 1 else a_hat[k]
    _check_user(row, k)
    g = np.abs(row) ** 2
    p = params.p_d
    interf = g.sum() - g[k]
    return float(np.log2(1.0 + p * g[k] / (p * eps_var_sum + p * interf + 1.0)))


def rate_term_genie(a_true, k: int, params: SystemParams) -> float:
    a_true = np.atleast_2d(np.asarray(a_true, dtype=complex))
    row = a_true[0] if a_true.shape[0] == 1 else a_true[k]
    _check_user(row, k)
    g = np.abs(row) ** 2
    p = params.p_d
    return float(np.log2(1.0 + p * g[k] / (p * (g.sum() - g[k]) + 1.0)))


def baseline_rate_per_user(kind, params: SystemParams) -> float:
    """Per-user rate when users detect with E{a_kk} and no downlink pilots."""
    r = params.uplink_snr
    p = params.p_d
    M, K = params.M, params.K
    if PrecoderKind(kind) is PrecoderKind.MRT:
        sinr = (M / K) * r * p / ((p + 1.0) * (r + 1.0))
    else:
        params.require_zf()
        sinr = ((M - K) / K) * r * p / (r + p + 1.0)
    return math.log2(1.0 + sinr)


def _summarise(mode: RateMode, samples: np.ndarray) -> RateResult:
    n = samples.shape[0]
    per_user = np.array([math.fsum(col) / n for col in samples.T])
    se = samples.std(axis=0, ddof=1) / math.sqrt(n)
    sums = samples.sum(axis=1)
    return RateResult(
        mode=mode,
        per_user_rate=per_user,
        standard_error=se,
        n_trials=n,
        sum_rate=math.fsum(sums) / n,
        sum_rate_se=float(sums.std(ddof=1) / math.sqrt(n)),
    )


def monte_carlo_rates(modes, params: SystemParams, n_trials: int, master_seed: int,
                      workers: int = 1, perfect_csi: bool = False) -> dict[RateMode, RateResult]:
    """Evaluate several modes on common channel and noise realisations."""
    modes = [RateMode(m) for m in modes]
    if n_trials < MIN_TRIALS:
        raise ValueError(f"n_trials must be >= {MIN_TRIALS}, got {n_trials}")
    kinds = sorted({m.kind for m in modes if m.scheme != "BASELINE"}, key=lambda k: k.value)
    batches = simulate_trials(kinds, params, n_trials, master_seed, workers, perfect_csi) if kinds else {}

    out = {}
    for mode in modes:
        if mode.scheme == "BASELINE":
            r = baseline_rate_per_user(mode.kind, params)
            out[mode] = RateResult(mode, np.full(params.K, r), np.zeros(params.K),
                                   n_trials, params.K * r, 0.0)
            continue
        batch = batches[mode.kind]
        if mode.scheme == "BFT":
            eps_sum = params.K * gain_moments(mode.kind, params).eps_var
            samples = bft_rates(batch.a_hat, eps_sum, params.p_d)
        else:
            samples = genie_rates(batch.a_true, params.p_d)
        out[mode] = _summarise(mode, samples)
    return out


def monte_carlo_rate(mode, params: SystemParams, n_trials: int, master_seed: int,
                     workers: int = 1) -> RateResult:
    return monte_carlo_rates([mode], params, n_trials, master_seed, workers)[RateMode(mode)]


def se_bft(result: RateResult, params: SystemParams) -> SpectralEfficiency:
    """Prelog-weighted sum rate for the trained (or genie) schemes."""
    if RateMode(result.mode).scheme == "BASELINE":
        raise ValueError("se_bft applies to BFT and GENIE results; use se_baseline")
    payload = params.T - params.tau_u - params.tau_d
    if payload < 0:
        raise ValueError("T must be >= tau_u + tau_d")
    prelog = payload / params.T
    return SpectralEfficiency(prelog * result.sum_rate, prelog, prelog * result.sum_rate_se)


def se_baseline(kind, params: SystemParams) -> SpectralEfficiency:
    prelog = (params.T - params.tau_u) / params.T
    return SpectralEfficiency(prelog * params.K * baseline_rate_per_user(kind, params), prelog)


def spectral_efficiency(result: RateResult, params: SystemParams) -> SpectralEfficiency:
    mode = RateMode(result.mode)
    if mode.scheme == "BASELINE":
        return se_baseline(mode.kind, params)
    return se_bft(result, params)
