"""System parameters, i.i.d. Rayleigh channel and its uplink MMSE estimate."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import draw_cn_matrix

__all__ = [
    "ChannelPair",
    "IndependenceReport",
    "SystemParams",
    "check_estimate_independence",
    "draw_channel",
    "uplink_estimate",
]


@dataclass(frozen=True)
class SystemParams:
    """Scenario scalars.

    ``M`` BS antennas, ``K`` single-antenna users, coherence interval ``T``
    symbols, ``tau_u``/``tau_d`` uplink/downlink pilot lengths, ``p_u``/``p_d``
    uplink pilot and downlink powers (linear SNR).
    """

    M: int
    K: int
    T: int
    tau_u: int
    tau_d: int
    p_u: float
    p_d: float

    def __post_init__(self):
        problems = []
        if self.M < 1:
            problems.append(f"M must be >= 1 (got {self.M})")
        if self.K < 1:
            problems.append(f"K must be >= 1 (got {self.K})")
        if self.tau_u < self.K:
            problems.append(f"tau_u must be >= K (got tau_u={self.tau_u}, K={self.K})")
        if self.tau_d < self.K:
            problems.append(f"tau_d must be >= K (got tau_d={self.tau_d}, K={self.K})")
        if self.T < self.tau_u + self.tau_d:
            problems.append(
                f"T must be >= tau_u + tau_d (got T={self.T}, "
                f"tau_u + tau_d={self.tau_u + self.tau_d})"
            )
        if not self.p_u > 0:
            problems.append(f"p_u must be > 0 (got {self.p_u})")
        if not self.p_d > 0:
            problems.append(f"p_d must be > 0 (got {self.p_d})")
        if problems:
            raise ValueError("invalid SystemParams: " + "; ".join(problems))

    @classmethod
    def paper_defaults(cls, M: int, K: int, T: int = 200, p_d: float = 100.0, p_u: float = 1.0):
        """tau_u = tau_d = K and p_u = 0 dB, as used throughout the figures."""
        return cls(M=M, K=K, T=T, tau_u=K, tau_d=K, p_u=p_u, p_d=p_d)

    @property
    def uplink_snr(self) -> float:
        """Total uplink training energy ``tau_u * p_u``."""
        return self.tau_u * self.p_u

    @property
    def downlink_snr(self) -> float:
        """Total downlink training energy ``tau_d * p_d``."""
        return self.tau_d * self.p_d

    @property
    def est_var(self) -> float:
        r = self.uplink_snr
        return r / (r + 1.0)

    @property
    def err_var(self) -> float:
        return 1.0 / (self.uplink_snr + 1.0)

    def require_zf(self) -> None:
        if self.M <= self.K:
            raise ValueError(f"ZF requires M > K (got M={self.M}, K={self.K})")


@dataclass(frozen=True)
class ChannelPair:
    H: np.ndarray
    H_hat: np.ndarray
    est_var: float
    err_var: float

    @property
    def error(self) -> np.ndarray:
        return self.H - self.H_hat


def draw_channel(rng, params: SystemParams) -> np.ndarray:
    """M x K channel with i.i.d. CN(0, 1) entries."""
    return draw_cn_matrix(rng, params.M, params.K, 1.0)


def mmse_combine(H: np.ndarray, N_u: np.ndarray, params: SystemParams) -> np.ndarray:
    r = params.uplink_snr
    return (r / (r + 1.0)) * H + (math.sqrt(r) / (r + 1.0)) * N_u


def uplink_estimate(rng, H: np.ndarray, params: SystemParams) -> ChannelPair:
    """MMSE estimate of ``H`` from orthogonal uplink pilots.

    The despread pilot observation is synthesised with a fresh noise matrix
    ``N_u`` drawn from ``rng``; the estimate is then formed explicitly.
    """
    H = np.asarray(H)
    if H.shape != (params.M, params.K):
        raise ValueError(f"H must be {params.M}x{params.K}, got {H.shape}")
    N_u = draw_cn_matrix(rng, params.M, params.K, 1.0)
    return ChannelPair(H, mmse_combine(H, N_u, params), params.est_var, params.err_var)


@dataclass(frozen=True)
class IndependenceReport:
    correlation: complex
    std_error: float
    n_samples: int

    @property
    def within_3se(self) -> bool:
        return abs(self.correlation) <= 3.0 * self.std_error


def check_estimate_independence(h_hat, err, min_samples: int = 10_000) -> IndependenceReport:
    """Empirical cross-correlation E{h_hat * conj(err)} with its standard error.

    ``h_hat`` and ``err`` are paired samples (any shape, flattened together).
    """
    h_hat = np.asarray(h_hat).ravel()
    err = np.asarray(err).ravel()
    if h_hat.shape != err.shape:
        raise ValueError("h_hat and err must hold the same number of samples")
    n = h_hat.size
    if n < min_samples:
        raise ValueError(f"need at least {min_samples} paired samples, got {n}")
    prod = h_hat * np.conj(err)
    mean = complex(np.mean(prod))
    se = math.sqrt(float(np.sum(np.abs(prod - mean) ** 2)) / (n - 1) / n)
    return IndependenceReport(mean, se, n)
