"""Downlink beamforming training and per-element MMSE gain estimation.

The BS sends ``S_p = sqrt(tau_d p_d) Phi`` through the precoder; after
projecting the received block onto ``Phi^H`` user ``k`` holds a noisy copy of
its effective gains ``a_k = W^T h_k``. Each gain is estimated on its own from
the matching element of that statistic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import SystemParams
from .linalg import draw_cn_matrix, matmul, transpose
from .precoding import PrecoderKind

__all__ = [
    "GainVectors",
    "PilotMatrix",
    "build_phi",
    "effective_gains",
    "estimate_gains",
    "mmse_gain_generic",
    "mmse_gain_mrt",
    "mmse_gain_zf",
    "received_pilot_block",
    "synth_received_stat",
]


@dataclass(frozen=True)
class PilotMatrix:
    Phi: np.ndarray
    scale: float

    @property
    def S_p(self) -> np.ndarray:
        return self.scale * self.Phi


@dataclass(frozen=True)
class GainVectors:
    """Per-user gain quantities; row ``k`` of each K x K array belongs to user k."""

    a_true: np.ndarray
    y_tilde: np.ndarray
    a_hat: np.ndarray
    eps_var: np.ndarray


def build_phi(K: int, tau_d: int, p_d: float = 1.0) -> PilotMatrix:
    """Row-orthonormal K x tau_d pilot matrix: the first K rows of I_tau_d."""
    if tau_d < K:
        raise ValueError(f"tau_d must be >= K (got tau_d={tau_d}, K={K})")
    Phi = np.eye(K, tau_d, dtype=np.complex128)
    return PilotMatrix(Phi, math.sqrt(tau_d * p_d))


def effective_gains(H: np.ndarray, W: np.ndarray) -> np.ndarray:
    """``A = H^T W``; ``A[..., k, i] = h_k^T w_i``."""
    return matmul(transpose(H), W)


def synth_received_stat(rng, H: np.ndarray, W: np.ndarray, params: SystemParams,
                        noise: np.ndarray | None = None) -> np.ndarray:
    """Projected received pilots ``sqrt(tau_d p_d) H^T W + N``, K x K.

    ``noise`` overrides the CN(0, 1) draw from ``rng`` (pass zeros to get the
    noiseless statistic).
    """
    A = effective_gains(H, W)
    if noise is None:
        noise = draw_cn_matrix(rng, A.shape[-2], A.shape[-1], 1.0)
    return math.sqrt(params.downlink_snr) * A + noise


def received_pilot_block(H: np.ndarray, W: np.ndarray, pilots: PilotMatrix,
                         noise: np.ndarray) -> np.ndarray:
    """Full K x tau_d received block ``H^T W S_p + N_p^T`` before projection."""
    return matmul(effective_gains(H, W), pilots.S_p) + noise


def mmse_gain_generic(y, mean, var, params: SystemParams):
    """Scalar MMSE estimate of a gain with prior ``mean`` and variance ``var``."""
    var = np.asarray(var, dtype=float)
    if np.any(~(var > 0)):
        raise ValueError("prior variance must be positive")
    s = math.sqrt(params.downlink_snr)
    return mean + (s * var / (params.downlink_snr * var + 1.0)) * (y - s * mean)


def _delta(i_equals_k):
    return np.asarray(i_equals_k, dtype=float)


def mmse_gain_mrt(y, i_equals_k, params: SystemParams):
    d = params.downlink_snr
    K = params.K
    r = params.uplink_snr
    prior = math.sqrt(r * params.M / (K * (r + 1.0)))
    return (math.sqrt(d) / (d + K)) * y + (K / (d + K)) * prior * _delta(i_equals_k)


def mmse_gain_zf(y, i_equals_k, params: SystemParams):
    params.require_zf()
    d = params.downlink_snr
    K = params.K
    r = params.uplink_snr
    denom = d + K * (r + 1.0)
    offset = math.sqrt(K * (params.M - K) * r * (r + 1.0)) / denom
    return (math.sqrt(d) / denom) * y + offset * _delta(i_equals_k)


def estimate_gains(kind, y_tilde: np.ndarray, params: SystemParams) -> np.ndarray:
    """Apply the closed-form estimator elementwise to ``(..., K, K)`` statistics."""
    eye = np.eye(y_tilde.shape[-1], dtype=bool)
    if PrecoderKind(kind) is PrecoderKind.MRT:
        return mmse_gain_mrt(y_tilde, eye, params)
    return mmse_gain_zf(y_tilde, eye, params)
