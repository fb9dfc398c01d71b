"""MRT and ZF precoders with expectation-based power normalisation."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .channel import SystemParams
from .linalg import conj, invert_small, matmul, transpose

__all__ = [
    "PrecoderKind",
    "PrecodingMatrix",
    "alpha_mrt",
    "alpha_zf",
    "build_precoder",
    "precode",
]


class PrecoderKind(str, enum.Enum):
    MRT = "MRT"
    ZF = "ZF"


@dataclass(frozen=True)
class PrecodingMatrix:
    W: np.ndarray
    alpha: float
    kind: PrecoderKind


def alpha_mrt(params: SystemParams) -> float:
    """Scale making E{tr(W W^H)} = 1 for W = alpha * conj(H_hat)."""
    r = params.uplink_snr
    return math.sqrt((r + 1.0) / (params.M * params.K * r))


def alpha_zf(params: SystemParams) -> float:
    """Scale making E{tr(W W^H)} = 1 for the ZF precoder. Needs M > K."""
    params.require_zf()
    r = params.uplink_snr
    return math.sqrt((params.M - params.K) * r / (params.K * (r + 1.0)))


def alpha_for(kind, params: SystemParams) -> float:
    kind = PrecoderKind(kind)
    return alpha_mrt(params) if kind is PrecoderKind.MRT else alpha_zf(params)


def precode(kind, H_hat: np.ndarray, params: SystemParams):
    """Precoding matrices for ``H_hat`` of shape ``(..., M, K)``.

    Returns ``(W, gram_inverse)``; ``gram_inverse`` is ``None`` for MRT.
    """
    kind = PrecoderKind(kind)
    alpha = alpha_for(kind, params)
    H_conj = conj(H_hat)
    if kind is PrecoderKind.MRT:
        return alpha * H_conj, None
    gram_inv = invert_small(matmul(transpose(H_hat), H_conj))
    return alpha * matmul(H_conj, gram_inv), gram_inv


def build_precoder(kind, H_hat: np.ndarray, params: SystemParams) -> PrecodingMatrix:
    H_hat = np.asarray(H_hat)
    if H_hat.shape != (params.M, params.K):
        raise ValueError(f"H_hat must be {params.M}x{params.K}, got {H_hat.shape}")
    kind = PrecoderKind(kind)
    W, _ = precode(kind, H_hat, params)
    return PrecodingMatrix(W, alpha_for(kind, params), kind)
