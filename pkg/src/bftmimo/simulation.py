"""Batched Monte Carlo engine shared by the rate and validation code.

Trial ``t`` always consumes the stream ``RngStream(master_seed, t)`` in the
order channel, uplink noise, projected downlink pilot noise. Trials are grouped
in fixed-size chunks that may be spread over worker threads; since every trial
owns its stream and per-trial outputs are reassembled in trial order, the
results do not depend on the number of workers.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import SystemParams, mmse_combine
from .linalg import RngStream, draw_cn_matrix, frob_norm_sq, trace
from .precoding import PrecoderKind, precode
from .training import effective_gains, estimate_gains

__all__ = ["CHUNK_SIZE", "TrialBatch", "draw_trial_noise", "simulate_trials"]

CHUNK_SIZE = 1024


@dataclass(frozen=True)
class TrialBatch:
    """Per-trial outputs for one precoder, stacked along axis 0."""

    kind: PrecoderKind
    a_true: np.ndarray
    y_tilde: np.ndarray
    a_hat: np.ndarray
    power: np.ndarray
    gram_trace: np.ndarray | None
    h_hat_sample: np.ndarray
    err_sample: np.ndarray

    @property
    def n_trials(self) -> int:
        return self.a_true.shape[0]

    @property
    def eps(self) -> np.ndarray:
        return self.a_true - self.a_hat


def draw_trial_noise(params: SystemParams, master_seed: int, start: int, stop: int):
    """Stacked ``(H, N_u, N_p)`` for trials ``start..stop-1``."""
    M, K = params.M, params.K
    n = stop - start
    H = np.empty((n, M, K), dtype=np.complex128)
    N_u = np.empty_like(H)
    N_p = np.empty((n, K, K), dtype=np.complex128)
    for j, t in enumerate(range(start, stop)):
        gen = RngStream(master_seed, t).generator()
        H[j] = draw_cn_matrix(gen, M, K)
        N_u[j] = draw_cn_matrix(gen, M, K)
        N_p[j] = draw_cn_matrix(gen, K, K)
    return H, N_u, N_p


def _run_chunk(kinds, params, master_seed, start, stop, perfect_csi):
    H, N_u, N_p = draw_trial_noise(params, master_seed, start, stop)
    H_hat = H.copy() if perfect_csi else mmse_combine(H, N_u, params)
    scale = math.sqrt(params.downlink_snr)
    out = {}
    for kind in kinds:
        W, gram_inv = precode(kind, H_hat, params)
        A = effective_gains(H, W)
        Y = scale * A + N_p
        out[kind] = dict(
            a_true=A,
            y_tilde=Y,
            a_hat=estimate_gains(kind, Y, params),
            power=frob_norm_sq(W),
            gram_trace=None if gram_inv is None else trace(gram_inv).real,
            h_hat_sample=H_hat[:, 0, 0],
            err_sample=(H - H_hat)[:, 0, 0],
        )
    return out


def simulate_trials(kinds, params: SystemParams, n_trials: int, master_seed: int,
                    workers: int = 1, perfect_csi: bool = False) -> dict[PrecoderKind, TrialBatch]:
    """Run ``n_trials`` coherence intervals for each precoder in ``kinds``.

    All precoders see the same channel and noise realisations. With
    ``perfect_csi`` the BS uses ``H`` itself instead of its estimate (test hook).
    """
    kinds = [PrecoderKind(k) for k in kinds]
    if PrecoderKind.ZF in kinds:
        params.require_zf()
    if n_trials < 1:
        raise ValueError("n_trials must be positive")
    bounds = [(s, min(s + CHUNK_SIZE, n_trials)) for s in range(0, n_trials, CHUNK_SIZE)]

    def job(b):
        return _run_chunk(kinds, params, master_seed, b[0], b[1], perfect_csi)

    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(job, bounds))
    else:
        chunks = [job(b) for b in bounds]

    result = {}
    for kind in kinds:
        fields = {}
        for name in chunks[0][kind]:
            parts = [c[kind][name] for c in chunks]
            fields[name] = None if parts[0] is None else np.concatenate(parts)
        result[kind] = TrialBatch(kind=kind, **fields)
    return result
