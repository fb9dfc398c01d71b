"""Closed-form moments of the effective gains and their empirical counterparts.

Besides the end results (mean, variance and estimation-error variance of
``a_ki``) the intermediate quantities of both derivations are exposed so each
step can be checked against simulation on its own.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import SystemParams
from .precoding import PrecoderKind, alpha_mrt, alpha_zf

__all__ = [
    "EmpiricalMoments",
    "GainMoments",
    "empirical_moments",
    "gain_moments",
    "mrt_gain_power_diag",
    "mrt_var_diag_two_ways",
    "moments_mrt",
    "moments_zf",
    "zf_expected_gram_inverse_trace",
    "zf_var_from_gram_trace",
]


@dataclass(frozen=True)
class GainMoments:
    mean_diag: float
    mean_offdiag: float
    var_: float
    eps_var: float

    def mean(self, i_equals_k: bool) -> float:
        return self.mean_diag if i_equals_k else self.mean_offdiag


def moments_mrt(params: SystemParams) -> GainMoments:
    r = params.uplink_snr
    K = params.K
    return GainMoments(
        mean_diag=math.sqrt(r * params.M / (K * (r + 1.0))),
        mean_offdiag=0.0,
        var_=1.0 / K,
        eps_var=1.0 / (params.downlink_snr + K),
    )


def moments_zf(params: SystemParams) -> GainMoments:
    r = params.uplink_snr
    K = params.K
    return GainMoments(
        mean_diag=alpha_zf(params),
        mean_offdiag=0.0,
        var_=1.0 / (K * (r + 1.0)),
        eps_var=1.0 / (params.downlink_snr + K * (r + 1.0)),
    )


def gain_moments(kind, params: SystemParams) -> GainMoments:
    if PrecoderKind(kind) is PrecoderKind.MRT:
        return moments_mrt(params)
    return moments_zf(params)


def mrt_gain_power_diag(params: SystemParams) -> float:
    """E{|a_kk|^2} under MRT, via the fourth moment E{||h_hat||^4} = s^2 M(M+1)."""
    r = params.uplink_snr
    M = params.M
    a2 = alpha_mrt(params) ** 2
    return a2 * (r / (r + 1.0)) ** 2 * M * (M + 1) + a2 * r / (r + 1.0) ** 2 * M


def mrt_var_diag_two_ways(params: SystemParams) -> tuple[float, float]:
    """``(1/K, E{|a_kk|^2} - E{a_kk}^2)``; the two must coincide."""
    direct = moments_mrt(params).var_
    via_power = mrt_gain_power_diag(params) - moments_mrt(params).mean_diag ** 2
    return direct, via_power


def zf_expected_gram_inverse_trace(params: SystemParams) -> float:
    """E{tr[(H_hat^T conj(H_hat))^-1]} for a complex Wishart Gram matrix."""
    params.require_zf()
    return params.K / ((params.M - params.K) * params.est_var)


def zf_var_from_gram_trace(params: SystemParams, gram_trace_mean: float) -> float:
    """Var(a_ki) under ZF given a value of E{tr(Gram^-1)}."""
    r = params.uplink_snr
    return alpha_zf(params) ** 2 / (r + 1.0) / params.K * gram_trace_mean


@dataclass(frozen=True)
class EmpiricalMoments:
    """Sample mean/variance with standard errors.

    For complex samples ``mean`` is complex and ``mean_se`` is the standard
    error of the complex mean, ``sqrt(E|x - mean|^2 / n)``.
    """

    n: int
    mean: complex | float
    mean_se: float
    variance: float
    variance_se: float

    def mean_within(self, expected, n_se: float = 3.0) -> bool:
        return abs(self.mean - expected) <= n_se * self.mean_se

    def variance_within(self, expected: float, n_se: float = 3.0) -> bool:
        return abs(self.variance - expected) <= n_se * self.variance_se


def empirical_moments(samples) -> EmpiricalMoments:
    x = np.asarray(samples).ravel()
    n = x.size
    if n < 2:
        raise ValueError(f"need at least 2 samples, got {n}")
    if np.iscomplexobj(x):
        mean = complex(math.fsum(x.real) / n, math.fsum(x.imag) / n)
    else:
        mean = math.fsum(x) / n
    dev2 = np.abs(x - mean) ** 2
    variance = math.fsum(dev2) / (n - 1)
    # Delta-method SE of the sample variance: sqrt(Var(|x - mean|^2) / n).
    variance_se = math.sqrt(float(np.var(dev2, ddof=1)) / n)
    return EmpiricalMoments(n, mean, math.sqrt(variance / n), variance, variance_se)
