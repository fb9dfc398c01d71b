"""Monte Carlo validation of the closed-form moments against simulation.

Every stochastic check compares an empirical statistic with its analytic value
using a band of three standard errors; deterministic identities use a fixed
numerical tolerance.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .channel import SystemParams, check_estimate_independence
from .moments import (
    GainMoments,
    empirical_moments,
    gain_moments,
    mrt_var_diag_two_ways,
    zf_var_from_gram_trace,
)
from .precoding import PrecoderKind
from .simulation import simulate_trials
from .training import mmse_gain_generic

__all__ = ["Check", "ValidationReport", "estimator_mismatch", "run_validate"]

N_SE = 3.0
POWER_BAND = 0.01
EXACT_TOL = 1e-12


@dataclass(frozen=True)
class Check:
    name: str
    expected: float
    observed: float
    band: float
    passed: bool


@dataclass
class ValidationReport:
    params: SystemParams
    n_trials: int
    master_seed: int
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "params": asdict(self.params),
            "n_trials": self.n_trials,
            "master_seed": self.master_seed,
            "passed": self.passed,
            "checks": [
                {"name": c.name, "expected": c.expected, "observed": c.observed,
                 "band": c.band, "pass": c.passed}
                for c in self.checks
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def add(self, name, expected, observed, band):
        expected, observed, band = float(expected), float(observed), float(band)
        self.checks.append(Check(name, expected, observed, band, abs(observed - expected) <= band))

    def add_mean(self, name, samples, expected):
        em = empirical_moments(samples)
        if np.iscomplexobj(samples):
            self.add(name, 0.0, abs(em.mean - expected), N_SE * em.mean_se)
        else:
            self.add(name, expected, em.mean, N_SE * em.mean_se)

    def add_variance(self, name, samples, expected):
        em = empirical_moments(samples)
        self.add(name, expected, em.variance, N_SE * em.variance_se)


def estimator_mismatch(kind, y_tilde: np.ndarray, a_hat: np.ndarray,
                       params: SystemParams, moments: GainMoments) -> float:
    """Largest relative gap between the closed-form estimates and the generic
    MMSE formula fed with the oracle moments."""
    K = params.K
    mean = np.where(np.eye(K, dtype=bool), moments.mean_diag, moments.mean_offdiag)
    generic = mmse_gain_generic(y_tilde, mean, moments.var_, params)
    scale = np.maximum(np.abs(generic), np.finfo(float).tiny)
    return float(np.max(np.abs(a_hat - generic) / scale))


def run_validate(params: SystemParams | None = None, n_trials: int = 100_000,
                 master_seed: int = 1, workers: int = 1,
                 moment_overrides: dict | None = None) -> ValidationReport:
    """Run every moment, power and identity check at ``params``.

    ``moment_overrides`` maps a precoder kind to a replacement
    :class:`GainMoments` oracle; it exists so tests can confirm that a wrong
    oracle is caught.
    """
    if params is None:
        params = SystemParams(M=50, K=5, T=200, tau_u=5, tau_d=5, p_u=1.0, p_d=100.0)
    overrides = {PrecoderKind(k): v for k, v in (moment_overrides or {}).items()}
    kinds = [PrecoderKind.MRT] + ([PrecoderKind.ZF] if params.M > params.K else [])
    batches = simulate_trials(kinds, params, n_trials, master_seed, workers)
    report = ValidationReport(params, n_trials, master_seed)

    first = batches[kinds[0]]
    h_hat, err = first.h_hat_sample, first.err_sample
    report.add_variance("channel.var_h", h_hat + err, 1.0)
    report.add_variance("channel.var_h_hat", h_hat, params.est_var)
    report.add_variance("channel.var_err", err, params.err_var)
    ind = check_estimate_independence(h_hat, err, min_samples=2)
    report.add("channel.corr_h_hat_err", 0.0, abs(ind.correlation), N_SE * ind.std_error)

    for kind in kinds:
        b = batches[kind]
        m = overrides.get(kind, gain_moments(kind, params))
        tag = kind.value.lower()
        eps = b.eps
        report.add(f"{tag}.power", 1.0, math.fsum(b.power) / b.n_trials, POWER_BAND)
        pairs = [("diag", 0, 0)] + ([("offdiag", 0, 1)] if params.K > 1 else [])
        for label, k, i in pairs:
            a = b.a_true[:, k, i]
            report.add_mean(f"{tag}.mean_{label}", a if label == "offdiag" else a.real,
                            m.mean(k == i))
            report.add_variance(f"{tag}.var_{label}", a, m.var_)
            report.add_mean(f"{tag}.eps_var_{label}", np.abs(eps[:, k, i]) ** 2, m.eps_var)
            report.add_mean(f"{tag}.corr_{label}", b.a_hat[:, k, i] * np.conj(eps[:, k, i]), 0.0)
        report.add(f"{tag}.estimator_equivalence", 0.0,
                   estimator_mismatch(kind, b.y_tilde, b.a_hat, params, m), EXACT_TOL)

    if PrecoderKind.MRT in kinds:
        direct, via_power = mrt_var_diag_two_ways(params)
        report.add("mrt.var_diag_identity", direct, via_power, EXACT_TOL * max(1.0, direct))
    if PrecoderKind.ZF in kinds:
        b = batches[PrecoderKind.ZF]
        expected = gain_moments(PrecoderKind.ZF, params).var_
        em = empirical_moments(zf_var_from_gram_trace(params, 1.0) * b.gram_trace)
        report.add("zf.gram_trace_identity", expected, em.mean, N_SE * em.mean_se)
    return report
