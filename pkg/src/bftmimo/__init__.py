"""Massive MU-MIMO downlink with TDD uplink training and beamforming training.

Monte Carlo and closed-form evaluation of MMSE-estimated effective gains,
MRT/ZF precoding and the resulting spectral-efficiency lower bounds.
"""
from .channel import ChannelPair, SystemParams, draw_channel, uplink_estimate
from .harness import CurvePoint, ExperimentConfig, run_figure, run_sweep
from .moments import GainMoments, empirical_moments, moments_mrt, moments_zf
from .precoding import PrecoderKind, PrecodingMatrix, alpha_mrt, alpha_zf, build_precoder
from .rates import (
    RateMode,
    RateResult,
    SpectralEfficiency,
    monte_carlo_rate,
    monte_carlo_rates,
    se_baseline,
    se_bft,
)
from .validation import run_validate

__version__ = "0.1.0"
