"""Parameter sweeps, figure reproduction and CSV output."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, replace
from pathlib import Path


from .channel import SystemParams
from .rates import RateMode, monte_carlo_rates, spectral_efficiency

__all__ = [
    "CSV_HEADER",
    "CurvePoint",
    "DEFAULT_CURVE_TRIALS",
    "DEFAULT_SEED",
    "ExperimentConfig",
    "FIGURES",
    "db_to_linear",
    "format_csv",
    "load_config",
    "run_figure",
    "run_sweep",
    "write_csv",
]

CSV_HEADER = ("axis", "mode", "se", "se_stderr", "trials", "seed")
SWEEP_AXES = ("snr_db", "coherence_T", "antennas_M")
DEFAULT_CURVE_TRIALS = 10_000
DEFAULT_SEED = 1
SNR_GRID_DB = tuple(range(-30, 25, 5))
T_GRID = (15, 20, 30, 50, 75, 100, 150, 200, 300, 400, 500)


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


@dataclass(frozen=True)
class CurvePoint:
    """One row of curve data. ``n_trials`` is 0 for closed-form curves."""

    axis_value: float
    mode: str
    spectral_efficiency: float
    std_error: float
    n_trials: int
    p_d: float


@dataclass
class ExperimentConfig:
    params: SystemParams
    modes: list
    sweep_axis: str
    sweep_values: list
    n_trials: int = DEFAULT_CURVE_TRIALS
    master_seed: int = DEFAULT_SEED
    output_path: str | None = None

    def __post_init__(self):
        if self.sweep_axis not in SWEEP_AXES:
            raise ValueError(f"sweep_axis must be one of {SWEEP_AXES}, got {self.sweep_axis!r}")
        if not self.sweep_values:
            raise ValueError("sweep_values must be nonempty")
        vals = [float(v) for v in self.sweep_values]
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError("sweep_values must be strictly increasing")
        if self.n_trials < 100:
            raise ValueError(f"n_trials must be >= 100, got {self.n_trials}")
        if not self.modes:
            raise ValueError("modes must be nonempty")
        self.modes = [RateMode(m) for m in self.modes]
        for v in self.sweep_values:
            p = self.point_params(v)
            if any(m.kind.value == "ZF" for m in self.modes):
                p.require_zf()

    def point_params(self, value) -> SystemParams:
        if self.sweep_axis == "snr_db":
            return replace(self.params, p_d=db_to_linear(float(value)))
        if self.sweep_axis == "coherence_T":
            if float(value) != int(value):
                raise ValueError(f"coherence_T values must be integers, got {value}")
            return replace(self.params, T=int(value))
        if float(value) != int(value):
            raise ValueError(f"antennas_M values must be integers, got {value}")
        return replace(self.params, M=int(value))


def run_sweep(config: ExperimentConfig, workers: int = 1) -> list[CurvePoint]:
    """One :class:`CurvePoint` per (sweep value, mode).

    All simulated modes at a sweep point share channel and noise draws. The
    rates do not depend on ``T``, so a coherence-interval sweep simulates once
    and only changes the prelog.
    """
    cache: dict = {}
    points = []
    for value in config.sweep_values:
        p = config.point_params(value)
        key = replace(p, T=p.tau_u + p.tau_d)
        if key not in cache:
            cache[key] = monte_carlo_rates(config.modes, p, config.n_trials,
                                           config.master_seed, workers)
        results = cache[key]
        for mode in config.modes:
            se = spectral_efficiency(results[mode], p)
            trials = 0 if mode.scheme == "BASELINE" else config.n_trials
            points.append(CurvePoint(float(value), mode.value, se.value, se.stderr, trials, p.p_d))
    return points


def format_csv(points, seed: int) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for pt in points:
        writer.writerow([repr(float(pt.axis_value)), pt.mode, repr(float(pt.spectral_efficiency)),
                         repr(float(pt.std_error)), pt.n_trials, seed])
    return buf.getvalue()


def write_csv(points, seed: int, path=None) -> str:
    text = format_csv(points, seed)
    if path is not None:
        Path(path).write_text(text)
    return text


FIGURES = {
    # name: (fixed scalars, M values, sweep axis, sweep grid, modes)
    "fig2": (dict(K=1, T=200, p_u=1.0), (10, 50), "snr_db", SNR_GRID_DB,
             ("BFT_MRT", "BASELINE_MRT")),
    "fig3": (dict(K=5, T=200, p_u=1.0), (10, 50), "snr_db", SNR_GRID_DB,
             ("BFT_MRT", "BFT_ZF", "BASELINE_MRT", "BASELINE_ZF")),
    "fig4": (dict(K=5, p_u=1.0, p_d=100.0), (50,), "coherence_T", T_GRID,
             ("BFT_MRT", "BFT_ZF", "BASELINE_MRT", "BASELINE_ZF")),
    "fig5": (dict(K=5, T=200, p_u=1.0), (10, 50), "snr_db", SNR_GRID_DB,
             ("BFT_MRT", "BFT_ZF", "GENIE_MRT", "GENIE_ZF")),
}

_SCALARS = ("M", "K", "T", "tau_u", "tau_d", "p_u", "p_d")


def _build_params(values: dict) -> SystemParams:
    K = int(values["K"])
    return SystemParams(
        M=int(values["M"]), K=K, T=int(values.get("T", 200)),
        tau_u=int(values.get("tau_u", K)), tau_d=int(values.get("tau_d", K)),
        p_u=float(values.get("p_u", 1.0)), p_d=float(values.get("p_d", 100.0)),
    )


def run_figure(name: str, overrides: dict | None = None, master_seed: int = DEFAULT_SEED,
               n_trials: int = DEFAULT_CURVE_TRIALS, workers: int = 1) -> list[CurvePoint]:
    """Curve data for one of the four figures.

    ``overrides`` may replace any scalar of :class:`SystemParams` as well as
    ``sweep_values`` and ``modes``. When more than one antenna count is drawn
    the mode label carries it, e.g. ``BFT_MRT:M=50``.
    """
    if name not in FIGURES:
        raise ValueError(f"unknown figure {name!r}; choose from {sorted(FIGURES)}")
    fixed, M_values, axis, grid, modes = FIGURES[name]
    overrides = dict(overrides or {})
    grid = overrides.pop("sweep_values", grid)
    modes = overrides.pop("modes", modes)
    unknown = set(overrides) - set(_SCALARS)
    if unknown:
        raise ValueError(f"unknown override(s): {sorted(unknown)}")
    if "M" in overrides:
        M_values = (overrides["M"],)

    points = []
    for M in M_values:
        values = {**fixed, **overrides, "M": M}
        config = ExperimentConfig(_build_params(values), list(modes), axis, list(grid),
                                  n_trials, master_seed)
        for pt in run_sweep(config, workers):
            label = pt.mode if len(M_values) == 1 else f"{pt.mode}:M={M}"
            points.append(replace(pt, mode=label))
    return points


def load_config(source, cli_overrides: dict | None = None) -> ExperimentConfig:
    """Build a config from a flat JSON document; non-None ``cli_overrides`` win."""
    if isinstance(source, (str, Path)):
        data = json.loads(Path(source).read_text())
    else:
        data = dict(source)
    for k, v in (cli_overrides or {}).items():
        if v is not None:
            data[k] = v
    known = set(_SCALARS) | {"modes", "sweep_axis", "sweep_values", "n_trials",
                             "master_seed", "output_path"}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown config key(s): {sorted(unknown)}")
    for key in ("M", "K", "modes", "sweep_axis", "sweep_values"):
        if key not in data:
            raise ValueError(f"config is missing required key {key!r}")
    return ExperimentConfig(
        params=_build_params(data),
        modes=list(data["modes"]),
        sweep_axis=data["sweep_axis"],
        sweep_values=list(data["sweep_values"]),
        n_trials=int(data.get("n_trials", DEFAULT_CURVE_TRIALS)),
        master_seed=int(data.get("master_seed", DEFAULT_SEED)),
        output_path=data.get("output_path"),
    )
