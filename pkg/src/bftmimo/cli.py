"""Command-line entry point: ``bftmimo {figure,sweep,rate,validate}``.

Exit status is 0 on success, 1 when ``validate`` finds a failing check and 2 on
any configuration error. For ``sweep``, values given on the command line take
precedence over the config file, which takes precedence over built-in defaults.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

from .channel import SystemParams
from .harness import (
    DEFAULT_CURVE_TRIALS,
    DEFAULT_SEED,
    ExperimentConfig,
    FIGURES,
    load_config,
    run_figure,
    run_sweep,
    write_csv,
)
from .rates import RateMode
from .validation import run_validate

EXIT_OK, EXIT_VALIDATION, EXIT_CONFIG = 0, 1, 2


def _global_flags(p: argparse.ArgumentParser, trials_default):
    p.add_argument("--seed", type=int, default=None, help=f"master seed (default {DEFAULT_SEED})")
    p.add_argument("--trials", type=int, default=None, help=f"Monte Carlo trials (default {trials_default})")
    p.add_argument("--out", default=None, help="output file (default: stdout)")
    p.add_argument("--workers", type=int, default=1, help="worker threads; never changes results")


def _scalar_flags(p: argparse.ArgumentParser):
    p.add_argument("--M", type=int)
    p.add_argument("--K", type=int)
    p.add_argument("--T", type=int)
    p.add_argument("--tau-u", dest="tau_u", type=int)
    p.add_argument("--tau-d", dest="tau_d", type=int)
    p.add_argument("--p-u", dest="p_u", type=float)
    p.add_argument("--p-d", dest="p_d", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bftmimo", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    fig = sub.add_parser("figure", help="reproduce the curve data of one figure")
    fig.add_argument("name", choices=sorted(FIGURES))
    _scalar_flags(fig)
    _global_flags(fig, DEFAULT_CURVE_TRIALS)

    sw = sub.add_parser("sweep", help="run a sweep described by a JSON config")
    sw.add_argument("--config", required=True)
    _global_flags(sw, DEFAULT_CURVE_TRIALS)

    rate = sub.add_parser("rate", help="spectral efficiency at one operating point")
    _scalar_flags(rate)
    rate.add_argument("--snr-db", type=float, help="downlink SNR in dB (overrides --p-d)")
    rate.add_argument("--modes", nargs="+", default=[m.value for m in RateMode],
                      choices=[m.value for m in RateMode])
    _global_flags(rate, DEFAULT_CURVE_TRIALS)

    val = sub.add_parser("validate", help="check simulated moments against the closed forms")
    _scalar_flags(val)
    _global_flags(val, 100_000)
    return parser


def _emit(text: str, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _scalars(args) -> dict:
    return {k: getattr(args, k) for k in ("M", "K", "T", "tau_u", "tau_d", "p_u", "p_d")
            if getattr(args, k, None) is not None}


def _point_params(args, M=50, K=5) -> SystemParams:
    values = {"M": M, "K": K, "T": 200, "p_u": 1.0, "p_d": 100.0, **_scalars(args)}
    values.setdefault("tau_u", values["K"])
    values.setdefault("tau_d", values["K"])
    return SystemParams(**values)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    seed = DEFAULT_SEED if args.seed is None else args.seed
    try:
        if args.command == "figure":
            trials = args.trials or DEFAULT_CURVE_TRIALS
            points = run_figure(args.name, _scalars(args), seed, trials, args.workers)
            _emit(write_csv(points, seed), args.out)
        elif args.command == "sweep":
            cfg = load_config(args.config, {"n_trials": args.trials, "master_seed": args.seed,
                                            "output_path": args.out})
            points = run_sweep(cfg, args.workers)
            _emit(write_csv(points, cfg.master_seed), cfg.output_path)
        elif args.command == "rate":
            params = _point_params(args)
            snr_db = args.snr_db
            if snr_db is None:
                snr_db = 10.0 * math.log10(params.p_d)
            cfg = ExperimentConfig(params, args.modes, "snr_db", [snr_db],
                                   args.trials or DEFAULT_CURVE_TRIALS, seed)
            _emit(write_csv(run_sweep(cfg, args.workers), seed), args.out)
        else:
            report = run_validate(_point_params(args), args.trials or 100_000, seed, args.workers)
            _emit(report.to_json(), args.out)
            for c in report.failures():
                print(f"FAIL {c.name}: observed {c.observed!r}, expected {c.expected!r} "
                      f"+/- {c.band!r}", file=sys.stderr)
            return EXIT_OK if report.passed else EXIT_VALIDATION
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"bftmimo: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
