"""Command-line interface: ``padeloc {power,test,sample,pade,density-check}``.

Exit codes: 0 success, 2 usage error, 3 numerical error.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from dataclasses import fields

import numpy as np

from .errors import DegenerateError, DomainError, NumericalError, UsageError
from .pade import extract_pade_parameters
from .rank_test import hotelling_test, location_test
from .report import emit_csv, emit_svg, format_value, read_points_csv
from .sim import (
    CSV_FIELDS,
    STATISTIC_CHOICES,
    TEST_CHOICES,
    ExperimentConfig,
    hotelling_theory_rows,
    ks_uniformity_check,
    replicate_rng,
    run_power_experiment,
)
from .stable_noise import SignalNoiseModel, sample_series

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL = 0, 2, 3

_FIELD_TYPES = {f.name: f.type for f in fields(ExperimentConfig)}


def _parse_grid(text):
    try:
        return tuple(float(v) for v in text.replace(";", ",").split(",") if v.strip())
    except ValueError:
        raise UsageError(f"snr_grid: cannot parse {text!r}", key="snr_grid") from None


def _convert(key, raw):
    kind = _FIELD_TYPES[key]
    try:
        if key == "snr_grid":
            return _parse_grid(raw) if isinstance(raw, str) else tuple(raw)
        if kind == "int":
            return int(raw, 0) if isinstance(raw, str) else int(raw)
        if kind == "float":
            return float(raw)
        return str(raw)
    except ValueError:
        raise UsageError(f"{key}: invalid value {raw!r}", key=key) from None


def read_config_file(path):
    """Parse a flat ``key = value`` file (``#`` comments, ``-`` or ``_`` in keys)."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in _FIELD_TYPES:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}", key=key)
            out[key] = _convert(key, value)
    return out


def add_experiment_arguments(parser):
    g = parser.add_argument_group("experiment")
    g.add_argument("--config", metavar="FILE", help="flat key=value file; flags override it")
    g.add_argument("--alpha", type=float)
    g.add_argument("--snr-grid", dest="snr_grid", type=_parse_grid, metavar="R1,R2,...")
    g.add_argument("--xi-arg", dest="xi_arg", type=float, help="argument of the true pole (radians)")
    g.add_argument("--xi-mod", dest="xi_mod", type=float, help="modulus of the true pole")
    g.add_argument("--m", type=int, help="sample size per test")
    g.add_argument("--reps", type=int, help="Monte Carlo replicates")
    g.add_argument("--beta", type=float, help="significance level")
    g.add_argument("--seed", type=lambda s: int(s, 0))
    g.add_argument("--p", type=int, help="Padé order (series length 2p)")
    g.add_argument("--statistic", choices=STATISTIC_CHOICES)
    g.add_argument("--test", choices=TEST_CHOICES)
    g.add_argument("--mode", choices=("interdirection", "sign_cosine"))
    g.add_argument("--pool-rule", dest="pool_rule", choices=("largest_modulus", "first"))
    g.add_argument("--sigma", type=float)
    g.add_argument("--c-phase", dest="c_phase", type=float)
    g.add_argument("--original-index", dest="original_index", type=int)


def config_from_namespace(ns):
    values = {}
    if getattr(ns, "config", None):
        values.update(read_config_file(ns.config))
    for key in _FIELD_TYPES:
        v = getattr(ns, key, None)
        if v is not None:
            values[key] = v
    return ExperimentConfig(**values)


def parse_config(argv=(), config_file=None):
    """Build an :class:`ExperimentConfig` from flags and an optional file.

    The file is read first and command-line flags override it.
    """
    parser = argparse.ArgumentParser(prog="padeloc-config", add_help=False, exit_on_error=False)
    add_experiment_arguments(parser)
    try:
        ns = parser.parse_args(list(argv))
    except argparse.ArgumentError as exc:
        raise UsageError(str(exc), key=getattr(exc, "argument_name", None)) from None
    if config_file is not None and ns.config is None:
        ns.config = config_file
    return config_from_namespace(ns)


def _parse_pair(text):
    try:
        stat, test = text.split(":")
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected STATISTIC:TEST, got {text!r}") from None
    if stat not in STATISTIC_CHOICES or test not in TEST_CHOICES:
        raise argparse.ArgumentTypeError(f"unknown statistic/test in {text!r}")
    return stat, test


def build_parser():
    parser = argparse.ArgumentParser(
        prog="padeloc",
        description="Padé-transformed bivariate location tests under spherical stable noise.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("power", help="Monte Carlo power curves (CSV / SVG)")
    add_experiment_arguments(p)
    p.add_argument("--out", help="CSV output path (default: stdout)")
    p.add_argument("--svg", help="SVG output path")
    p.add_argument("--also", action="append", type=_parse_pair, default=[], metavar="STATISTIC:TEST",
                   help="extra curve on the same draws (repeatable)")
    p.add_argument("--theory", action="store_true", help="add exact Hotelling power for Gaussian data")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("test", help="run one location test on a CSV of re,im rows")
    p.add_argument("--input", required=True)
    p.add_argument("--test", choices=TEST_CHOICES, default="pole_score")
    p.add_argument("--mode", choices=("interdirection", "sign_cosine"), default="interdirection")
    p.add_argument("--beta", type=float, default=0.05)

    p = sub.add_parser("sample", help="emit simulated series as CSV k,re,im,replicate")
    add_experiment_arguments(p)
    p.add_argument("--snr", type=float, default=0.0)
    p.add_argument("--out", help="CSV output path (default: stdout)")

    p = sub.add_parser("pade", help="print Padé parameters of a series")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--series", help="comma-separated complex numbers, e.g. '3,0,0.375,0.09375'")
    src.add_argument("--input", help="CSV of re,im rows")

    p = sub.add_parser("density-check", help="KS test of the null pole law")
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--reps", type=int, default=20000)
    p.add_argument("--seed", type=lambda s: int(s, 0), default=0)
    return parser


def _open_out(path):
    return open(path, "w", newline="") if path else sys.stdout


def _cmd_power(ns):
    cfg = config_from_namespace(ns)
    configs = [cfg]
    for stat, test in ns.also:
        configs.append(ExperimentConfig(**{**cfg.__dict__, "statistic": stat, "test": test}))
    rows = []
    for c in configs:
        rows.extend(run_power_experiment(c, workers=ns.workers))
    if ns.theory:
        rows.extend(hotelling_theory_rows(cfg))
    if ns.out:
        emit_csv(rows, ns.out)
    else:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(CSV_FIELDS)
        for r in rows:
            w.writerow([format_value(v) for v in r.values()])
    if ns.svg:
        emit_svg(rows, ns.svg, title=f"alpha={cfg.alpha:g}, m={cfg.m}, beta={cfg.beta:g}, reps={cfg.reps}")
    return EXIT_OK


def _cmd_test(ns):
    pts = read_points_csv(ns.input)
    if ns.test == "hotelling":
        res = hotelling_test(pts, ns.beta)
    else:
        res = location_test(pts, score=ns.test, beta=ns.beta, mode=ns.mode)
    print(f"test={ns.test}")
    print(f"m={len(pts)}")
    print(f"statistic={res.statistic!r}")
    print(f"threshold={res.threshold!r}")
    print(f"p_value={res.p_value!r}")
    print(f"reject={str(res.reject).lower()}")
    return EXIT_OK


def _cmd_sample(ns):
    cfg = config_from_namespace(ns)
    model = SignalNoiseModel.from_snr(cfg.alpha, ns.snr, sigma=cfg.sigma, xi=cfg.xi, n=2 * cfg.p, phase=cfg.c_phase)
    fh = _open_out(ns.out)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("k", "re", "im", "replicate"))
        for rep in range(cfg.reps):
            a = sample_series(model, replicate_rng(cfg.seed, 0, rep))
            for k, v in enumerate(a):
                w.writerow((k, repr(float(v.real)), repr(float(v.imag)), rep))
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


def _parse_series(text):
    try:
        return np.array([complex(s.strip().replace(" ", "")) for s in text.split(",") if s.strip()])
    except ValueError:
        raise UsageError(f"cannot parse series {text!r}") from None


def _fmt_complex_list(v):
    return "[" + ", ".join(repr(complex(z)) for z in v) + "]"


def _cmd_pade(ns):
    if ns.series is not None:
        a = _parse_series(ns.series)
    else:
        a = np.array([complex(re, im) for re, im in read_points_csv(ns.input)])
    try:
        params = extract_pade_parameters(a)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    print(f"p={params.p}")
    print(f"poles={_fmt_complex_list(params.poles)}")
    print(f"zeros={_fmt_complex_list(params.zeros)}")
    print(f"residuals={_fmt_complex_list(params.residuals)}")
    print(f"zero_residuals={_fmt_complex_list(params.zero_residuals)}")
    print(f"normalized_c={_fmt_complex_list(params.normalized_c)}")
    print(f"normalized_d={_fmt_complex_list(params.normalized_d)}")
    return EXIT_OK


def _cmd_density_check(ns):
    if not (0 < ns.alpha <= 2):
        raise UsageError("alpha must lie in (0, 2]", key="alpha")
    stat, pval = ks_uniformity_check(ns.alpha, ns.sigma, ns.reps, ns.seed)
    print(f"alpha={ns.alpha!r}")
    print(f"sigma={ns.sigma!r}")
    print(f"reps={ns.reps}")
    print(f"ks_statistic={stat!r}")
    print(f"p_value={pval!r}")
    return EXIT_OK


_COMMANDS = {
    "power": _cmd_power,
    "test": _cmd_test,
    "sample": _cmd_sample,
    "pade": _cmd_pade,
    "density-check": _cmd_density_check,
}


def main(argv=None):
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if ns.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return _COMMANDS[ns.command](ns)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalError, DegenerateError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (DomainError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
