"""Monte Carlo power experiments and distributional diagnostics.

Reproducibility
---------------
Every experiment replicate draws from its own generator::

    Generator(PCG64(SeedSequence(seed, spawn_key=(snr_index, rep_index, attempt))))

``SeedSequence`` hashes the 64-bit seed and the index tuple through its
avalanche mixer, so streams are independent of each other and of the order
in which replicates are evaluated.  ``attempt`` starts at 0 and is bumped
when a replicate hits a probability-zero degeneracy; the replicate is then
re-drawn from the next substream and counted in ``discarded``.  Results are
reduced in replicate order, so any worker count gives identical output.
"""

from __future__ import annotations

import cmath
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields

import numpy as np
from scipy import stats

from .errors import DegenerateError, DegeneratePencilError, EstimationError, NumericalError, UsageError
from .pade import POOL_RULES, extract_pade_parameters, pole_transform, select_statistic
from .rank_test import MODES, hotelling_power, hotelling_test, location_test, spatial_median
from .stable_noise import SignalNoiseModel, sample_series

__all__ = [
    "DEFAULT_SNR_GRID",
    "STATISTIC_CHOICES",
    "TEST_CHOICES",
    "ExperimentConfig",
    "PowerRow",
    "replicate_rng",
    "series_to_points",
    "run_replicate",
    "run_power_experiment",
    "hotelling_theory_rows",
    "simulate_null_poles",
    "ks_uniformity_check",
    "pole_shift_experiment",
]

log = logging.getLogger(__name__)

DEFAULT_SNR_GRID = (0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0)
STATISTIC_CHOICES = ("pole", "zero", "res_pole", "res_zero", "original")
TEST_CHOICES = ("vdw", "pole_score", "hotelling")
MAX_ATTEMPTS = 1000
DISCARD_WARN_FRACTION = 0.01


@dataclass(frozen=True)
class ExperimentConfig:
    alpha: float = 2.0
    snr_grid: tuple = DEFAULT_SNR_GRID
    xi_arg: float = math.pi / 4
    xi_mod: float = 1.0
    m: int = 100
    reps: int = 200
    beta: float = 0.05
    seed: int = 0
    p: int = 1
    statistic: str = "pole"
    test: str = "pole_score"
    mode: str = "interdirection"
    pool_rule: str = "largest_modulus"
    sigma: float = 1.0
    c_phase: float = 0.0
    original_index: int = 0

    def __post_init__(self):
        object.__setattr__(self, "snr_grid", tuple(float(s) for s in self.snr_grid))
        checks = (
            ("alpha", 0.0 < self.alpha <= 2.0, "must lie in (0, 2]"),
            ("snr_grid", len(self.snr_grid) > 0 and min(self.snr_grid) >= 0, "must be a non-empty list of SNR >= 0"),
            ("xi_mod", self.xi_mod > 0, "must be positive"),
            ("m", self.m >= 3, "must be >= 3"),
            ("reps", self.reps >= 1, "must be >= 1"),
            ("beta", 0.0 < self.beta < 1.0, "must lie in (0, 1)"),
            ("seed", 0 <= self.seed < 2**64, "must be a 64-bit unsigned integer"),
            ("p", self.p >= 1, "must be >= 1"),
            ("statistic", self.statistic in STATISTIC_CHOICES, f"must be one of {STATISTIC_CHOICES}"),
            ("test", self.test in TEST_CHOICES, f"must be one of {TEST_CHOICES}"),
            ("mode", self.mode in MODES, f"must be one of {MODES}"),
            ("pool_rule", self.pool_rule in POOL_RULES, f"must be one of {POOL_RULES}"),
            ("sigma", self.sigma > 0, "must be positive"),
            ("original_index", 0 <= self.original_index < 2 * self.p, "must index the series"),
        )
        for key, ok, msg in checks:
            if not ok:
                raise UsageError(f"{key}={getattr(self, key)!r}: {msg}", key=key)
        if self.statistic in ("zero", "res_zero") and self.p < 2:
            raise UsageError(f"statistic={self.statistic} needs p >= 2 (got p={self.p})", key="statistic")

    @property
    def xi(self):
        return cmath.rect(self.xi_mod, self.xi_arg)

    def model(self, rho):
        return SignalNoiseModel.from_snr(
            self.alpha, rho, sigma=self.sigma, xi=self.xi, n=2 * self.p, phase=self.c_phase
        )


CSV_FIELDS = (
    "alpha", "snr", "xi_re", "xi_im", "m", "reps", "beta", "statistic",
    "test", "mode", "power", "mc_stderr", "discarded", "seed",
)


@dataclass(frozen=True)
class PowerRow:
    alpha: float
    snr: float
    xi_re: float
    xi_im: float
    m: int
    reps: int
    beta: float
    statistic: str
    test: str
    mode: str
    power: float
    mc_stderr: float
    discarded: int
    seed: int
    excessive_discards: bool = field(default=False, compare=False)

    def values(self):
        return tuple(getattr(self, k) for k in CSV_FIELDS)


def replicate_rng(seed, snr_index, rep_index, attempt=0):
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(snr_index), int(rep_index), int(attempt)))
    return np.random.Generator(np.random.PCG64(ss))


def series_to_points(series, statistic="pole", pool_rule="largest_modulus", original_index=0):
    """Map an ``(m, 2p)`` array of series to ``(m, 2)`` bivariate points."""
    series = np.asarray(series, dtype=complex)
    if not np.all(np.isfinite(series)):
        raise DegenerateError("simulated series overflowed")
    if statistic == "original":
        z = series[:, original_index]
        return np.column_stack((z.real, z.imag))
    if series.shape[1] == 2 and statistic in ("pole", "res_pole"):
        a0, a1 = series[:, 0], series[:, 1]
        if np.any(a0 == 0):
            raise DegeneratePencilError("a_0 == 0 in a two-point series")
        z = a1 / a0 if statistic == "pole" else a0 / np.abs(a0)
        if not np.all(np.isfinite(z)):
            raise DegeneratePencilError("non-finite pole")
        return np.column_stack((z.real, z.imag))
    return np.array([select_statistic(extract_pade_parameters(s), statistic, pool_rule) for s in series])


def _apply_test(points, cfg):
    if cfg.test == "hotelling":
        return hotelling_test(points, cfg.beta)
    return location_test(points, score=cfg.test, beta=cfg.beta, mode=cfg.mode)


def run_replicate(cfg, snr_index, rep_index):
    """Run one experiment; returns ``(reject, discarded_attempts)``."""
    model = cfg.model(cfg.snr_grid[snr_index])
    for attempt in range(MAX_ATTEMPTS):
        rng = replicate_rng(cfg.seed, snr_index, rep_index, attempt)
        try:
            series = sample_series(model, rng, size=cfg.m)
            points = series_to_points(series, cfg.statistic, cfg.pool_rule, cfg.original_index)
            result = _apply_test(points, cfg)
        except (DegenerateError, EstimationError) as exc:
            log.debug("replicate (%d, %d) attempt %d discarded: %s", snr_index, rep_index, attempt, exc)
            continue
        return result.reject, attempt
    raise NumericalError(f"replicate ({snr_index}, {rep_index}) degenerate after {MAX_ATTEMPTS} attempts")


def _run_chunk(args):
    cfg, snr_index, rep_indices = args
    return [run_replicate(cfg, snr_index, r) for r in rep_indices]


def _chunks(cfg, size):
    for i in range(len(cfg.snr_grid)):
        for start in range(0, cfg.reps, size):
            yield cfg, i, range(start, min(start + size, cfg.reps))


def run_power_experiment(config, workers=1, chunk_size=25):
    """Empirical power of one (statistic, test) pair at every SNR of the grid.

    Configurations that differ only in ``statistic``/``test``/``mode`` draw
    identical data, so their powers are paired comparisons.
    """
    cfg = config
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_chunk, _chunks(cfg, chunk_size)))
    else:
        results = [_run_chunk(c) for c in _chunks(cfg, chunk_size)]
    per_snr = [[] for _ in cfg.snr_grid]
    for (_, i, _), res in zip(_chunks(cfg, chunk_size), results):
        per_snr[i].extend(res)
    rows = []
    xi = cfg.xi
    for rho, res in zip(cfg.snr_grid, per_snr):
        rejects = sum(r for r, _ in res)
        discarded = sum(d for _, d in res)
        power = rejects / cfg.reps
        excessive = discarded > DISCARD_WARN_FRACTION * cfg.reps
        if excessive:
            log.warning("snr=%g: %d discarded replicates (> 1%% of %d)", rho, discarded, cfg.reps)
        rows.append(
            PowerRow(
                alpha=cfg.alpha, snr=rho, xi_re=xi.real, xi_im=xi.imag, m=cfg.m, reps=cfg.reps,
                beta=cfg.beta, statistic=cfg.statistic, test=cfg.test, mode=cfg.mode, power=power,
                mc_stderr=math.sqrt(power * (1.0 - power) / cfg.reps), discarded=discarded,
                seed=cfg.seed, excessive_discards=excessive,
            )
        )
    return rows


def hotelling_theory_rows(config):
    """Exact Hotelling power for Gaussian data at the configured SNR grid.

    A single observation ``a_k`` has per-coordinate noise variance
    ``sigma**2`` and signal modulus ``sigma * sqrt(rho) * |xi|**k``, so the
    noncentrality is ``m * rho * |xi|**(2k)``.
    """
    cfg = config
    xi = cfg.xi
    gain = abs(xi) ** (2 * cfg.original_index)
    rows = []
    for rho in cfg.snr_grid:
        power = hotelling_power(cfg.m * rho * gain, cfg.m, cfg.beta)
        rows.append(
            PowerRow(
                alpha=2.0, snr=rho, xi_re=xi.real, xi_im=xi.imag, m=cfg.m, reps=0, beta=cfg.beta,
                statistic="original", test="hotelling_theory", mode="exact", power=power,
                mc_stderr=0.0, discarded=0, seed=cfg.seed,
            )
        )
    return rows


def simulate_null_poles(alpha, sigma, reps, seed):
    """Poles ``a_1 / a_0`` of ``reps`` two-point noise-only series."""
    model = SignalNoiseModel(alpha=alpha, sigma=sigma, c=0j, n=2)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))
    a = sample_series(model, rng, size=reps)
    ok = np.isfinite(a).all(axis=1) & (a[:, 0] != 0)
    a = a[ok]
    return a[:, 1] / a[:, 0]


def ks_uniformity_check(alpha, sigma, reps, seed, transform=pole_transform):
    """One-sample KS test of ``|xi|^2 / (1 + |xi|^2)`` against Uniform(0, 1).

    Returns ``(statistic, p_value)``.
    """
    if reps < 1000:
        raise UsageError("ks_uniformity_check needs reps >= 1000", key="reps")
    u = transform(simulate_null_poles(alpha, sigma, reps, seed))
    res = stats.kstest(u, "uniform")
    return float(res.statistic), float(res.pvalue)


@dataclass(frozen=True)
class PoleShiftResult:
    rho: np.ndarray
    medians: np.ndarray
    angle_deg: float
    slope: float
    intercept: complex
    r_squared: float

    @property
    def slope_noise_power(self):
        """Slope per unit of ``|c|^2 / E|e_k|^2`` (Gaussian noise power SNR).

        For ``alpha = 2`` each complex noise sample has ``E|e_k|^2 = 2 sigma^2``,
        so that SNR equals ``rho / 2`` and the slope doubles.
        """
        return 2.0 * self.slope


def pole_shift_experiment(alpha, xi, rho_grid, reps, seed, sigma=1.0):
    """Spatial median of simulated poles as the SNR grows.

    The same ``reps`` noise vectors are reused at every SNR (common random
    numbers), so the medians differ only through the signal.  A complex
    straight line ``median ~ intercept + slope * rho`` is fitted by least
    squares; ``angle_deg`` is the polar angle of the complex slope, ``slope``
    its modulus and ``r_squared`` the fraction of the medians' spread
    explained by the line.
    """
    rho = np.asarray(rho_grid, dtype=float)
    noise_model = SignalNoiseModel(alpha=alpha, sigma=sigma, c=0j, xi=xi, n=2)
    e = sample_series(noise_model, replicate_rng(seed, 0, 0), size=reps)
    meds = []
    for r in rho:
        a = e + SignalNoiseModel.from_snr(alpha, r, sigma=sigma, xi=xi, n=2).signal()
        z = a[:, 1] / a[:, 0]
        meds.append(spatial_median(np.column_stack((z.real, z.imag))))
    meds = np.array(meds)
    mz = meds[:, 0] + 1j * meds[:, 1]
    # complex least-squares line mz ~ intercept + slope * rho
    design = np.column_stack((np.ones_like(rho), rho))
    (intercept, cslope), *_ = np.linalg.lstsq(design.astype(complex), mz, rcond=None)
    resid = mz - design @ np.array([intercept, cslope])
    ss_tot = np.sum(np.abs(mz - mz.mean()) ** 2)
    return PoleShiftResult(
        rho=rho, medians=meds, angle_deg=math.degrees(cmath.phase(cslope)), slope=float(abs(cslope)),
        intercept=complex(intercept), r_squared=float(1.0 - np.sum(np.abs(resid) ** 2) / ss_tot),
    )


def config_fields():
    return [f.name for f in fields(ExperimentConfig)]


