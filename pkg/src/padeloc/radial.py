"""Radial families, rank scores and efficiency constants for bivariate tests.

Two radial families are supported: the *pole* family with radial function
``f(r) = 1 / (1 + r**2)**2`` (the law of a Padé pole of a two-point noise
series) and the *gaussian* family ``f(r) = exp(-r**2 / 2)``.  Each family
induces a rank score ``J(u) = phi(G^{-1}(u))`` where
``phi = -2 (f^{1/2})' / f^{1/2}`` and ``G`` is the modulus CDF.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from .errors import DomainError, NumericalError

__all__ = [
    "RadialFamily",
    "ScoreFunction",
    "POLE_FAMILY",
    "GAUSSIAN_FAMILY",
    "POLE_SCORE",
    "VDW_SCORE",
    "SCORES",
    "get_score",
    "pole_density",
    "pole_modulus_cdf",
    "pole_modulus_quantile",
    "score_eval",
    "cross_constant",
    "are",
    "are_pole_vs_vdw",
    "shifted_pole_density",
    "sqrt_radial_fisher",
    "first_moment",
    "score_abs_moment",
    "score_abs_moment_closed_form",
]

QUAD_TOL = 1e-12


@dataclass(frozen=True)
class RadialFamily:
    label: str
    f: Callable
    nu1: float
    cdf: Callable
    quantile: Callable
    radial_score: Callable

    def density(self, r):
        """Modulus density ``r f(r) / nu1``."""
        return r * self.f(r) / self.nu1


@dataclass(frozen=True)
class ScoreFunction:
    """Rank score ``J`` on ``(0, 1)``.

    ``J_log`` is the same score in the variable ``v = -log(1 - u)``; it is
    used by quadratures to avoid rounding ``u`` to 1.
    """

    label: str
    J: Callable
    J_log: Callable
    second_moment: float

    def __call__(self, u):
        return self.J(u)


def pole_modulus_cdf(r):
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise DomainError("radius must be non-negative")
    r2 = r * r
    out = r2 / (1.0 + r2)
    return float(out) if out.ndim == 0 else out


def pole_modulus_quantile(u):
    u = np.asarray(u, dtype=float)
    if np.any((u < 0) | (u >= 1)):
        raise DomainError("quantile level must lie in [0, 1)")
    out = np.sqrt(u / (1.0 - u))
    return float(out) if out.ndim == 0 else out


POLE_FAMILY = RadialFamily(
    label="pole",
    f=lambda r: 1.0 / (1.0 + np.square(r)) ** 2,
    nu1=0.5,
    cdf=pole_modulus_cdf,
    quantile=pole_modulus_quantile,
    radial_score=lambda r: 4.0 * r / (1.0 + np.square(r)),
)

GAUSSIAN_FAMILY = RadialFamily(
    label="gaussian",
    f=lambda r: np.exp(-0.5 * np.square(r)),
    nu1=1.0,
    cdf=lambda r: -np.expm1(-0.5 * np.square(r)),
    quantile=lambda u: np.sqrt(-2.0 * np.log1p(-np.asarray(u, dtype=float))),
    radial_score=lambda r: np.asarray(r, dtype=float),
)


def _pole_J(u):
    return 4.0 * np.sqrt(u * (1.0 - u))


def _vdw_J(u):
    return np.sqrt(-2.0 * np.log1p(-u))


POLE_SCORE = ScoreFunction(
    "pole_score", _pole_J, lambda v: 4.0 * math.sqrt(-math.expm1(-v) * math.exp(-v)), 8.0 / 3.0
)
VDW_SCORE = ScoreFunction("vdw", _vdw_J, lambda v: math.sqrt(2.0 * v), 2.0)
SCORES = {s.label: s for s in (POLE_SCORE, VDW_SCORE)}


def get_score(label):
    try:
        return SCORES[label]
    except KeyError:
        raise DomainError(f"unknown score {label!r}; expected one of {sorted(SCORES)}") from None


def score_eval(score, u):
    """Evaluate a rank score on ``(0, 1)``."""
    if isinstance(score, str):
        score = get_score(score)
    u = np.asarray(u, dtype=float)
    if np.any((u <= 0) | (u >= 1)):
        raise DomainError("score argument must lie in the open interval (0, 1)")
    out = score.J(u)
    return float(out) if out.ndim == 0 else out


def pole_density(z):
    """Density ``1 / (pi (1 + |z|^2)^2)`` of a null pole in the complex plane."""
    return 1.0 / (np.pi * (1.0 + np.abs(z) ** 2) ** 2)


def cross_constant(s1, s2):
    """``int_0^1 J_1(u) J_2(u) du``.

    The integral is taken in the variable ``v = -log(1 - u)`` over
    ``(0, inf)``, which removes the logarithmic endpoint of the van der
    Waerden score at ``u = 1``.
    """
    if isinstance(s1, str):
        s1 = get_score(s1)
    if isinstance(s2, str):
        s2 = get_score(s2)

    def integrand(v):
        return s1.J_log(v) * s2.J_log(v) * math.exp(-v)

    val, err, info = _quad(integrand, 0.0, np.inf)
    return val


def _quad(fn, a, b):
    val, err, info = integrate.quad(fn, a, b, epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=200, full_output=1)[:3]
    if err > 1e-9:
        raise NumericalError(f"quadrature error estimate {err:.3g} too large on [{a}, {b}]")
    return val, err, info


def are(target, competitor, truth=None):
    """Pitman ARE of the test scored by ``target`` against ``competitor``.

    ``truth`` is the score of the actual data-generating family (defaults to
    ``target``).  Returns ``[C(t, f)^2 / C(t, t)] * [C(w, w) / C(w, f)^2]``.
    """
    if truth is None:
        truth = target
    num = cross_constant(target, truth) ** 2 / cross_constant(target, target)
    den = cross_constant(competitor, truth) ** 2 / cross_constant(competitor, competitor)
    return num / den


def are_pole_vs_vdw():
    """ARE of the pole-score test against the van der Waerden test on pole data."""
    return are(POLE_SCORE, VDW_SCORE, POLE_SCORE)


def shifted_pole_density(z, rho, alpha, xi):
    """Small-SNR approximation to the pole density under a signal.

    Returns ``(approx, first_order)``: the recentred spherical density
    ``1 / (pi (1 + |z - rho Gamma(1 + 2/alpha) xi|^2)^2)`` and the
    first-order expansion ``K2 + rho Gamma(1 + 2/alpha) K1 / pi``.
    """
    if rho < 0:
        raise DomainError("rho must be non-negative")
    if not (0 < alpha <= 2):
        raise DomainError("alpha must lie in (0, 2]")
    z = np.asarray(z, dtype=complex)
    shift = rho * math.gamma(1.0 + 2.0 / alpha)
    approx = 1.0 / (np.pi * (1.0 + np.abs(z - shift * xi) ** 2) ** 2)
    r2 = np.abs(z) ** 2
    k1 = (np.abs(1.0 + np.conj(z) * xi) ** 2 - np.abs(z - xi) ** 2) / (1.0 + r2) ** 3
    k2 = 1.0 / (np.pi * (1.0 + r2) ** 2)
    first = k2 + shift * k1 / np.pi
    if approx.ndim == 0:
        return float(approx), float(first)
    return approx, first


def sqrt_radial_fisher(family=POLE_FAMILY):
    """``int_0^inf [(f^{1/2})'(r)]^2 r dr`` (1/3 for the pole family)."""
    if family is POLE_FAMILY:
        def integrand(r):
            return (2.0 * r / (1.0 + r * r) ** 2) ** 2 * r
    else:
        def integrand(r):
            return (r * math.exp(-0.25 * r * r)) ** 2 * r / 4.0
    return _quad(integrand, 0.0, np.inf)[0]


def first_moment(family=POLE_FAMILY):
    """``nu_1 = int_0^inf r f(r) dr`` by quadrature."""
    return _quad(lambda r: r * float(family.f(r)), 0.0, np.inf)[0]


def score_abs_moment(delta, score=POLE_SCORE):
    """``int_0^1 |J(u)|^(2 + delta) du`` by quadrature."""
    return _quad(lambda u: abs(float(score.J(u))) ** (2.0 + delta), 0.0, 1.0)[0]


def score_abs_moment_closed_form(delta):
    """Closed form of :func:`score_abs_moment` for the pole score."""
    return math.sqrt(math.pi) * 2.0 ** (delta + 1) * math.gamma(delta / 2 + 2) / math.gamma((delta + 5) / 2)
