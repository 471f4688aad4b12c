"""Isotropic alpha-stable noise.

Spherical stable vectors are generated with the sub-Gaussian construction
``X = sqrt(A) * G`` where ``A`` is a positive (totally skewed) stable variable
of index ``alpha / 2`` and ``G`` is a centred Gaussian vector.  With the
convention used throughout the package the characteristic function is

    E[exp(i <t, X>)] = exp(-(gamma * |t|) ** alpha),

so ``alpha = 2`` gives i.i.d. Gaussian coordinates with variance
``2 * gamma**2``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DomainError, NumericalError

__all__ = [
    "StableNoiseSpec",
    "SignalNoiseModel",
    "sample_positive_stable",
    "sample_isotropic_stable",
    "sample_series",
    "amplitude_density",
    "chi4_density",
    "tail_exponent",
]


def _check_alpha(alpha):
    if not (0.0 < alpha <= 2.0):
        raise DomainError(f"stability index alpha must lie in (0, 2], got {alpha!r}")


@dataclass(frozen=True)
class StableNoiseSpec:
    """Parameters of a spherical stable law in ``dim`` real dimensions."""

    alpha: float
    gamma: float
    dim: int

    def __post_init__(self):
        _check_alpha(self.alpha)
        if not self.gamma > 0:
            raise DomainError(f"scale gamma must be positive, got {self.gamma!r}")
        if self.dim < 2 or self.dim % 2:
            raise DomainError(f"dim must be an even integer >= 2, got {self.dim!r}")


@dataclass(frozen=True)
class SignalNoiseModel:
    """One complex exponential ``c * xi**k`` buried in spherical stable noise.

    ``sigma`` is the noise scale; the stable vector of the ``2n`` real noise
    coordinates uses ``gamma = sigma / sqrt(2)``, so that for ``alpha = 2``
    every real coordinate has variance ``sigma**2``.  ``sigma = 0`` is
    accepted and yields the noiseless series.
    """

    alpha: float
    sigma: float = 1.0
    c: complex = 0j
    xi: complex = complex(math.cos(math.pi / 4), math.sin(math.pi / 4))
    n: int = 2

    def __post_init__(self):
        _check_alpha(self.alpha)
        if self.sigma < 0:
            raise DomainError(f"sigma must be non-negative, got {self.sigma!r}")
        if self.n < 1:
            raise DomainError(f"series length n must be positive, got {self.n!r}")

    @classmethod
    def from_snr(cls, alpha, rho, sigma=1.0, xi=None, n=2, phase=0.0):
        """Build a model with ``|c|**2 / sigma**2 == rho`` and ``arg c == phase``."""
        if rho < 0:
            raise DomainError(f"SNR rho must be non-negative, got {rho!r}")
        if xi is None:
            xi = cls.xi
        c = sigma * math.sqrt(rho) * cmath.exp(1j * phase)
        return cls(alpha=alpha, sigma=sigma, c=c, xi=complex(xi), n=n)

    @property
    def rho(self):
        if self.sigma == 0:
            return 0.0 if self.c == 0 else math.inf
        return abs(self.c) ** 2 / self.sigma**2

    @property
    def noise(self):
        """Noise law of the stacked real vector ``(Re a, Im a)``; None if sigma == 0."""
        if self.sigma == 0:
            return None
        return StableNoiseSpec(self.alpha, self.sigma / math.sqrt(2.0), 2 * self.n)

    def signal(self):
        return self.c * complex(self.xi) ** np.arange(self.n)


def sample_positive_stable(alpha, rng, size=None):
    """Draw the positive stable multiplier of the sub-Gaussian construction.

    The returned variable ``A`` has Laplace transform
    ``E[exp(-s A)] = exp(-s ** (alpha / 2))``.  It is generated with the
    Chambers-Mallows-Stuck formula specialised to a totally skewed law of
    index ``a = alpha / 2 < 1`` (Kanter's representation)::

        A = sin(a U) / sin(U)**(1/a) * (sin((1 - a) U) / E)**((1 - a) / a)

    with ``U ~ Uniform(0, pi)`` and ``E ~ Exp(1)``.  The computation is done
    in log space so that very small indices do not overflow prematurely.
    For ``alpha = 2`` the multiplier is identically one.
    """
    _check_alpha(alpha)
    if alpha == 2.0:
        return 1.0 if size is None else np.ones(size)
    a = alpha / 2.0
    u = rng.uniform(0.0, np.pi, size=size)
    e = rng.standard_exponential(size=size)
    log_a = (
        np.log(np.sin(a * u))
        - np.log(np.sin(u)) / a
        + (1.0 - a) / a * (np.log(np.sin((1.0 - a) * u)) - np.log(e))
    )
    with np.errstate(over="ignore"):
        out = np.exp(log_a)
    return float(out) if size is None else out


def sample_isotropic_stable(spec, rng, size=None):
    """Draw spherical stable vectors of length ``spec.dim``.

    Returns an array of shape ``(dim,)``, or ``(size, dim)`` when ``size`` is
    given.  One positive multiplier is shared by all coordinates of a vector,
    which is what makes the law spherical rather than a product of
    independent stable coordinates.
    """
    shape = (spec.dim,) if size is None else (size, spec.dim)
    g = rng.standard_normal(shape) * (math.sqrt(2.0) * spec.gamma)
    a = sample_positive_stable(spec.alpha, rng, size=size)
    if size is None:
        return math.sqrt(a) * g
    return np.sqrt(a)[:, None] * g


def sample_series(model, rng, size=None):
    """Simulate ``a_k = c xi**k + noise_k`` for ``k = 0 .. n-1``.

    The ``2n`` real noise coordinates ``(Re a_0..Re a_{n-1}, Im a_0..Im a_{n-1})``
    form a single spherical stable vector, so noise is jointly spherical
    across time points.  Returns a complex array of shape ``(n,)`` or
    ``(size, n)``.
    """
    s = model.signal()
    spec = model.noise
    if spec is None:
        return s.copy() if size is None else np.tile(s, (size, 1))
    x = sample_isotropic_stable(spec, rng, size=size)
    n = model.n
    noise = x[..., :n] + 1j * x[..., n:]
    return s + noise


# --- amplitude density oracle -------------------------------------------------

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(32)
_ENVELOPE_TOL = 1e-12
_MAX_PANELS = 400_000
_PANEL_CHUNK = 512
_EXACT_ZEROS = special.jn_zeros(1, 64)


def _j1_zeros(start, stop):
    # exact zeros first, McMahon's expansion beyond (panel edges need not be exact)
    k = np.arange(start, stop)
    beta = (k + 1.25) * np.pi
    z = beta - 3.0 / (8.0 * beta)
    exact = k < _EXACT_ZEROS.size
    z[exact] = _EXACT_ZEROS[k[exact]]
    return z


def chi4_density(r, scale):
    """Density of ``|G|`` for a 4-dim Gaussian with per-coordinate std ``scale``."""
    r = np.asarray(r, dtype=float)
    return r**3 * np.exp(-(r**2) / (2.0 * scale**2)) / (2.0 * scale**4)


def _panel_sum(lo, hi, r, alpha, gamma):
    mid = 0.5 * (hi + lo)
    half = 0.5 * (hi - lo)
    t = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    rt = r * t
    vals = 0.5 * rt**2 * special.j1(rt) * np.exp(-((gamma * t) ** alpha))
    return half * (vals @ _GL_WEIGHTS)


def amplitude_density(r, alpha, gamma):
    """Density of the Euclidean norm of a 4-dim spherical stable vector.

    Evaluates the Hankel-transform representation

        g(r) = 1/2 * int_0^inf (r t)^2 J_1(r t) exp(-(gamma t)^alpha) dt

    by Gauss-Legendre quadrature on panels delimited by consecutive zeros of
    ``J_1(r t)``.  Panels are accumulated until the integrand envelope
    ``(r t)^2 sqrt(2 / (pi r t)) exp(-(gamma t)^alpha) / 2`` falls below
    1e-12 (relative to the running value, floored at 1).

    Meant as a diagnostic oracle; small ``alpha`` (slowly decaying
    characteristic function) exhausts the panel budget and raises
    :class:`NumericalError`.
    """
    _check_alpha(alpha)
    if not gamma > 0:
        raise DomainError(f"gamma must be positive, got {gamma!r}")
    if r < 0:
        raise DomainError(f"radius must be non-negative, got {r!r}")
    if r == 0:
        return 0.0
    # the envelope peaks near t* = (3 / (2 alpha))**(1/alpha) / gamma; only
    # truncate past it
    t_peak = (1.5 / alpha) ** (1.0 / alpha) / gamma
    total = 0.0
    start = 0
    prev_edge = 0.0
    while start < _MAX_PANELS:
        zeros = _j1_zeros(start, start + _PANEL_CHUNK) / r
        edges = np.concatenate(([prev_edge], zeros))
        contrib = _panel_sum(edges[:-1], edges[1:], r, alpha, gamma)
        te = edges[1:]
        env = 0.5 * (r * te) ** 2 * np.sqrt(2.0 / (np.pi * r * te)) * np.exp(-((gamma * te) ** alpha))
        done = np.nonzero((env * np.diff(edges) < _ENVELOPE_TOL * max(1.0, abs(total))) & (te > t_peak))[0]
        if done.size:
            total += contrib[: done[0] + 1].sum()
            return max(total, 0.0)
        total += contrib.sum()
        prev_edge = edges[-1]
        start += _PANEL_CHUNK
    raise NumericalError(
        f"amplitude_density did not converge: r={r}, alpha={alpha}, gamma={gamma}, "
        f"panels={start}, t_reached={prev_edge:.3g}, partial={total:.6g}"
    )


def tail_exponent(alpha, gamma=1.0, r_lo=20.0, r_hi=200.0, num=9):
    """Least-squares log-log slope of the amplitude density on ``[r_lo, r_hi]``.

    For ``alpha < 2`` the slope approaches ``-(1 + alpha)``: the radial law
    has no moment of order ``>= alpha``.
    """
    r = np.geomspace(r_lo, r_hi, num)
    g = np.array([amplitude_density(x, alpha, gamma) for x in r])
    slope, _ = np.polyfit(np.log(r), np.log(g), 1)
    return float(slope)
