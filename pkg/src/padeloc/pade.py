"""Padé parameters of the Z-transform of a short complex series.

For a series ``a_0 .. a_{2p-1}`` the ``[p-1, p]`` Padé approximant of
``F(z) = sum_k a_k z**-k`` has

* poles: generalized eigenvalues of the Hankel pencil ``(U1, U0)`` built from ``a``;
* zeros: generalized eigenvalues of the ``(p-1)``-pencil built from the
  reciprocal series ``b`` of ``1 / F``;
* residuals ``c`` at the poles, solving ``a_k = sum_j c_j xi_j**k``;
* residuals ``d`` at the zeros, solving ``b_{k+2} = sum_j d_j zeta_j**k``.

Poles, zeros and the normalized residual vectors are invariant under
multiplication of the series by a positive scalar.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateNodesError,
    DegeneratePencilError,
    DomainError,
    SingularSeriesError,
    UnavailableStatisticError,
)

__all__ = [
    "ComplexObservationSeries",
    "HankelPencil",
    "PadeParameters",
    "toeplitz_inverse_series",
    "hankel",
    "build_hankel_pencil",
    "pencil_eigenvalues",
    "vandermonde_residuals",
    "extract_pade_parameters",
    "select_statistic",
    "pole_transform",
    "STATISTICS",
    "POOL_RULES",
]

COND_LIMIT = 1e12
NODE_SEPARATION = 1e-12

STATISTICS = ("pole", "zero", "res_pole", "res_zero")
POOL_RULES = ("largest_modulus", "first")


@dataclass(frozen=True)
class ComplexObservationSeries:
    """``n = 2p`` complex observations of one replicate."""

    a: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=complex).ravel()
        if a.size < 2 or a.size % 2:
            raise DomainError(f"series length must be even and >= 2, got {a.size}")
        if not np.all(np.isfinite(a)):
            raise DomainError("series contains non-finite entries")
        object.__setattr__(self, "a", a)

    @property
    def p(self):
        return self.a.size // 2


@dataclass(frozen=True)
class HankelPencil:
    m1: np.ndarray
    m0: np.ndarray

    @property
    def size(self):
        return self.m0.shape[0]


@dataclass(frozen=True)
class PadeParameters:
    poles: np.ndarray
    zeros: np.ndarray
    residuals: np.ndarray
    zero_residuals: np.ndarray

    @property
    def p(self):
        return self.poles.size

    @property
    def normalized_c(self):
        return _normalize(self.residuals)

    @property
    def normalized_d(self):
        return _normalize(self.zero_residuals)

    def reconstruct(self, k):
        """Evaluate ``sum_j c_j xi_j**k`` for integer indices ``k``."""
        k = np.asarray(k)
        return (self.residuals[None, :] * self.poles[None, :] ** k[:, None]).sum(axis=1)


def _normalize(v):
    nrm = np.linalg.norm(v)
    if v.size == 0 or nrm == 0:
        return v.copy()
    return v / nrm


def toeplitz_inverse_series(a):
    """First column ``b`` of ``T(a)^{-1}`` for the lower-triangular Toeplitz ``T(a)``.

    Equivalently the leading coefficients of the reciprocal power series:
    ``b_0 = 1 / a_0`` and ``b_k = -(1 / a_0) * sum_{j=1..k} a_j b_{k-j}``.
    """
    a = np.asarray(a, dtype=complex).ravel()
    if a.size == 0:
        return a.copy()
    if a[0] == 0:
        raise SingularSeriesError("leading coefficient a_0 is zero")
    b = np.empty_like(a)
    inv = 1.0 / a[0]
    b[0] = inv
    for k in range(1, a.size):
        b[k] = -inv * np.dot(a[1 : k + 1], b[k - 1 :: -1])
    return b


def hankel(values, size):
    """``size x size`` Hankel matrix with entry ``(i, j) = values[i + j]``."""
    values = np.asarray(values, dtype=complex)
    if values.size < 2 * size - 1:
        raise DomainError(f"need {2 * size - 1} values for a {size}x{size} Hankel matrix")
    idx = np.add.outer(np.arange(size), np.arange(size))
    return values[idx]


def build_hankel_pencil(series, which="poles"):
    """Hankel pencil whose generalized eigenvalues are the poles or zeros.

    For ``which="poles"`` ``series`` is ``a`` of length ``2p`` and
    ``U0 = H(a_0 .. a_{2p-2})``, ``U1 = H(a_1 .. a_{2p-1})``.  For
    ``which="zeros"`` ``series`` is the reciprocal series ``b`` (length
    ``2p``, ``p >= 2``) and the ``(p-1)``-pencil uses ``b_2 .. b_{2p-2}`` and
    ``b_3 .. b_{2p-1}``.
    """
    s = np.asarray(series, dtype=complex).ravel()
    if s.size < 2 or s.size % 2:
        raise DomainError(f"series length must be even and >= 2, got {s.size}")
    p = s.size // 2
    if which == "poles":
        return HankelPencil(m1=hankel(s[1:], p), m0=hankel(s[:-1], p))
    if which == "zeros":
        if p < 2:
            raise DomainError("zeros need p >= 2")
        return HankelPencil(m1=hankel(s[3:], p - 1), m0=hankel(s[2:-1], p - 1))
    raise DomainError(f"which must be 'poles' or 'zeros', got {which!r}")


def _sort_eigenvalues(lam):
    lam = np.asarray(lam, dtype=complex)
    # descending modulus, then ascending argument
    order = np.lexsort((np.angle(lam), -np.abs(lam)))
    return lam[order]


def _quadratic_pencil_roots(m1, m0):
    # det(m1 - lam m0) = qa lam^2 - qb lam + qc
    qa = m0[0, 0] * m0[1, 1] - m0[0, 1] * m0[1, 0]
    qb = m1[0, 0] * m0[1, 1] + m1[1, 1] * m0[0, 0] - m1[0, 1] * m0[1, 0] - m1[1, 0] * m0[0, 1]
    qc = m1[0, 0] * m1[1, 1] - m1[0, 1] * m1[1, 0]
    disc = np.sqrt(qb * qb - 4.0 * qa * qc)
    # pick the sign that avoids cancellation
    if abs(qb + disc) < abs(qb - disc):
        disc = -disc
    q = 0.5 * (qb + disc)
    if q == 0:
        return np.zeros(2, dtype=complex)
    return np.array([q / qa, qc / q])


def pencil_eigenvalues(pencil):
    """Generalized eigenvalues of ``(M1, M0)``, i.e. roots of ``det(M1 - lam M0)``.

    Closed forms are used for ``p <= 2``; larger pencils are reduced to the
    standard eigenproblem of ``M0^{-1} M1`` (LAPACK ``geev``).  Results are
    sorted by descending modulus, ties by ascending argument.

    Raises
    ------
    DegeneratePencilError
        If the condition number of ``M0`` exceeds 1e12.
    """
    m1 = np.asarray(pencil.m1, dtype=complex)
    m0 = np.asarray(pencil.m0, dtype=complex)
    q = m0.shape[0]
    if q == 0:
        return np.zeros(0, dtype=complex)
    if not (np.all(np.isfinite(m0)) and np.all(np.isfinite(m1))):
        raise DegeneratePencilError("pencil has non-finite entries")
    if q == 1:
        if m0[0, 0] == 0:
            raise DegeneratePencilError("1x1 pencil with zero right-hand entry")
        return np.array([m1[0, 0] / m0[0, 0]])
    cond = np.linalg.cond(m0)
    if not cond <= COND_LIMIT:
        raise DegeneratePencilError(f"right-hand Hankel matrix is ill conditioned (cond={cond:.3g})")
    if q == 2:
        lam = _quadratic_pencil_roots(m1, m0)
    else:
        lam = np.linalg.eigvals(np.linalg.solve(m0, m1))
    return _sort_eigenvalues(lam)


def vandermonde_residuals(nodes, rhs):
    """Solve ``sum_j x_j nodes_j**k = rhs_k`` for ``k = 0 .. q-1``.

    Raises
    ------
    DegenerateNodesError
        If two nodes are closer than ``1e-12 * max |node|``.
    """
    nodes = np.asarray(nodes, dtype=complex).ravel()
    rhs = np.asarray(rhs, dtype=complex).ravel()
    q = nodes.size
    if rhs.size != q:
        raise DomainError(f"need {q} right-hand values, got {rhs.size}")
    if q == 0:
        return rhs.copy()
    if q > 1:
        gaps = np.abs(nodes[:, None] - nodes[None, :])
        gaps[np.diag_indices(q)] = np.inf
        if gaps.min() <= NODE_SEPARATION * np.abs(nodes).max():
            raise DegenerateNodesError("Vandermonde nodes coalesce")
    v = nodes[None, :] ** np.arange(q)[:, None]
    return np.linalg.solve(v, rhs)


def extract_pade_parameters(series):
    """Poles, zeros and residuals of the ``[p-1, p]`` Padé approximant.

    ``series`` may be a :class:`ComplexObservationSeries` or any sequence of
    ``2p`` complex numbers.
    """
    if not isinstance(series, ComplexObservationSeries):
        series = ComplexObservationSeries(series)
    a = series.a
    p = series.p
    poles = pencil_eigenvalues(build_hankel_pencil(a, "poles"))
    residuals = vandermonde_residuals(poles, a[:p])
    if p >= 2:
        b = toeplitz_inverse_series(a)
        zeros = pencil_eigenvalues(build_hankel_pencil(b, "zeros"))
        zero_residuals = vandermonde_residuals(zeros, b[2 : p + 1])
    else:
        zeros = np.zeros(0, dtype=complex)
        zero_residuals = np.zeros(0, dtype=complex)
    return PadeParameters(poles=poles, zeros=zeros, residuals=residuals, zero_residuals=zero_residuals)


def select_statistic(params, kind="pole", rule="largest_modulus"):
    """Reduce Padé parameters to one bivariate point ``(Re, Im)``.

    ``rule="largest_modulus"`` picks the pole (zero) of largest modulus and
    commutes with rotations of the pole plane.  ``rule="first"`` picks the
    one with the smallest principal argument, which does not.  Residual
    kinds return the normalized residual paired with the selected pole or
    zero.
    """
    if kind not in STATISTICS:
        raise DomainError(f"unknown statistic {kind!r}")
    if rule not in POOL_RULES:
        raise DomainError(f"unknown pool rule {rule!r}")
    if kind in ("zero", "res_zero") and params.zeros.size == 0:
        raise UnavailableStatisticError(f"statistic {kind!r} needs p >= 2")
    nodes = params.poles if kind in ("pole", "res_pole") else params.zeros
    j = int(np.argmax(np.abs(nodes))) if rule == "largest_modulus" else int(np.argmin(np.angle(nodes)))
    if kind == "pole":
        v = params.poles[j]
    elif kind == "zero":
        v = params.zeros[j]
    elif kind == "res_pole":
        v = params.normalized_c[j]
    else:
        v = params.normalized_d[j]
    return np.array([v.real, v.imag])


def pole_transform(z):
    """``|z|**2 / (1 + |z|**2)``; Uniform(0, 1) for a pole under the null."""
    r2 = np.abs(z) ** 2
    return r2 / (1.0 + r2)
