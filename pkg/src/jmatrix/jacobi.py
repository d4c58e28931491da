"""Symmetric tridiagonal matrices: truncation, Sturm-sequence eigenvalues, Gauss quadrature.

Eigenvalues come from bisection on Sturm counts, vectorized over all eigenvalues at
once and finished with guarded Newton steps.  The counting recurrence works with
ratios of consecutive leading minors, so matrices whose entries grow geometrically
(entries of size 1e60 are routine for the q-models) need no rescaling.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal, eigvalsh_tridiagonal

from .errors import NonpositiveOffdiagonal, ReducibleAt
from .recurrences import OrthonormalCoeffs, orthonormal_table

_EPS = np.finfo(float).eps
_SAFMIN = np.finfo(float).tiny
_SMALL_WEIGHT = 1e-8


@dataclass(frozen=True)
class SymTridiagonal:
    """N x N symmetric tridiagonal matrix with strictly positive off-diagonal."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.diag, dtype=float)
        e = np.asarray(self.offdiag, dtype=float)
        if d.ndim != 1 or e.shape != (max(d.size - 1, 0),):
            raise ValueError("offdiag must have length N-1")
        bad = np.nonzero(~(e > 0))[0]
        if bad.size:
            n = int(bad[0]) + 1
            if e[bad[0]] == 0:
                raise ReducibleAt(n)
            raise NonpositiveOffdiagonal(n, float(e[bad[0]]))
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def N(self) -> int:
        return self.diag.size

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)

    def quadratic_form(self, v) -> float:
        v = np.asarray(v, dtype=float)
        return float(v @ (self.diag * v) + 2 * np.sum(self.offdiag * v[:-1] * v[1:]))


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    total_mass: float

    def integrate(self, f) -> float:
        return float(np.sum(self.weights * f(self.nodes)))


def _coeff_arrays(op, N: int):
    """(b_0..b_{N-1}, a_1..a_{N-1}) from anything exposing vectorized ``b`` and ``a``."""
    b = np.asarray(op.b(np.arange(N)), dtype=float)
    a = np.asarray(op.a(np.arange(1, N)), dtype=float) if N > 1 else np.zeros(0)
    return b, a


def truncate(op, N: int) -> SymTridiagonal:
    """Leading N x N section. Raises NonpositiveOffdiagonal (or ReducibleAt) on a_n <= 0."""
    if N < 1:
        raise ValueError("N must be positive")
    return SymTridiagonal(*_coeff_arrays(op, N))


def truncate_blocks(op, N: int) -> list[SymTridiagonal]:
    """Leading N x N section split into irreducible blocks at exact zeros of a_n."""
    b, a = _coeff_arrays(op, N)
    neg = np.nonzero(a < 0)[0]
    if neg.size:
        raise NonpositiveOffdiagonal(int(neg[0]) + 1, float(a[neg[0]]))
    cuts = [0] + [int(i) + 1 for i in np.nonzero(a == 0)[0]] + [N]
    return [SymTridiagonal(b[s:t], a[s:t - 1]) for s, t in zip(cuts[:-1], cuts[1:])]


def gershgorin_bounds(T: SymTridiagonal) -> tuple[float, float]:
    r = np.zeros(T.N)
    r[:-1] += T.offdiag
    r[1:] += T.offdiag
    return float(np.min(T.diag - r)), float(np.max(T.diag + r))


def sturm_count(T: SymTridiagonal, lam) -> np.ndarray:
    """Number of eigenvalues strictly below each entry of ``lam``."""
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    e2 = T.offdiag**2
    # pivot floor as in LAPACK's stebz: safe minimum times the largest squared coupling
    pivmin = _SAFMIN * max(1.0, float(np.max(e2)) if T.N > 1 else 1.0)
    count = np.zeros(lam.shape, dtype=np.int64)
    d = T.diag[0] - lam
    for k in range(T.N):
        if k:
            d = (T.diag[k] - lam) - e2[k - 1] / d
        d = np.where(np.abs(d) < pivmin, -pivmin, d)
        count += d < 0
    return count


def _newton_refine(T: SymTridiagonal, lam, lo, hi, steps: int = 2):
    e2 = T.offdiag**2
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for _ in range(steps):
            lam = _newton_step(T, e2, lam, lo, hi)
    return lam


def _newton_step(T, e2, lam, lo, hi):
    """One Newton step on det(T - lam) using the ratio recurrence and its derivative."""
    d = T.diag[0] - lam
    dd = -np.ones_like(lam)
    s = dd / d
    for k in range(1, T.N):
        ratio = e2[k - 1] / d
        dd = -1.0 + ratio * dd / d
        d = (T.diag[k] - lam) - ratio
        s = s + dd / d
    new = lam - 1.0 / s
    ok = np.isfinite(new) & (new >= lo) & (new <= hi)
    return np.where(ok, new, lam)


def eigenvalues(T: SymTridiagonal, refine: bool = True) -> np.ndarray:
    """All eigenvalues, descending, by simultaneous Sturm bisection."""
    N = T.N
    if N == 1:
        return T.diag.copy()
    glo, ghi = gershgorin_bounds(T)
    width = max(ghi - glo, 1e-300)
    lo = np.full(N, glo - 1e-12 * width)
    hi = np.full(N, ghi + 1e-12 * width)
    j = np.arange(N)                     # ascending index of the target eigenvalue
    for _ in range(4000):
        tol = 2 * _EPS * np.maximum(np.abs(lo), np.abs(hi)) + 1e-300
        active = (hi - lo) > tol
        if not np.any(active):
            break
        mid = 0.5 * (lo[active] + hi[active])
        c = sturm_count(T, mid)
        up = c >= j[active] + 1
        lo_a, hi_a = lo[active], hi[active]
        hi_a = np.where(up, mid, hi_a)
        lo_a = np.where(up, lo_a, mid)
        lo[active], hi[active] = lo_a, hi_a
    lam = 0.5 * (lo + hi)
    if refine:
        lam = _newton_refine(T, lam, lo, hi)
    return lam[::-1]


def eigenvalues_lapack(T: SymTridiagonal) -> np.ndarray:
    """Reference path through LAPACK, descending."""
    return eigvalsh_tridiagonal(T.diag, T.offdiag)[::-1]


def golub_welsch(coeffs: OrthonormalCoeffs, N: int, total_mass: float) -> QuadratureRule:
    """N-point Gauss rule: nodes are eigenvalues, weights are total mass times the
    squared first eigenvector components.

    Eigenvector components are accurate only to roundoff relative to the largest one,
    so weights below ``_SMALL_WEIGHT`` of the largest come from the Christoffel form instead.
    """
    T = truncate(coeffs, N)
    nodes = eigenvalues(T)[::-1]
    _, vec = eigh_tridiagonal(T.diag, T.offdiag)
    w = total_mass * vec[0, :] ** 2
    small = w < _SMALL_WEIGHT * np.max(w)
    if np.any(small):
        w[small] = christoffel_weights(coeffs, nodes, total_mass)[small]
    if np.any(np.diff(nodes) <= 0):
        raise ArithmeticError("quadrature nodes are not strictly increasing")
    if not np.all(w > 0):
        raise ArithmeticError("quadrature weight underflowed to zero")
    return QuadratureRule(nodes, w, float(total_mass))


def christoffel_weights(coeffs: OrthonormalCoeffs, nodes, total_mass: float) -> np.ndarray:
    """Weights from ``1 / sum_j p_j(x_k)^2`` with orthonormal p_j; a cross-check for golub_welsch."""
    N = len(nodes)
    tab = orthonormal_table(coeffs, N - 1, np.asarray(nodes, dtype=float), total_mass)
    return 1.0 / np.sum(tab**2, axis=0)


def rayleigh_quotient(T: SymTridiagonal, v) -> float:
    v = np.asarray(v, dtype=float)
    nrm = float(v @ v)
    return T.quadratic_form(v) / nrm if nrm > 0 else 0.0


__all__ = [
    "SymTridiagonal", "QuadratureRule", "truncate", "truncate_blocks", "gershgorin_bounds",
    "sturm_count", "eigenvalues", "eigenvalues_lapack", "golub_welsch", "christoffel_weights",
    "rayleigh_quotient",
]
