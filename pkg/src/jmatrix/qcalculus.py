"""q-calculus: Askey-Wilson divided differences, their sinh variants, q-Pochhammer
symbols and the forward/backward differences used for lattice families.

Functions of ``x = (z + 1/z)/2`` are carried around as their "breve" form, a callable
of ``z``.  That makes the operators composable: ``D_q`` applied to a breve function
returns another breve function, which may be evaluated off the unit circle.  The same
holds for the hyperbolic parametrization ``x = (u - 1/u)/2``.

Breve functions need not be invariant under ``z -> 1/z``.  Weights carrying a factor
``1/sin(theta)`` are represented with ``sin(theta) = (z - 1/z)/(2i)``, which flips sign
under inversion.  The ``symmetric`` flag tracks this; both operators preserve it and
products combine it.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DenominatorVanishes

_TINY = 1e-300
_POCH_EPS = 1e-17
_IMAG_TOL = 1e-12


# --------------------------------------------------------------------------- q-Pochhammer

def qpochhammer_inf(a, q: float, max_terms: int = 100000):
    """Infinite product (a; q)_inf and the number of factors used.

    Multiplication stops once every factor differs from 1 by less than 1e-17.
    Works elementwise on arrays, including complex ones.
    """
    a = np.asarray(a)
    out = np.ones_like(a, dtype=np.result_type(a, float))
    term = a.astype(out.dtype, copy=True)
    k = 0
    while k < max_terms:
        if np.all(np.abs(term) < _POCH_EPS):
            break
        out = out * (1 - term)
        term = term * q
        k += 1
    if out.ndim == 0:
        out = out[()]
    return out, k


def qpochhammer(a, q: float, n: int | None = None):
    """(a; q)_n, or the infinite product when ``n`` is None."""
    if n is None:
        return qpochhammer_inf(a, q)[0]
    a = np.asarray(a)
    out = np.ones_like(a, dtype=np.result_type(a, float))
    if n >= 0:
        for k in range(n):
            out = out * (1 - a * q**k)
    else:
        # (a;q)_{-m} = 1 / (a q^{-m}; q)_m
        m = -n
        for k in range(m):
            out = out / (1 - a * q ** (k - m))
    if out.ndim == 0:
        out = out[()]
    return out


def qpochhammer_multi(args, q: float, n: int | None = None):
    """Product of several q-Pochhammer symbols sharing ``q`` and ``n``."""
    out = 1.0
    for a in args:
        out = out * qpochhammer(a, q, n)
    return out


# --------------------------------------------------------------------------- containers

def _as_array(z):
    return np.asarray(z, dtype=complex)


@dataclass(frozen=True)
class ZParametrizedFn:
    """A function of ``x = (z + 1/z)/2`` stored through its breve form ``f(z)``."""

    breve: Callable[[np.ndarray], np.ndarray]
    symmetric: bool = True

    @classmethod
    def from_x(cls, f: Callable[[np.ndarray], np.ndarray]) -> "ZParametrizedFn":
        """Wrap an ordinary (analytic) function of x."""
        return cls(lambda z: f((z + 1 / z) / 2), True)

    def at_z(self, z):
        return self.breve(_as_array(z))

    def __call__(self, x):
        return _real(self.at_z(z_of_x(x)))

    def __mul__(self, other: "ZParametrizedFn") -> "ZParametrizedFn":
        f, g = self.breve, other.breve
        return ZParametrizedFn(lambda z: f(z) * g(z), self.symmetric == other.symmetric)

    def __truediv__(self, other: "ZParametrizedFn") -> "ZParametrizedFn":
        f, g = self.breve, other.breve
        return ZParametrizedFn(lambda z: f(z) / g(z), self.symmetric == other.symmetric)

    def __add__(self, other: "ZParametrizedFn") -> "ZParametrizedFn":
        if self.symmetric != other.symmetric:
            raise ValueError("cannot add functions of opposite parity")
        f, g = self.breve, other.breve
        return ZParametrizedFn(lambda z: f(z) + g(z), self.symmetric)

    def scale(self, c: complex) -> "ZParametrizedFn":
        f = self.breve
        return ZParametrizedFn(lambda z: c * f(z), self.symmetric)


@dataclass(frozen=True)
class SinhParametrizedFn:
    """A function of ``x = (u - 1/u)/2`` with ``u = e^xi > 0`` stored as ``f(u)``."""

    breve: Callable[[np.ndarray], np.ndarray]

    @classmethod
    def from_x(cls, f: Callable[[np.ndarray], np.ndarray]) -> "SinhParametrizedFn":
        return cls(lambda u: f((u - 1 / u) / 2))

    def at_u(self, u):
        return self.breve(np.asarray(u, dtype=float))

    def __call__(self, x):
        return self.at_u(u_of_x(x))

    def __mul__(self, other: "SinhParametrizedFn") -> "SinhParametrizedFn":
        f, g = self.breve, other.breve
        return SinhParametrizedFn(lambda u: f(u) * g(u))

    def __truediv__(self, other: "SinhParametrizedFn") -> "SinhParametrizedFn":
        f, g = self.breve, other.breve
        return SinhParametrizedFn(lambda u: f(u) / g(u))


def z_of_x(x):
    """Branch ``z = e^{i theta}`` with ``theta`` in [0, pi] for |x| <= 1; real z >= 1 otherwise."""
    x = np.asarray(x, dtype=float)
    inside = np.abs(x) <= 1
    z = np.where(
        inside,
        x + 1j * np.sqrt(np.clip(1 - x * x, 0, None)),
        x + np.sign(x) * np.sqrt(np.clip(x * x - 1, 0, None)),
    )
    return z


def u_of_x(x):
    x = np.asarray(x, dtype=float)
    return x + np.sqrt(x * x + 1)


def _real(v):
    v = np.asarray(v)
    if np.iscomplexobj(v):
        scale = np.maximum(1.0, np.abs(v.real))
        if np.any(np.abs(v.imag) > _IMAG_TOL * scale):
            bad = np.max(np.abs(v.imag) / scale)
            raise ArithmeticError(f"result has non-negligible imaginary part ({bad:.2e})")
        v = v.real
    return v[()] if v.ndim == 0 else v


def _as_zfn(f) -> ZParametrizedFn:
    return f if isinstance(f, ZParametrizedFn) else ZParametrizedFn.from_x(f)


def _as_sfn(f) -> SinhParametrizedFn:
    return f if isinstance(f, SinhParametrizedFn) else SinhParametrizedFn.from_x(f)


# --------------------------------------------------------------------------- trigonometric

def aw_dq_fn(f, q: float) -> ZParametrizedFn:
    """Askey-Wilson divided difference ``D_q f`` as a breve function."""
    f = _as_zfn(f)
    s = np.sqrt(q)
    fb = f.breve

    def breve(z):
        z = _as_array(z)
        den = (s - 1 / s) * (z - 1 / z) / 2
        if np.any(np.abs(den) < _TINY):
            raise DenominatorVanishes(z[np.abs(den) < _TINY].tolist())
        return (fb(s * z) - fb(z / s)) / den

    return ZParametrizedFn(breve, f.symmetric)


def aw_aq_fn(f, q: float) -> ZParametrizedFn:
    """Averaging operator ``A_q f`` as a breve function."""
    f = _as_zfn(f)
    s = np.sqrt(q)
    fb = f.breve
    return ZParametrizedFn(lambda z: (fb(s * _as_array(z)) + fb(_as_array(z) / s)) / 2, f.symmetric)


def aw_dq(f, x, q: float):
    """Evaluate ``D_q f`` at real ``x``; ``f`` is a callable of x or a breve function."""
    return aw_dq_fn(f, q)(x)


def aw_aq(f, x, q: float):
    return aw_aq_fn(f, q)(x)


# --------------------------------------------------------------------------- hyperbolic

def sinh_dq_fn(f, q: float) -> SinhParametrizedFn:
    """Divided difference for ``x = sinh(xi)``; the denominator never vanishes for u > 0."""
    f = _as_sfn(f)
    s = np.sqrt(q)
    fb = f.breve

    def breve(u):
        u = np.asarray(u, dtype=float)
        den = (s - 1 / s) * (u + 1 / u) / 2
        return (fb(s * u) - fb(u / s)) / den

    return SinhParametrizedFn(breve)


def sinh_aq_fn(f, q: float) -> SinhParametrizedFn:
    f = _as_sfn(f)
    s = np.sqrt(q)
    fb = f.breve
    return SinhParametrizedFn(lambda u: (fb(s * np.asarray(u, float)) + fb(np.asarray(u, float) / s)) / 2)


def sinh_dq(f, x, q: float):
    return sinh_dq_fn(f, q)(x)


def sinh_aq(f, x, q: float):
    return sinh_aq_fn(f, q)(x)


# --------------------------------------------------------------------------- lattice

def delta(f, x):
    """Forward difference f(x+1) - f(x)."""
    x = np.asarray(x, dtype=float)
    return f(x + 1) - f(x)


def nabla(f, x):
    """Backward difference f(x) - f(x-1)."""
    x = np.asarray(x, dtype=float)
    return f(x) - f(x - 1)
