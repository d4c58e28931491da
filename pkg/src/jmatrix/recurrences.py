"""Orthogonal polynomial families: three-term recurrences, normalizations, measures.

Every family is described by its monic recurrence

    x p_n = p_{n+1} + alpha_n p_n + beta_n p_{n-1},    p_{-1} = 0, p_0 = 1,

together with the leading coefficient of the customary ("standard") normalization,
the eigenvalue of the family's characteristic operator when there is one, and the
orthogonality measure.  The orthonormal form uses ``b_n = alpha_n`` and
``a_n = sqrt(beta_n)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Optional

import numpy as np
from scipy import special

from .errors import NonpositiveBeta, OverflowHorizon, ParameterOutOfRange
from .qcalculus import qpochhammer, qpochhammer_inf, qpochhammer_multi

SeqFn = Callable[[np.ndarray], np.ndarray]


class Family(str, Enum):
    LAGUERRE = "laguerre"
    MEIXNER = "meixner"
    MEIXNER_POLLACZEK = "meixner-pollaczek"
    ULTRASPHERICAL = "ultraspherical"
    Q_ULTRASPHERICAL = "q-ultraspherical"
    CHEBYSHEV_U = "chebyshev-u"
    AL_SALAM_CHIHARA = "al-salam-chihara"
    Q_INV_HERMITE = "q-inverse-hermite"
    CONTINUOUS_DUAL_HAHN = "continuous-dual-hahn"


@dataclass(frozen=True)
class FamilyParams:
    """Parameters for any family; only the fields the family uses are read."""

    alpha: Optional[float] = None   # Laguerre
    beta: Optional[float] = None    # Meixner, q-ultraspherical
    c: Optional[float] = None       # Meixner
    q: Optional[float] = None
    t1: Optional[float] = None      # Al-Salam-Chihara
    t2: Optional[float] = None
    nu: Optional[float] = None      # ultraspherical
    lam: Optional[float] = None     # Meixner-Pollaczek
    phi: Optional[float] = None
    a_ext: Optional[float] = None   # lattice parameter of the extremal q^{-1}-Hermite measure
    cdh_a: Optional[float] = None   # continuous dual Hahn
    cdh_b: Optional[float] = None
    cdh_c: Optional[float] = None

    def as_dict(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if v is not None}


def _n(n) -> np.ndarray:
    return np.asarray(n, dtype=float)


@dataclass(frozen=True)
class MonicCoeffs:
    """Monic recurrence coefficients as vectorized callables of the index."""

    alpha: SeqFn
    beta: SeqFn

    def alphas(self, N: int) -> np.ndarray:
        """alpha_0 .. alpha_{N-1}"""
        return np.asarray(self.alpha(np.arange(N)), dtype=float)

    def betas(self, N: int) -> np.ndarray:
        """beta_1 .. beta_N"""
        return np.asarray(self.beta(np.arange(1, N + 1)), dtype=float)


@dataclass(frozen=True)
class OrthonormalCoeffs:
    """``x p_n = a_{n+1} p_{n+1} + b_n p_n + a_n p_{n-1}``; ``a`` is stored directly."""

    b: SeqFn
    a: SeqFn

    def bs(self, N: int) -> np.ndarray:
        return np.asarray(self.b(np.arange(N)), dtype=float)

    def as_(self, N: int) -> np.ndarray:
        """a_1 .. a_N"""
        return np.asarray(self.a(np.arange(1, N + 1)), dtype=float)


@dataclass(frozen=True)
class MeasureDescriptor:
    kind: str        # "ContinuousDensity", "DiscreteLattice" or "DiscreteBilateral"
    support: tuple
    total_mass: float
    density: Optional[Callable] = None          # density in x for continuous measures
    masses: Optional[Callable] = None           # k -> (x_k, m_k) for discrete measures
    truncation_index: Optional[int] = None      # factors used in an infinite product


@dataclass(frozen=True)
class FamilySpec:
    family: Family
    params: FamilyParams
    monic: MonicCoeffs
    lead: SeqFn                                 # leading coefficient of the standard form
    measure: MeasureDescriptor
    eigen: Optional[SeqFn] = None               # eigenvalue of the family operator
    norm: Optional[SeqFn] = None                # closed-form standard norm h_n, when known
    notes: tuple = field(default_factory=tuple)

    @property
    def orthonormal(self) -> OrthonormalCoeffs:
        return monic_to_orthonormal(self.monic)

    def hn(self, n) -> np.ndarray:
        """Squared norm of the standard polynomial of degree n."""
        if self.norm is not None:
            return self.norm(n)
        n = np.atleast_1d(np.asarray(n, dtype=int))
        out = np.empty(n.shape)
        for i, k in enumerate(n):
            out[i] = self.measure.total_mass * np.prod(self.monic.betas(int(k))) * float(self.lead(k)) ** 2
        return out if out.size > 1 else out[0]


# --------------------------------------------------------------------------- conversions

def monic_to_orthonormal(monic: MonicCoeffs, N: Optional[int] = None) -> OrthonormalCoeffs:
    """Orthonormal coefficients ``b_n = alpha_n``, ``a_n = sqrt(beta_n)``.

    With ``N`` given, beta_1..beta_N are checked for positivity up front.
    """
    if N is not None:
        bet = monic.betas(N)
        bad = np.nonzero(~(bet > 0))[0]
        if bad.size:
            raise NonpositiveBeta(int(bad[0]) + 1, float(bet[bad[0]]))
    beta = monic.beta

    def a(n):
        v = np.asarray(beta(n), dtype=float)
        if np.any(v < 0):
            k = np.asarray(n).ravel()[np.argmax((v < 0).ravel())]
            raise NonpositiveBeta(int(k), float(v.ravel()[np.argmax((v < 0).ravel())]))
        return np.sqrt(v)

    return OrthonormalCoeffs(monic.alpha, a)


def orthonormal_to_monic(ortho: OrthonormalCoeffs) -> MonicCoeffs:
    a = ortho.a
    return MonicCoeffs(ortho.b, lambda n: np.asarray(a(n), dtype=float) ** 2)


# --------------------------------------------------------------------------- evaluation

_HORIZON = 1e300


def eval_poly_table(monic: MonicCoeffs, n: int, x) -> np.ndarray:
    """Monic p_0..p_n at ``x``; shape ``(n+1,) + x.shape``.

    Raises OverflowHorizon when values leave the double range.
    """
    x = np.asarray(x)
    dtype = np.result_type(x, float)
    out = np.empty((n + 1,) + x.shape, dtype=dtype)
    out[0] = 1.0
    if n == 0:
        return out
    al = monic.alphas(n)
    be = monic.betas(n)
    out[1] = x - al[0]
    for k in range(1, n):
        out[k + 1] = (x - al[k]) * out[k] - be[k - 1] * out[k - 1]
        if not np.all(np.abs(out[k + 1]) < _HORIZON):
            raise OverflowHorizon(k + 1)
    return out


def eval_poly(monic: MonicCoeffs, n: int, x):
    """Monic p_n(x) by forward recurrence."""
    return eval_poly_table(monic, n, x)[n]


def eval_poly_scaled(monic: MonicCoeffs, n: int, x):
    """Monic p_n(x) as ``(mantissa, exponent)`` with value ``mantissa * 2**exponent``.

    The pair (p_k, p_{k-1}) is renormalized by a common power of two each step, so
    the evaluation never overflows.
    """
    x = np.asarray(x, dtype=float)
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    expo = np.zeros(x.shape, dtype=np.int64)
    if n == 0:
        return cur, expo
    al = monic.alphas(n)
    be = monic.betas(n)
    for k in range(n):
        nxt = (x - al[k]) * cur - (be[k - 1] * prev if k > 0 else 0.0)
        prev, cur = cur, nxt
        big = np.maximum(np.abs(prev), np.abs(cur))
        _, e = np.frexp(np.where(big > 0, big, 1.0))
        prev = np.ldexp(prev, -e)
        cur = np.ldexp(cur, -e)
        expo = expo + e
    return cur, expo


def eval_poly_derivs(monic: MonicCoeffs, n: int, x):
    """Monic p_n, p_n' and p_n'' at ``x`` via the recurrence differentiated term by term."""
    x = np.asarray(x, dtype=float)
    p0, p1 = np.zeros_like(x), np.ones_like(x)
    d0, d1 = np.zeros_like(x), np.zeros_like(x)
    s0, s1 = np.zeros_like(x), np.zeros_like(x)
    al = monic.alphas(max(n, 1))
    be = monic.betas(max(n, 1))
    for k in range(n):
        bk = be[k - 1] if k > 0 else 0.0
        p2 = (x - al[k]) * p1 - bk * p0
        d2 = (x - al[k]) * d1 + p1 - bk * d0
        s2 = (x - al[k]) * s1 + 2 * d1 - bk * s0
        p0, p1, d0, d1, s0, s1 = p1, p2, d1, d2, s1, s2
    return p1, d1, s1


def orthonormal_table(ortho: OrthonormalCoeffs, n: int, x, total_mass: float = 1.0) -> np.ndarray:
    """Orthonormal p_0..p_n at ``x`` for a measure of the given total mass."""
    x = np.asarray(x)
    dtype = np.result_type(x, float)
    out = np.empty((n + 1,) + x.shape, dtype=dtype)
    out[0] = 1.0 / math.sqrt(total_mass)
    if n == 0:
        return out
    b = ortho.bs(n)
    a = ortho.as_(n)
    out[1] = (x - b[0]) * out[0] / a[0]
    for k in range(1, n):
        out[k + 1] = ((x - b[k]) * out[k] - a[k - 1] * out[k - 1]) / a[k]
    return out


def norm_hn(spec: FamilySpec, n: int) -> float:
    """Squared norm of the standard polynomial of degree n under the family measure."""
    return float(spec.hn(n))


def standard_poly(spec: FamilySpec, n: int, x):
    """The family's customary normalization: ``lead_n`` times the monic polynomial."""
    return float(spec.lead(n)) * eval_poly(spec.monic, n, x)


# --------------------------------------------------------------------------- families

def _req(params: FamilyParams, name: str, cond: Callable[[float], bool], text: str) -> float:
    v = getattr(params, name)
    if v is None or not np.isfinite(v) or not cond(v):
        raise ParameterOutOfRange(name, v, text)
    return float(v)


def _laguerre(p: FamilyParams) -> FamilySpec:
    al = _req(p, "alpha", lambda v: v > -1, "alpha > -1")
    monic = MonicCoeffs(lambda n: 2 * _n(n) + al + 1, lambda n: _n(n) * (_n(n) + al))
    return FamilySpec(
        Family.LAGUERRE, p, monic,
        lead=lambda n: (-1.0) ** _n(n) / special.factorial(_n(n)),
        measure=MeasureDescriptor(
            "ContinuousDensity", (0.0, math.inf), math.gamma(al + 1),
            density=lambda x: np.asarray(x, float) ** al * np.exp(-np.asarray(x, float)),
        ),
        eigen=lambda n: -_n(n),
        norm=lambda n: np.exp(special.gammaln(al + _n(n) + 1) - special.gammaln(_n(n) + 1)),
    )


def _meixner(p: FamilyParams) -> FamilySpec:
    be = _req(p, "beta", lambda v: v > 0, "beta > 0")
    c = _req(p, "c", lambda v: 0 < v < 1, "0 < c < 1")
    monic = MonicCoeffs(
        lambda n: (_n(n) + c * (_n(n) + be)) / (1 - c),
        lambda n: c * _n(n) * (_n(n) + be - 1) / (1 - c) ** 2,
    )

    def masses(k):
        k = np.asarray(k, dtype=float)
        return k, np.exp(special.gammaln(be + k) - special.gammaln(be) + k * math.log(c) - special.gammaln(k + 1))

    return FamilySpec(
        Family.MEIXNER, p, monic,
        lead=lambda n: ((c - 1) / c) ** _n(n) / special.poch(be, _n(n)),
        measure=MeasureDescriptor("DiscreteLattice", (0, math.inf), (1 - c) ** (-be), masses=masses),
        eigen=lambda n: _n(n) * (c - 1) / (c * be),
        norm=lambda n: c ** (-_n(n)) * special.factorial(_n(n)) / (special.poch(be, _n(n)) * (1 - c) ** be),
    )


def _meixner_pollaczek(p: FamilyParams) -> FamilySpec:
    lam = _req(p, "lam", lambda v: v > 0, "lambda > 0")
    phi = _req(p, "phi", lambda v: 0 < v < math.pi, "0 < phi < pi")
    s, ct = math.sin(phi), math.cos(phi) / math.sin(phi)
    monic = MonicCoeffs(
        lambda n: -(_n(n) + lam) * ct,
        lambda n: _n(n) * (_n(n) + 2 * lam - 1) / (4 * s * s),
    )

    def density(x):
        x = np.asarray(x, dtype=float)
        lg = special.loggamma(lam + 1j * x)
        return np.exp((2 * phi - math.pi) * x + 2 * lg.real) / (2 * math.pi)

    return FamilySpec(
        Family.MEIXNER_POLLACZEK, p, monic,
        lead=lambda n: (2 * s) ** _n(n) / special.factorial(_n(n)),
        measure=MeasureDescriptor(
            "ContinuousDensity", (-math.inf, math.inf), math.gamma(2 * lam) / (2 * s) ** (2 * lam), density=density
        ),
    )


def _ultraspherical(p: FamilyParams) -> FamilySpec:
    nu = _req(p, "nu", lambda v: v > -0.5 and v != 0, "nu > -1/2, nu != 0")
    monic = MonicCoeffs(
        lambda n: np.zeros_like(_n(n)),
        lambda n: _n(n) * (_n(n) + 2 * nu - 1) / (4 * (_n(n) + nu) * (_n(n) + nu - 1)),
    )
    return FamilySpec(
        Family.ULTRASPHERICAL, p, monic,
        lead=lambda n: 2.0 ** _n(n) * special.poch(nu, _n(n)) / special.factorial(_n(n)),
        measure=MeasureDescriptor(
            "ContinuousDensity", (-1.0, 1.0), math.sqrt(math.pi) * math.gamma(nu + 0.5) / math.gamma(nu + 1),
            density=lambda x: (1 - np.asarray(x, float) ** 2) ** (nu - 0.5),
        ),
        eigen=lambda n: -_n(n) * (_n(n) + 2 * nu),
    )


def _chebyshev_u(p: FamilyParams) -> FamilySpec:
    monic = MonicCoeffs(lambda n: np.zeros_like(_n(n)), lambda n: np.full_like(_n(n), 0.25))
    return FamilySpec(
        Family.CHEBYSHEV_U, p, monic,
        lead=lambda n: 2.0 ** _n(n),
        measure=MeasureDescriptor(
            "ContinuousDensity", (-1.0, 1.0), math.pi / 2, density=lambda x: np.sqrt(1 - np.asarray(x, float) ** 2)
        ),
        eigen=lambda n: -_n(n) * (_n(n) + 2),
    )


def _q_checked(p: FamilyParams) -> float:
    return _req(p, "q", lambda v: 0 < v < 1, "0 < q < 1")


def q_ultraspherical_weight_theta(theta, beta: float, q: float):
    """Weight in theta: ``(e^{2it}, e^{-2it}; q)_inf / (beta e^{2it}, beta e^{-2it}; q)_inf``."""
    z2 = np.exp(2j * np.asarray(theta, dtype=float))
    num = qpochhammer(z2, q) * qpochhammer(1 / z2, q)
    den = qpochhammer(beta * z2, q) * qpochhammer(beta / z2, q)
    return (num / den).real


def _q_ultraspherical(p: FamilyParams) -> FamilySpec:
    q = _q_checked(p)
    be = _req(p, "beta", lambda v: abs(v) < 1, "|beta| < 1")

    def beta_n(n):
        qn = q ** _n(n)
        return (1 - qn) * (1 - be * be * qn / q) / (4 * (1 - be * qn) * (1 - be * qn / q))

    monic = MonicCoeffs(lambda n: np.zeros_like(_n(n)), beta_n)
    mass, idx = qpochhammer_inf(np.array([be, q * be, q, be * be]), q)
    total = 2 * math.pi * mass[0] * mass[1] / (mass[2] * mass[3])

    def density(x):
        x = np.asarray(x, dtype=float)
        th = np.arccos(np.clip(x, -1, 1))
        return q_ultraspherical_weight_theta(th, be, q) / np.sin(th)

    def lead(n):
        n = np.atleast_1d(np.asarray(n, dtype=int))
        v = np.array([2.0**k * qpochhammer(be, q, int(k)) / qpochhammer(q, q, int(k)) for k in n])
        return v if v.size > 1 else v[0]

    def eigen(n):
        qn = q ** _n(n)
        return -4 * q * (1 - qn) * (1 - be * be * qn) / (qn * (1 - q) ** 2)

    return FamilySpec(
        Family.Q_ULTRASPHERICAL, p, monic, lead=lead,
        measure=MeasureDescriptor("ContinuousDensity", (-1.0, 1.0), float(total), density=density, truncation_index=idx),
        eigen=eigen,
    )


def asc_weight_theta(theta, t1: float, t2: float, q: float):
    """Al-Salam-Chihara weight in theta (measure w d theta on [0, pi])."""
    z = np.exp(1j * np.asarray(theta, dtype=float))
    num = qpochhammer(z * z, q) * qpochhammer(1 / (z * z), q)
    den = qpochhammer_multi([t1 * z, t1 / z, t2 * z, t2 / z], q)
    return (num / den).real


def _al_salam_chihara(p: FamilyParams) -> FamilySpec:
    q = _q_checked(p)
    t1 = _req(p, "t1", lambda v: 0 < abs(v) < 1, "0 < |t1| < 1")
    t2 = _req(p, "t2", lambda v: abs(v) < 1, "|t2| < 1")
    monic = MonicCoeffs(
        lambda n: (t1 + t2) * q ** _n(n) / 2,
        lambda n: (1 - q ** _n(n)) * (1 - t1 * t2 * q ** (_n(n) - 1)) / 4,
    )
    inf, idx = qpochhammer_inf(np.array([q, t1 * t2]), q)
    total = 2 * math.pi / (inf[0] * inf[1])

    def density(x):
        x = np.asarray(x, dtype=float)
        th = np.arccos(np.clip(x, -1, 1))
        return asc_weight_theta(th, t1, t2, q) / np.sin(th)

    def lead(n):
        n = np.atleast_1d(np.asarray(n, dtype=int))
        v = np.array([(2 * t1) ** k / qpochhammer(t1 * t2, q, int(k)) for k in n])
        return v if v.size > 1 else v[0]

    def norm(n):
        n = np.atleast_1d(np.asarray(n, dtype=int))
        v = np.array([
            total * qpochhammer(q, q, int(k)) * t1 ** (2 * int(k)) / qpochhammer(t1 * t2, q, int(k))
            for k in n
        ])
        return v if v.size > 1 else v[0]

    return FamilySpec(
        Family.AL_SALAM_CHIHARA, p, monic, lead=lead,
        measure=MeasureDescriptor("ContinuousDensity", (-1.0, 1.0), float(total), density=density, truncation_index=idx),
        norm=norm,
    )


def qhermite_masses(a: float, q: float):
    """Lattice and masses of the extremal measure for q^{-1}-Hermite polynomials.

    Returns ``(masses, truncation_index)`` where ``masses(k)`` gives ``(x_k, m_k)``.
    """
    den, idx = qpochhammer_inf(np.array([-a * a, -q / (a * a), q]), q)
    norm = float(np.prod(den))

    def masses(k):
        k = np.asarray(k, dtype=float)
        la, lq = math.log(a), math.log(q)
        with np.errstate(over="ignore"):
            x = (np.exp(-k * lq - la) - np.exp(k * lq + la)) / 2
        logm = 4 * k * la + k * (2 * k - 1) * lq + np.logaddexp(0.0, 2 * la + 2 * k * lq) - math.log(norm)
        return x, np.exp(logm)

    return masses, idx


def _q_inv_hermite(p: FamilyParams) -> FamilySpec:
    q = _q_checked(p)
    monic = MonicCoeffs(lambda n: np.zeros_like(_n(n)), lambda n: q ** (-_n(n)) * (1 - q ** _n(n)) / 4)
    if p.a_ext is not None:
        a = _req(p, "a_ext", lambda v: q < v <= 1, "q < a <= 1")
        masses, idx = qhermite_masses(a, q)
        measure = MeasureDescriptor("DiscreteBilateral", (-math.inf, math.inf), 1.0, masses=masses, truncation_index=idx)
    else:
        measure = MeasureDescriptor("DiscreteBilateral", (-math.inf, math.inf), 1.0)

    def norm(n):
        n = np.atleast_1d(np.asarray(n, dtype=int))
        v = np.array([q ** (-k * (k + 1) / 2) * qpochhammer(q, q, int(k)) for k in n])
        return v if v.size > 1 else v[0]

    return FamilySpec(
        Family.Q_INV_HERMITE, p, monic,
        lead=lambda n: 2.0 ** _n(n),
        measure=measure,
        eigen=lambda n: -4 * q * (1 - q ** _n(n)) / (1 - q) ** 2,
        norm=norm,
    )


def _continuous_dual_hahn(p: FamilyParams) -> FamilySpec:
    b = _req(p, "cdh_b", lambda v: v > 0, "b > 0")
    c = _req(p, "cdh_c", lambda v: v > 0, "c > 0")
    a = _req(p, "cdh_a", lambda v: True, "real")
    for name, s in (("cdh_a+b", a + b), ("cdh_a+c", a + c)):
        if s <= 0 and float(s).is_integer():
            raise ParameterOutOfRange(name, s, "not a nonpositive integer")

    def A(n):
        return (_n(n) + a + b) * (_n(n) + a + c)

    def C(n):
        return _n(n) * (_n(n) + b + c - 1)

    monic = MonicCoeffs(lambda n: A(n) + C(n) - a * a, lambda n: A(_n(n) - 1) * C(n))
    return FamilySpec(
        Family.CONTINUOUS_DUAL_HAHN, p, monic,
        lead=lambda n: (-1.0) ** _n(n),
        measure=MeasureDescriptor("ContinuousDensity", (0.0, math.inf), 1.0),
        notes=("variable x = y^2; discrete masses at -(a+k)^2 when a + k < 0",),
    )


_BUILDERS = {
    Family.LAGUERRE: _laguerre,
    Family.MEIXNER: _meixner,
    Family.MEIXNER_POLLACZEK: _meixner_pollaczek,
    Family.ULTRASPHERICAL: _ultraspherical,
    Family.Q_ULTRASPHERICAL: _q_ultraspherical,
    Family.CHEBYSHEV_U: _chebyshev_u,
    Family.AL_SALAM_CHIHARA: _al_salam_chihara,
    Family.Q_INV_HERMITE: _q_inv_hermite,
    Family.CONTINUOUS_DUAL_HAHN: _continuous_dual_hahn,
}


def family_coeffs(family, params: FamilyParams | None = None, **kw) -> FamilySpec:
    """Build the FamilySpec for ``family`` (an enum member or its string value)."""
    fam = Family(family)
    if params is None:
        params = FamilyParams(**kw)
    elif kw:
        params = replace(params, **kw)
    return _BUILDERS[fam](params)


# --------------------------------------------------------------------------- hypergeometric forms

def meixner_hypergeometric(n: int, x: float, beta: float, c: float) -> float:
    """M_n(x; beta, c) = 2F1(-n, -x; beta; 1 - 1/c), summed with exact-rounding fsum."""
    z = 1 - 1 / c
    terms = []
    t = 1.0
    for k in range(n + 1):
        terms.append(t)
        t *= (-n + k) * (-x + k) / ((beta + k) * (k + 1)) * z
    return math.fsum(terms)


def asc_basic_hypergeometric(n: int, theta: float, t1: float, t2: float, q: float) -> float:
    """Al-Salam-Chihara p_n as the terminating 3phi2(q^-n, t1 e^{it}, t1 e^{-it}; t1 t2, 0; q, q)."""
    z = complex(math.cos(theta), math.sin(theta))
    re, im = [], []
    t = 1 + 0j
    for k in range(n + 1):
        re.append(t.real)
        im.append(t.imag)
        t *= (1 - q ** (k - n)) * (1 - t1 * z * q**k) * (1 - t1 / z * q**k)
        t /= (1 - t1 * t2 * q**k) * (1 - q ** (k + 1))
        t *= q
    val = complex(math.fsum(re), math.fsum(im))
    if abs(val.imag) > 1e-10 * max(1.0, abs(val.real)):
        raise ArithmeticError("3phi2 sum has an imaginary part")
    return val.real
