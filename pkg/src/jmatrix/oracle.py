"""Independent matrix elements ``<p_m, T p_n>`` computed from the operators' definitions.

Nothing here reads the closed-form matrix entries.  Each oracle applies the operator
to the basis polynomials (derivatives through structural relations, q-operators
through composed divided differences, difference operators pointwise) and integrates
against the orthogonality measure by Gauss quadrature, a spectrally accurate
midpoint rule in ``theta`` (``x = cos theta``), or lattice summation.  Every result
is recomputed at a refined order and rejected if the two disagree.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np
from scipy import special

from .errors import ParameterOutOfRange, QuadratureOrderInsufficient, TailNotConverged
from .operators import JacobiOperator, build_model
from .qcalculus import (
    SinhParametrizedFn,
    ZParametrizedFn,
    aw_dq_fn,
    qpochhammer,
    qpochhammer_multi,
    sinh_aq_fn,
    sinh_dq_fn,
)
from .recurrences import (
    Family,
    FamilySpec,
    asc_weight_theta,
    eval_poly_derivs,
    eval_poly_table,
    family_coeffs,
    orthonormal_table,
    q_ultraspherical_weight_theta,
)

_ORDER_TOL = 1e-9


# --------------------------------------------------------------------------- helpers

def _lead_signs(spec: FamilySpec, R: int) -> np.ndarray:
    return np.array([math.copysign(1.0, float(spec.lead(k))) for k in range(R)])


def _checked(compute, order: int, refine) -> tuple[np.ndarray, int]:
    """Run ``compute`` at ``order`` and at ``refine(order)``; insist on agreement."""
    M1 = compute(order)
    order2 = refine(order)
    M2 = compute(order2)
    scale = 1.0 + np.maximum(np.abs(np.diag(M2))[:, None], np.abs(np.diag(M2))[None, :])
    disc = float(np.max(np.abs(M1 - M2) / scale))
    if not disc <= _ORDER_TOL:
        raise QuadratureOrderInsufficient(order, disc)
    return M2, order2


def _sin_breve(z):
    return (z - 1 / z) / 2j


def _midpoint_theta(K: int):
    th = (np.arange(K) + 0.5) * math.pi / K
    return th, math.pi / K


# --------------------------------------------------------------------------- Laguerre

def _laguerre_matrix(alpha: float, R: int, kind: str, gamma: float = 0.0, order: Optional[int] = None):
    """Matrix of a Laguerre-basis operator over basis indices 0..R-1.

    kind "TL": x f'' + ... second-order operator with weight x^(a+2) e^-x; "S": TL + gamma x;
    "T": first Laguerre operator x f'' + (a+1-x) f' plus gamma x (positive-leading basis).
    """
    fam = [family_coeffs(Family.LAGUERRE, alpha=alpha + j) for j in range(3)]
    hn = np.exp(special.gammaln(alpha + np.arange(R) + 1) - special.gammaln(np.arange(R) + 1))
    sign = np.ones(R) if kind == "T" else np.array([(-1.0) ** k for k in range(R)])
    norm = sign * (-1.0) ** np.arange(R) / np.sqrt(hn)    # converts standard L_n to the basis vector

    def compute(K):
        x, w = special.roots_genlaguerre(K, alpha)
        # standard L_n^(alpha+j) at the nodes, through the monic recurrences
        L = [eval_poly_table(f.monic, R, x) * np.array([(-1.0) ** k / math.factorial(k) for k in range(R + 1)])[:, None]
             for f in fam]
        f0 = L[0][:R]
        f1 = np.zeros_like(f0)
        f2 = np.zeros_like(f0)
        f1[1:] = -L[1][:R - 1]              # d/dx L_n^(a) = -L_{n-1}^(a+1)
        f2[2:] = L[2][:R - 2]               # second derivative: L_{n-2}^(a+2)
        if kind == "T":
            Tf = x * f2 + (alpha + 1 - x) * f1
        else:
            Tf = x * x * f2 + (alpha + 2) * x * f1 - x * x * f1
        Af = Tf + gamma * x * f0
        P = f0 * norm[:, None]
        AP = Af * norm[:, None]
        return (P * w) @ AP.T

    K0 = order or (R + 8)
    return _checked(compute, K0, lambda k: 2 * k)


# --------------------------------------------------------------------------- Meixner

def _meixner_matrix(beta: float, c: float, R: int, gamma: Optional[float] = None, order: Optional[int] = None):
    """Matrix of T_M (plus ``(1-c) gamma x / (c beta (beta+1))`` when gamma is given)."""
    spec = family_coeffs(Family.MEIXNER, beta=beta, c=c)
    sign = _lead_signs(spec, R)
    mass = spec.measure.total_mass
    ortho = spec.orthonormal
    lc = math.log(c)

    def logw(x, shift):
        return special.gammaln(beta + shift + x) - special.gammaln(beta + shift) + x * lc

    def basis(x):
        return orthonormal_table(ortho, R - 1, x, mass) * sign[:, None]

    # lattice length: extend until the weighted Christoffel sum is negligible
    X = 64
    while True:
        x = np.arange(X + 1, dtype=float)
        t = np.exp(logw(x, 0) - special.gammaln(x + 1)) * np.sum(basis(x) ** 2, axis=0)
        if t[-1] < 1e-18 * t.max() and t[-1] < t[-2]:
            break
        X *= 2
        if X > 1 << 20:
            raise TailNotConverged("Meixner lattice sum", float(t[-1] / t.max()))

    def compute(X):
        x = np.arange(X + 1, dtype=float)
        w = np.exp(logw(x, 0) - special.gammaln(x + 1))
        w2 = np.exp(logw(x, 2) - special.gammaln(x + 1))   # (beta+2)_x c^x / x!
        P = basis(np.arange(X + 2, dtype=float))
        g = w2 * (P[:, 1:] - P[:, :-1])                  # w2(x) * Delta p(x), x = 0..X
        g_prev = np.concatenate([np.zeros((R, 1)), g[:, :-1]], axis=1)  # g(x-1), g(-1) = 0
        M = P[:, :-1] @ (g - g_prev).T
        if gamma is not None:
            k = (1 - c) * gamma / (c * beta * (beta + 1))
            M = M + k * (P[:, :-1] * (w * x)) @ P[:, :-1].T
        return M

    return _checked(compute, order or X, lambda k: 2 * k)


# --------------------------------------------------------------------------- [-1, 1] families

def _table_breve(ortho, R: int, mass: float, sign=None):
    s = None if sign is None else sign[:, None]

    def breve(z):
        z = np.asarray(z, dtype=complex)
        t = orthonormal_table(ortho, R - 1, (z + 1 / z) / 2, mass)
        return t if s is None else t * s

    return ZParametrizedFn(breve, True)


def _qultra_weight_breve(beta: float, q: float) -> ZParametrizedFn:
    """w(x; beta) dx with the 1/sin(theta) factor carried as an antisymmetric breve."""
    def breve(z):
        z = np.asarray(z, dtype=complex)
        num = qpochhammer(z * z, q) * qpochhammer(1 / (z * z), q)
        den = qpochhammer(beta * z * z, q) * qpochhammer(beta / (z * z), q)
        return num / den / _sin_breve(z)
    return ZParametrizedFn(breve, False)


def _asc_weight_breve(t1: float, t2: float, q: float) -> ZParametrizedFn:
    def breve(z):
        z = np.asarray(z, dtype=complex)
        num = qpochhammer(z * z, q) * qpochhammer(1 / (z * z), q)
        den = qpochhammer_multi([t1 * z, t1 / z, t2 * z, t2 / z], q)
        return num / den / _sin_breve(z)
    return ZParametrizedFn(breve, False)


def sturm_liouville_q(f: ZParametrizedFn, w_outer: ZParametrizedFn, w_inner: ZParametrizedFn, q: float):
    """``(1 / w_outer) D_q [ w_inner D_q f ]`` as a breve function."""
    return aw_dq_fn(w_inner * aw_dq_fn(f, q), q) / w_outer


def _theta_matrix(values, weight_theta, K: int):
    """``int_0^pi P_m A P_n W dtheta`` from values (P, AP) on the midpoint grid."""
    P, AP = values
    _, h = _midpoint_theta(K)
    return h * (P * weight_theta) @ AP.T


def _qultra_matrix(beta: float, q: float, gamma: float, R: int, order: Optional[int] = None):
    spec = family_coeffs(Family.Q_ULTRASPHERICAL, beta=beta, q=q)
    f = _table_breve(spec.orthonormal, R, spec.measure.total_mass)
    T = sturm_liouville_q(f, _qultra_weight_breve(beta, q), _qultra_weight_breve(q * beta, q), q)

    def compute(K):
        th, _ = _midpoint_theta(K)
        z = np.exp(1j * th)
        x = np.cos(th)
        P = f(x)
        AP = _real_part(T.at_z(z)) + gamma * x * P
        return _theta_matrix((P, AP), q_ultraspherical_weight_theta(th, beta, q), K)

    return _checked(compute, order or (4 * R + 32), lambda k: 2 * k)


def _asc_matrix(t1: float, t2: float, q: float, R: int, order: Optional[int] = None):
    spec = family_coeffs(Family.AL_SALAM_CHIHARA, t1=t1, t2=t2, q=q)
    f = _table_breve(spec.orthonormal, R, spec.measure.total_mass, _lead_signs(spec, R))
    sq = math.sqrt(q)
    L = sturm_liouville_q(f, _asc_weight_breve(t1, t2, q), _asc_weight_breve(sq * t1, q * sq * t2, q), q)

    def compute(K):
        th, _ = _midpoint_theta(K)
        z = np.exp(1j * th)
        P = f(np.cos(th))
        AP = _real_part(L.at_z(z))
        return _theta_matrix((P, AP), asc_weight_theta(th, t1, t2, q), K)

    return _checked(compute, order or (4 * R + 32), lambda k: 2 * k)


def _ultra_matrix(spec: FamilySpec, nu: float, gamma: float, R: int, order: Optional[int] = None):
    """(1-x^2) f'' - (2 nu + 1) x f' + gamma x f on the positive-leading orthonormal basis."""
    mass = spec.measure.total_mass
    bet = spec.monic.betas(R)
    scale = 1 / np.sqrt(mass * np.concatenate([[1.0], np.cumprod(bet[:R - 1])]))

    def compute(K):
        x, w = special.roots_jacobi(K, nu - 0.5, nu - 0.5)
        P = np.empty((R, K))
        AP = np.empty((R, K))
        for n in range(R):
            p, d1, d2 = eval_poly_derivs(spec.monic, n, x)
            P[n] = p * scale[n]
            AP[n] = ((1 - x * x) * d2 - (2 * nu + 1) * x * d1 + gamma * x * p) * scale[n]
        return (P * w) @ AP.T

    return _checked(compute, order or (R + 8), lambda k: 2 * k)


def _real_part(v):
    v = np.asarray(v)
    scale = np.maximum(1.0, np.abs(v.real))
    if np.any(np.abs(v.imag) > 1e-9 * scale):
        raise ArithmeticError("operator values have a non-negligible imaginary part")
    return v.real


# --------------------------------------------------------------------------- q^-1-Hermite

def _qhermite_lattice(a: float, q: float, R: int):
    """Lattice indices k whose contribution to degree <= R products is not negligible.

    The range grows until the terms ``mass_k * (1 + x_k^2) * sum_n p_n(x_k)^2`` at both
    ends fall below 1e-20 of their total.
    """
    spec = family_coeffs(Family.Q_INV_HERMITE, q=q, a_ext=a)
    K = 16
    while True:
        ks = np.arange(-K, K + 1, dtype=float)
        x, m = spec.measure.masses(ks)
        with np.errstate(over="ignore", invalid="ignore"):
            t = m * (1 + x * x) * np.sum(orthonormal_table(spec.orthonormal, R, x, 1.0) ** 2, axis=0)
        t = np.where(m == 0, 0.0, t)          # underflowed masses at the far ends
        if np.all(np.isfinite(t)):
            edge = max(t[:2].max(), t[-2:].max())
            if edge < 1e-20 * t.sum():
                keep = t > 1e-30 * t.sum()
                return spec, ks[keep]
        K += 16
        if K > 512:
            raise TailNotConverged("q^-1-Hermite lattice", float(t[0]))


def _qhermite_matrix(q: float, gamma: float, a: float, R: int):
    """Lattice-sum matrix; the order reported is the half-width of the index range."""
    spec, ks = _qhermite_lattice(a, q, R)
    ortho = spec.orthonormal
    lo, hi = int(ks.min()), int(ks.max())

    def breve(uu):
        uu = np.asarray(uu, dtype=float)
        return orthonormal_table(ortho, R - 1, (uu - 1 / uu) / 2, 1.0)

    f = SinhParametrizedFn(breve)
    d1 = sinh_dq_fn(f, q)
    d2 = sinh_dq_fn(d1, q)
    ad = sinh_aq_fn(d1, q)

    def compute(extra):
        k = np.arange(lo - extra, hi + extra + 1, dtype=float)
        x, mass = spec.measure.masses(k)
        u = q ** (-k) / a
        P = f.at_u(u)
        TP = math.sqrt(q) * (1 + 2 * x * x) * d2.at_u(u) + 4 * q / (q - 1) * x * ad.at_u(u)
        keep = mass > 0
        return (P[:, keep] * mass[keep]) @ (TP + gamma * x * P)[:, keep].T

    M, extra = _checked(compute, 0, lambda e: e + 4)
    return M, (hi - lo) // 2 + extra


# --------------------------------------------------------------------------- dispatch

def oracle_matrix(op: JacobiOperator, R: int, a_ext: float = 0.7) -> tuple[np.ndarray, int]:
    """Oracle matrix over natural basis indices 0..R-1 and the quadrature order used."""
    p = op.params
    m = op.model
    if m == "laguerre-tl":
        return _laguerre_matrix(p["alpha"], R, "TL")
    if m == "laguerre-s":
        return _laguerre_matrix(p["alpha"], R, "S", p["gamma"])
    if m == "linpot-laguerre":
        return _laguerre_matrix(p["alpha"], R, "T", p["gamma"])
    if m == "meixner-tm":
        return _meixner_matrix(p["beta"], p["c"], R)
    if m == "meixner-s":
        return _meixner_matrix(p["beta"], p["c"], R, p["gamma"])
    if m == "linpot-ultra":
        return _ultra_matrix(op.basis, p["nu"], p["gamma"], R)
    if m == "linpot-chebu":
        return _ultra_matrix(op.basis, 1.0, p["gamma"], R)
    if m == "linpot-qultra":
        return _qultra_matrix(p["beta"], p["q"], p["gamma"], R)
    if m == "asc-l":
        return _asc_matrix(p["t1"], p["t2"], p["q"], R)
    if m == "qhermite":
        return _qhermite_matrix(p["q"], p["gamma"], a_ext, R)
    raise ValueError(f"no oracle for model {m!r}")


def oracle_element_laguerre(m: int, n: int, alpha: float, model: str = "TL", gamma: float = 0.0) -> float:
    """Matrix element of the Laguerre operator (``TL``) or ``TL + gamma x`` (``S``)."""
    if not alpha > -1:
        raise ParameterOutOfRange("alpha", alpha, "alpha > -1")
    M, _ = _laguerre_matrix(alpha, max(m, n) + 1, model, gamma)
    return float(M[m, n])


def oracle_element_meixner(m: int, n: int, beta: float, c: float, model: str = "TM",
                           gamma: Optional[float] = None) -> float:
    M, _ = _meixner_matrix(beta, c, max(m, n) + 1, gamma if model == "S" else None)
    return float(M[m, n])


def oracle_element_continuous(m: int, n: int, model: str, **params) -> float:
    """Elements for the [-1, 1] models: linpot-ultra, linpot-chebu, linpot-qultra, asc-l."""
    if model not in ("linpot-ultra", "linpot-chebu", "linpot-qultra", "asc-l"):
        raise ValueError(f"{model!r} is not a model on [-1, 1]")
    M, _ = oracle_matrix(build_model(model, **params), max(m, n) + 1)
    return float(M[m, n])


def oracle_element_qhermite(m: int, n: int, q: float, gamma: float, a: float) -> float:
    if not q < a <= 1:
        raise ParameterOutOfRange("a", a, "q < a <= 1")
    M, _ = _qhermite_matrix(q, gamma, a, max(m, n) + 1)
    return float(M[m, n])


# --------------------------------------------------------------------------- verification

@dataclass
class VerificationReport:
    model: str
    params: dict
    N: int
    tol: float
    maxTridiagResidual: float
    maxSymmetryDefect: float
    maxOffTridiagLeak: float
    nullRowDefect: float
    indicesChecked: list
    quadratureOrder: int
    passed: bool

    def to_dict(self) -> dict:
        return asdict(self)


def verify_tridiagonal(op: JacobiOperator, N: int, tol: float = 1e-9, a_ext: float = 0.7) -> VerificationReport:
    """Compare the builder's entries with the oracle over the leading N x N section.

    Every pair of indices is checked: the band |m-n| <= 2 against the closed forms
    (zero for |m-n| = 2) and everything further out for leakage.  Residuals are
    relative to ``1 + max(|B_mm|, |B_nn|)``.
    """
    s = 1 if op.modded_out else 0
    R = N + s
    M, order = oracle_matrix(op, R, a_ext=a_ext)
    B = np.array([[op.raw_entry(i, j) for j in range(R)] for i in range(R)])
    d = np.abs(np.diag(B))
    scale = 1.0 + np.maximum(d[:, None], d[None, :])
    i, j = np.indices((R, R))
    band = np.abs(i - j) <= 2
    sel = (i >= s) & (j >= s)
    resid = np.abs(M - B) / scale
    tri = float(np.max(resid[band & sel]))
    far = (np.abs(i - j) >= 2) & sel
    leak = float(np.max((np.abs(M) / scale)[far])) if far.any() else 0.0
    sym = float(np.max(np.abs(M - M.T) / scale))
    null = float(max(np.max(np.abs(M[0]) / scale[0]), np.max(np.abs(M[:, 0]) / scale[:, 0]))) if s else 0.0
    return VerificationReport(
        model=op.model, params=dict(op.params), N=N, tol=tol,
        maxTridiagResidual=tri, maxSymmetryDefect=sym, maxOffTridiagLeak=leak, nullRowDefect=null,
        indicesChecked=[s, R - 1], quadratureOrder=int(order),
        passed=bool(tri < tol and leak < tol and null < tol),
    )


# --------------------------------------------------------------------------- continuous dual Hahn

_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993, 676.5203681218851, -1259.1392167224028, 771.32342877765313,
    -176.61502916214059, 12.507343278686905, -0.13857109526572012,
    9.9843695780195716e-6, 1.5056327351493116e-7,
)


def log_abs_gamma(z) -> np.ndarray:
    """``log|Gamma(z)|`` for complex z by the Lanczos approximation (g = 7, 9 terms).

    Arguments left of Re z = 1/2 are shifted right with the functional equation
    rather than reflected, so poles only show up where Gamma really has them.
    """
    z = np.asarray(z, dtype=complex)
    shift = np.maximum(0, np.ceil(0.5 - z.real)).astype(int)
    out = np.zeros(z.shape)
    w = z.copy()
    for j in range(int(shift.max(initial=0))):
        act = shift > j
        out = out - np.where(act, np.log(np.abs(np.where(act, w, 1.0))), 0.0)
        w = np.where(act, w + 1, w)
    zz = w - 1
    acc = np.full(z.shape, _LANCZOS_COEF[0], dtype=complex)
    for i, ci in enumerate(_LANCZOS_COEF[1:], start=1):
        acc = acc + ci / (zz + i)
    t = zz + _LANCZOS_G + 0.5
    res = 0.5 * math.log(2 * math.pi) + ((zz + 0.5) * np.log(t)).real - t.real + np.log(np.abs(acc))
    out = out + res
    return out[()] if out.ndim == 0 else out


def _cdh_prefactor(a: float, b: float, c: float) -> float:
    g = math.gamma(a + b) * math.gamma(a + c) * math.gamma(b + c)
    if not g > 0:
        raise ParameterOutOfRange("a", a, "Gamma(a+b) Gamma(a+c) Gamma(b+c) > 0")
    return 1.0 / (2 * math.pi * g)


def cdh_weight(y, a: float, b: float, c: float):
    """Continuous dual Hahn density in y on (0, inf), normalized as in the orthogonality relation.

    ``1/|Gamma(2iy)|^2 = 4 y^2 / |Gamma(1+2iy)|^2``, which tends to zero at y = 0.
    """
    if not (b > 0 and c > 0):
        raise ParameterOutOfRange("b, c", (b, c), "b > 0 and c > 0")
    y = np.asarray(y, dtype=float)
    pref = _cdh_prefactor(a, b, c)
    with np.errstate(divide="ignore"):
        lg = 2 * (log_abs_gamma(a + 1j * y) + log_abs_gamma(b + 1j * y) + log_abs_gamma(c + 1j * y))
        lg = lg + 2 * np.log(2 * y) - 2 * log_abs_gamma(1 + 2j * y)
    out = np.where(y > 0, pref * np.exp(lg), 0.0)
    return out[()] if out.ndim == 0 else out


def cdh_discrete_masses(a: float, b: float, c: float) -> list[tuple[float, float]]:
    """``(x_k, mass_k)`` for ``k = 0..M``, ``M = max{k : k + a < 0}``; empty when a >= 0."""
    out = []
    k = 0
    if a >= 0:
        return out
    pre = math.gamma(b - a) * math.gamma(c - a) / (math.gamma(-2 * a) * math.gamma(b + c))
    while k + a < 0:
        num = special.poch(2 * a, k) * special.poch(a + 1, k) * special.poch(a + b, k) * special.poch(a + c, k)
        den = math.factorial(k) * special.poch(a, k) * special.poch(a - b + 1, k) * special.poch(a - c + 1, k)
        out.append((-(a + k) ** 2, float(pre * num / den * (-1) ** k)))
        k += 1
    return out


def cdh_orthogonality_check(m: int, n: int, a: float, b: float, c: float) -> float:
    """Normalized residual of the continuous dual Hahn orthogonality relation."""
    fam = family_coeffs(Family.CONTINUOUS_DUAL_HAHN, cdh_a=a, cdh_b=b, cdh_c=c)
    top = max(m, n)

    def S(k, x):
        return (-1.0) ** k * eval_poly_table(fam.monic, top, x)[k]

    def integrand(y):
        x = y * y
        return cdh_weight(y, a, b, c) * S(m, x) * S(n, x)

    # the density decays like exp(-pi y) times a power; cut where it is negligible
    Y = 10.0
    while abs(integrand(Y)) > 1e-17 * (1 + abs(integrand(1.0))):
        Y *= 1.5
        if Y > 1e4:
            raise TailNotConverged("continuous dual Hahn integral", float(integrand(Y)))

    def gauss(panels):
        t, w = special.roots_legendre(32)
        edges = np.linspace(0.0, Y, panels + 1)
        mid, half = (edges[1:] + edges[:-1]) / 2, (edges[1:] - edges[:-1]) / 2
        y = (mid[:, None] + half[:, None] * t[None, :]).ravel()
        return float(np.sum(np.repeat(half, t.size) * np.tile(w, panels) * integrand(y)))

    h = lambda k: math.factorial(k) * special.poch(a + b, k) * special.poch(a + c, k) * special.poch(b + c, k)
    normalizer = math.sqrt(abs(h(m) * h(n)))
    cont = gauss(64)
    disc_q = abs(cont - gauss(128)) / normalizer
    if disc_q > 1e-10:
        raise QuadratureOrderInsufficient(64, disc_q)
    disc = sum(mk * S(m, xk) * S(n, xk) for xk, mk in cdh_discrete_masses(a, b, c))
    rhs = h(n) if m == n else 0.0
    return abs(cont + disc - rhs) / normalizer


# --------------------------------------------------------------------------- positivity

@dataclass
class PositivityResult:
    kind: str
    worstRayleighQuotient: float
    trials: int
    passed: bool
    worstNonconstant: float = float("nan")      # same statistic over test vectors of degree >= 1


def _random_coeffs(rng, trials: int, degree: int) -> np.ndarray:
    deg = rng.integers(0, degree + 1, size=trials)
    C = rng.standard_normal((trials, degree + 1))
    C[np.arange(degree + 1)[None, :] > deg[:, None]] = 0.0
    return C


def positivity_check(kind: str, trials: int = 200, seed: int = 0, degree: int = 10, **params) -> PositivityResult:
    """Extreme Rayleigh quotient of an operator over random polynomials.

    ``kind="q-ultraspherical"``: the form ``-int D_q(p D_q f) f dx`` with
    ``p = w(x; q beta)``, divided by ``int f^2 w(x; beta) dx``; it must be nonnegative.
    ``kind="laguerre-tl"``: ``(T_L f, f) / (f, f)`` in ``L^2(x^a e^-x)``; it must be nonpositive.
    Test polynomials are random combinations of orthonormal basis polynomials of
    degree up to ``degree``; the zero polynomial has quotient 0 by convention.
    """
    rng = np.random.default_rng(seed)
    C = _random_coeffs(rng, trials, degree)
    R = degree + 1
    if kind == "q-ultraspherical":
        q, beta = params["q"], params["beta"]
        spec = family_coeffs(Family.Q_ULTRASPHERICAL, beta=beta, q=q)
        f = _table_breve(spec.orthonormal, R, spec.measure.total_mass)
        inner = aw_dq_fn(_qultra_weight_breve(q * beta, q) * aw_dq_fn(f, q), q)
        K = 8 * R + 64
        th, h = _midpoint_theta(K)
        z = np.exp(1j * th)
        P = f(np.cos(th))
        # -D_q(p D_q f) carries a 1/sin(theta); dx = sin(theta) dtheta
        G = -_real_part(inner.at_z(z) * _sin_breve(z))
        W = q_ultraspherical_weight_theta(th, beta, q)
        Q = h * (P @ G.T)                    # Q[m, n] = -int P_m D_q(p D_q P_n) dx
        Gram = h * (P * W) @ P.T
        sign = 1.0
    elif kind == "laguerre-tl":
        alpha = params["alpha"]
        Q, _ = _laguerre_matrix(alpha, R, "TL")     # orthonormal basis, so the Gram matrix is I
        Gram = np.eye(R)
        sign = -1.0
    else:
        raise ValueError(f"unknown positivity model {kind!r}")
    num = np.einsum("ti,ij,tj->t", C, 0.5 * (Q + Q.T), C)
    den = np.einsum("ti,ij,tj->t", C, Gram, C)
    quot = np.where(den > 0, num / np.where(den > 0, den, 1.0), 0.0)
    worst = float(quot.min() if sign > 0 else quot.max())
    nc = np.any(C[:, 1:] != 0, axis=1)
    worst_nc = float((quot[nc].min() if sign > 0 else quot[nc].max())) if nc.any() else float("nan")
    passed = worst >= -1e-9 if sign > 0 else worst <= 1e-9
    return PositivityResult(kind, worst, trials, bool(passed), worst_nc)
