"""Tridiagonal representations of the model operators and their identification.

Every builder returns a :class:`JacobiOperator` holding the orthonormal recurrence
``(b_n, a_n)`` of the operator in the energy variable ``E``.  The variable in which a
model's polynomials are usually written is related by the affine spectral map
``E = sigma * x + tau`` and is available through :meth:`JacobiOperator.in_x`.

Operators that annihilate constants (the Laguerre and Meixner second-order operators
and the Al-Salam-Chihara operator) are represented on the orthogonal complement of
the constants: basis index ``n`` of the operator is basis polynomial ``n + 1``.  The
raw matrix, including its null row and column, stays accessible through
:meth:`JacobiOperator.raw_entry`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Mapping, Optional

import numpy as np

from .errors import NotBD, ParameterOutOfRange, ReducibleAt, ZeroXi
from .recurrences import (
    Family,
    FamilySpec,
    MonicCoeffs,
    OrthonormalCoeffs,
    family_coeffs,
)

SeqFn = Callable[[np.ndarray], np.ndarray]


def _n(n) -> np.ndarray:
    return np.asarray(n, dtype=float)


@dataclass(frozen=True)
class SpectralMap:
    """``E = sigma * x + tau``."""

    sigma: float = 1.0
    tau: float = 0.0

    def __call__(self, x):
        return self.sigma * np.asarray(x, dtype=float) + self.tau

    def inverse(self, E):
        return (np.asarray(E, dtype=float) - self.tau) / self.sigma

    def as_dict(self) -> dict:
        return {"sigma": float(self.sigma), "tau": float(self.tau)}


@dataclass(frozen=True)
class JacobiOperator:
    model: str
    params: Mapping[str, float]
    diag: SeqFn                  # b_n, n >= 0
    offdiag: SeqFn               # a_n, n >= 1: coupling between n-1 and n
    raw_upper: SeqFn             # signed matrix entry (n, n+1) in the natural orthonormal basis
    basis: Optional[FamilySpec]
    spectral_map: SpectralMap
    provenance: str
    modded_out: bool = False
    breaks: tuple = ()

    def b(self, n) -> np.ndarray:
        return np.asarray(self.diag(n), dtype=float)

    def a(self, n) -> np.ndarray:
        return np.asarray(self.offdiag(n), dtype=float)

    def orthonormal(self) -> OrthonormalCoeffs:
        return OrthonormalCoeffs(self.b, self.a)

    def monic(self) -> MonicCoeffs:
        return MonicCoeffs(self.b, lambda n: self.a(n) ** 2)

    def in_x(self) -> OrthonormalCoeffs:
        """Orthonormal recurrence in the model variable x (``E = sigma x + tau``)."""
        s, t = self.spectral_map.sigma, self.spectral_map.tau
        return OrthonormalCoeffs(lambda n: (self.b(n) - t) / s, lambda n: self.a(n) / abs(s))

    def raw_entry(self, m: int, n: int) -> float:
        """Signed matrix element between natural basis vectors m and n (raw indexing)."""
        if self.modded_out:
            if m == 0 or n == 0:
                return 0.0
            m, n = m - 1, n - 1
        if m == n:
            return float(self.b(m))
        if abs(m - n) == 1:
            return float(self.raw_upper(min(m, n)))
        return 0.0

    def descriptor(self, N: Optional[int] = None) -> dict:
        d = {
            "model": self.model,
            "params": {k: float(v) for k, v in self.params.items()},
            "provenance": self.provenance,
            "spectralMap": self.spectral_map.as_dict(),
            "moddedOutConstants": self.modded_out,
            "breaks": [int(k) for k in self.breaks],
        }
        if N is not None:
            d["N"] = int(N)
            d["coefficients"] = {
                "b": [float(v) for v in self.b(np.arange(N))],
                "a": [float(v) for v in self.a(np.arange(1, N))],
            }
        return d


def _check_symmetry(upper: Callable[[int], float], lower: Callable[[int], float], m_max: int = 40):
    """The two off-diagonal formulas must describe a symmetric matrix."""
    for m in range(m_max):
        u, l = float(upper(m)), float(lower(m + 1))
        if not math.isclose(u, l, rel_tol=1e-12, abs_tol=1e-300):
            raise ArithmeticError(f"off-diagonal formulas disagree at m={m}: {u!r} vs {l!r}")


# --------------------------------------------------------------------------- raw matrix elements
# Matrix elements in the natural orthonormal basis, verbatim from the closed forms.

def laguerre_tl_entry(m: int, n: int, alpha: float) -> float:
    """Raw indexing: row and column 0 vanish because constants are annihilated."""
    if m == n:
        return -m * (2 * m + alpha)
    if n == m + 1:
        return m * math.sqrt((m + 1) * (m + alpha + 1))
    if n == m - 1:
        return (m - 1) * math.sqrt(m * (alpha + m))
    return 0.0


def laguerre_s_entry(m: int, n: int, alpha: float, gamma: float) -> float:
    if m == n:
        return gamma * (2 * m + alpha + 1) - m * (alpha + 2 * m)
    if n == m + 1:
        return (m - gamma) * math.sqrt((m + 1) * (m + alpha + 1))
    if n == m - 1:
        return (m - 1 - gamma) * math.sqrt(m * (m + alpha))
    return 0.0


def meixner_tm_entry(m: int, n: int, beta: float, c: float) -> float:
    """Entries of the constants-free representation (index m is basis polynomial m+1)."""
    k = c * beta * (beta + 1)
    if m == n:
        return -((m + 1) * (m + beta + 1) + m * (m + 1) * c) / k
    if n == m + 1:
        return (m + 1) * math.sqrt(c * (m + 2) * (beta + m + 1)) / k
    if n == m - 1:
        return m * math.sqrt(c * (m + 1) * (m + beta)) / k
    return 0.0


def meixner_s_entry(m: int, n: int, beta: float, c: float, gamma: float) -> float:
    k = c * beta * (beta + 1)
    if m == n:
        return (-(m * (m + beta) + m * (m - 1) * c) + gamma * (m + c * (beta + m))) / k
    if n == m + 1:
        return (m - gamma) * math.sqrt(c * (m + 1) * (beta + m)) / k
    if n == m - 1:
        return (m - 1 - gamma) * math.sqrt(c * m * (m + beta - 1)) / k
    return 0.0


def asc_entry(m: int, n: int, t1: float, t2: float, q: float) -> float:
    """Al-Salam-Chihara operator entries; the basis uses |t1|^n, hence the sign of t1."""
    pre = 4 / (1 - q) ** 2
    if m == n:
        return -pre * q ** (1 - m) * (1 - q**m) * (1 - t1 * t2 * q**m + t2 * t2 * (q - q**m))
    sgn = math.copysign(1.0, t1)
    if n == m + 1:
        return sgn * pre * t2 * q ** (1 - m) * (1 - q**m) * math.sqrt((1 - q ** (m + 1)) * (1 - t1 * t2 * q**m))
    if n == m - 1:
        return sgn * pre * t2 * q ** (2 - m) * (1 - q ** (m - 1)) * math.sqrt((1 - q**m) * (1 - t1 * t2 * q ** (m - 1)))
    return 0.0


# --------------------------------------------------------------------------- builders

def build_laguerre_TL(alpha: float) -> JacobiOperator:
    """Second-order Laguerre operator with the constants modded out."""
    if not alpha > -1:
        raise ParameterOutOfRange("alpha", alpha, "alpha > -1")
    _check_symmetry(lambda m: laguerre_tl_entry(m, m + 1, alpha), lambda m: laguerre_tl_entry(m, m - 1, alpha))
    return JacobiOperator(
        model="laguerre-tl",
        params={"alpha": alpha},
        diag=lambda n: -(_n(n) + 1) * (2 * _n(n) + alpha + 2),
        offdiag=lambda n: _n(n) * np.sqrt((_n(n) + 1) * (_n(n) + alpha + 1)),
        raw_upper=lambda n: (_n(n) + 1) * np.sqrt((_n(n) + 2) * (_n(n) + alpha + 2)),
        basis=family_coeffs(Family.LAGUERRE, alpha=alpha),
        spectral_map=SpectralMap(-1.0, -(alpha + 1) ** 2 / 4),
        provenance="Laguerre operator x^-a e^x d/dx x^(a+2) e^-x d/dx on the Laguerre basis, constants removed",
        modded_out=True,
    )


def build_meixner_TM(beta: float, c: float) -> JacobiOperator:
    """Second-order difference operator on the Meixner basis with constants modded out."""
    if not beta > 0:
        raise ParameterOutOfRange("beta", beta, "beta > 0")
    if not 0 < c < 1:
        raise ParameterOutOfRange("c", c, "0 < c < 1")
    _check_symmetry(lambda m: meixner_tm_entry(m, m + 1, beta, c), lambda m: meixner_tm_entry(m, m - 1, beta, c))
    k = c * beta * (beta + 1)
    return JacobiOperator(
        model="meixner-tm",
        params={"beta": beta, "c": c},
        diag=lambda n: -((_n(n) + 1) * (_n(n) + beta + 1) + c * _n(n) * (_n(n) + 1)) / k,
        offdiag=lambda n: _n(n) * np.sqrt(c * (_n(n) + 1) * (_n(n) + beta)) / k,
        raw_upper=lambda n: (_n(n) + 1) * np.sqrt(c * (_n(n) + 2) * (beta + _n(n) + 1)) / k,
        basis=family_coeffs(Family.MEIXNER, beta=beta, c=c),
        spectral_map=SpectralMap(-1.0 / k, 0.0),
        provenance="Meixner second-order difference operator on the Meixner basis, constants removed",
        modded_out=True,
    )


def build_laguerre_S(alpha: float, gamma: float, allow_reducible: bool = False) -> JacobiOperator:
    """Laguerre operator plus ``gamma * x`` on the full Laguerre basis.

    When gamma is a nonnegative integer the coupling a_{gamma+1} vanishes and the
    matrix splits; this raises ReducibleAt unless ``allow_reducible``.
    """
    if not alpha > -1:
        raise ParameterOutOfRange("alpha", alpha, "alpha > -1")
    _check_symmetry(
        lambda m: laguerre_s_entry(m, m + 1, alpha, gamma), lambda m: laguerre_s_entry(m, m - 1, alpha, gamma)
    )
    breaks = (int(gamma) + 1,) if gamma >= 0 and float(gamma).is_integer() else ()
    if breaks and not allow_reducible:
        raise ReducibleAt(breaks[0])
    return JacobiOperator(
        model="laguerre-s",
        params={"alpha": alpha, "gamma": gamma},
        diag=lambda n: gamma * (2 * _n(n) + alpha + 1) - _n(n) * (alpha + 2 * _n(n)),
        offdiag=lambda n: np.abs(_n(n) - 1 - gamma) * np.sqrt(_n(n) * (_n(n) + alpha)),
        raw_upper=lambda n: (_n(n) - gamma) * np.sqrt((_n(n) + 1) * (_n(n) + alpha + 1)),
        basis=family_coeffs(Family.LAGUERRE, alpha=alpha),
        spectral_map=SpectralMap(-1.0, -(alpha + 1) ** 2 / 4),
        provenance="Laguerre operator x^-a e^x d/dx x^(a+2) e^-x d/dx plus gamma x, full Laguerre basis",
        breaks=breaks,
    )


def build_meixner_S(beta: float, c: float, gamma: float, unchecked: bool = False) -> JacobiOperator:
    """Meixner difference operator plus ``(1-c) gamma x / (c beta (beta+1))``.

    The couplings are the signed coefficients ``(n-1-gamma) sqrt(c n (beta+n-1))``;
    they are positive exactly when gamma < 0.  ``unchecked=True`` admits other gamma
    for exploratory use, in which case truncation reports the first nonpositive one.
    """
    if not beta > 0:
        raise ParameterOutOfRange("beta", beta, "beta > 0")
    if not 0 < c < 1:
        raise ParameterOutOfRange("c", c, "0 < c < 1")
    if not unchecked and not gamma < 0:
        raise ParameterOutOfRange("gamma", gamma, "gamma < 0")
    _check_symmetry(
        lambda m: meixner_s_entry(m, m + 1, beta, c, gamma), lambda m: meixner_s_entry(m, m - 1, beta, c, gamma)
    )
    k = c * beta * (beta + 1)
    return JacobiOperator(
        model="meixner-s",
        params={"beta": beta, "c": c, "gamma": gamma},
        diag=lambda n: (-(_n(n) * (_n(n) + beta) + _n(n) * (_n(n) - 1) * c) + gamma * (_n(n) + c * (beta + _n(n)))) / k,
        offdiag=lambda n: (_n(n) - 1 - gamma) * np.sqrt(c * _n(n) * (_n(n) + beta - 1)) / k,
        raw_upper=lambda n: (_n(n) - gamma) * np.sqrt(c * (_n(n) + 1) * (beta + _n(n))) / k,
        basis=family_coeffs(Family.MEIXNER, beta=beta, c=c),
        spectral_map=SpectralMap(1.0, 0.0),
        provenance="Meixner second-order difference operator plus a multiple of x, full Meixner basis",
    )


def build_linear_potential(basis: FamilySpec, gamma: float, xi: float = 1.0, eta: float = 0.0,
                           model: Optional[str] = None, params: Optional[dict] = None) -> JacobiOperator:
    """``T + gamma x`` where ``T p_n = lambda_n p_n`` on the basis family.

    In the energy variable ``b_n = lambda_n + gamma alpha_n`` and ``a_n = |gamma| sqrt(beta_n)``;
    the variable ``x = E / xi + eta`` turns this into the recurrence with
    ``eta + (lambda_n + gamma alpha_n) / xi`` and ``|gamma / xi| sqrt(beta_n)``.
    """
    if basis.eigen is None:
        raise ValueError(f"family {basis.family.value} has no diagonal operator")
    if xi == 0:
        raise ZeroXi()
    if gamma == 0 or not np.isfinite(gamma):
        raise ParameterOutOfRange("gamma", gamma, "gamma != 0")
    lam, al, be = basis.eigen, basis.monic.alpha, basis.monic.beta
    return JacobiOperator(
        model=model or f"linpot-{basis.family.value}",
        params=params if params is not None else {**basis.params.as_dict(), "gamma": gamma, "xi": xi, "eta": eta},
        diag=lambda n: lam(n) + gamma * al(n),
        offdiag=lambda n: abs(gamma) * np.sqrt(be(n)),
        raw_upper=lambda n: gamma * np.sqrt(be(_n(n) + 1)),
        basis=basis,
        spectral_map=SpectralMap(xi, -xi * eta),
        provenance=f"diagonal operator of the {basis.family.value} family plus gamma x",
    )


def build_asc_L(t1: float, t2: float, q: float) -> JacobiOperator:
    """Al-Salam-Chihara Sturm-Liouville q-operator, constants modded out.

    The model variable is ``x = -(1-q)^2 E / 4``.
    """
    if not 0 < q < 1:
        raise ParameterOutOfRange("q", q, "0 < q < 1")
    if not 0 < abs(t1) < 1:
        raise ParameterOutOfRange("t1", t1, "0 < |t1| < 1")
    if not 0 < abs(t2) < 1:
        raise ParameterOutOfRange("t2", t2, "0 < |t2| < 1")
    _check_symmetry(lambda m: asc_entry(m, m + 1, t1, t2, q), lambda m: asc_entry(m, m - 1, t1, t2, q))
    pre = 4 / (1 - q) ** 2
    sgn = math.copysign(1.0, t1)

    def diag(n):
        m = _n(n) + 1
        return -pre * q ** (1 - m) * (1 - q**m) * (1 - t1 * t2 * q**m + t2 * t2 * (q - q**m))

    def upper(n):
        m = _n(n) + 1
        return sgn * pre * t2 * q ** (1 - m) * (1 - q**m) * np.sqrt((1 - q ** (m + 1)) * (1 - t1 * t2 * q**m))

    return JacobiOperator(
        model="asc-l",
        params={"t1": t1, "t2": t2, "q": q},
        diag=diag,
        offdiag=lambda n: np.abs(upper(_n(n) - 1)),
        raw_upper=upper,
        basis=family_coeffs(Family.AL_SALAM_CHIHARA, t1=t1, t2=t2, q=q),
        spectral_map=SpectralMap(-pre, 0.0),
        provenance="Al-Salam-Chihara q-Sturm-Liouville operator on its own basis, constants removed",
        modded_out=True,
    )


def build_qhermite_potential(q: float, gamma: float) -> JacobiOperator:
    """q^{-1}-Hermite difference operator plus ``gamma x``."""
    if not 0 < q < 1:
        raise ParameterOutOfRange("q", q, "0 < q < 1")
    op = build_linear_potential(family_coeffs(Family.Q_INV_HERMITE, q=q), gamma, model="qhermite",
                                params={"q": q, "gamma": gamma})
    return replace(op, provenance="q^-1-Hermite operator plus gamma x on the q^-1-Hermite basis")


# --------------------------------------------------------------------------- registry

@dataclass(frozen=True)
class ModelEntry:
    build: Callable[..., JacobiOperator]
    defaults: Mapping[str, float]
    description: str


def _linpot(family: Family, fam_keys: tuple, tag: str):
    def build(gamma: float, xi: float = 1.0, eta: float = 0.0, **fam):
        spec = family_coeffs(family, **{k: fam[k] for k in fam_keys})
        return build_linear_potential(spec, gamma, xi, eta, model=tag,
                                      params={**{k: fam[k] for k in fam_keys}, "gamma": gamma, "xi": xi, "eta": eta})
    return build


MODELS: dict[str, ModelEntry] = {
    "laguerre-tl": ModelEntry(build_laguerre_TL, {"alpha": 0.5}, "Laguerre second-order operator"),
    "meixner-tm": ModelEntry(build_meixner_TM, {"beta": 1.5, "c": 0.4}, "Meixner second-order operator"),
    "linpot-laguerre": ModelEntry(
        _linpot(Family.LAGUERRE, ("alpha",), "linpot-laguerre"),
        {"alpha": 0.5, "gamma": 0.3, "xi": 1.0, "eta": 0.0}, "Laguerre operator plus linear potential"),
    "linpot-ultra": ModelEntry(
        _linpot(Family.ULTRASPHERICAL, ("nu",), "linpot-ultra"),
        {"nu": 0.75, "gamma": 0.5, "xi": 1.0, "eta": 0.0}, "ultraspherical operator plus linear potential"),
    "linpot-qultra": ModelEntry(
        _linpot(Family.Q_ULTRASPHERICAL, ("beta", "q"), "linpot-qultra"),
        {"beta": 0.3, "q": 0.5, "gamma": 0.5, "xi": 1.0, "eta": 0.0}, "q-ultraspherical operator plus linear potential"),
    "linpot-chebu": ModelEntry(
        _linpot(Family.CHEBYSHEV_U, (), "linpot-chebu"),
        {"gamma": 0.5, "xi": 1.0, "eta": 0.0}, "Chebyshev U operator plus linear potential"),
    "laguerre-s": ModelEntry(build_laguerre_S, {"alpha": 0.5, "gamma": 0.7}, "Laguerre operator plus gamma x"),
    "meixner-s": ModelEntry(build_meixner_S, {"beta": 1.5, "c": 0.4, "gamma": -0.6}, "Meixner operator plus multiple of x"),
    "asc-l": ModelEntry(build_asc_L, {"t1": 0.3, "t2": 0.4, "q": 0.5}, "Al-Salam-Chihara q-operator"),
    "qhermite": ModelEntry(build_qhermite_potential, {"q": 0.5, "gamma": 2.0}, "q^-1-Hermite operator plus gamma x"),
}


def build_model(model: str, **params) -> JacobiOperator:
    """Build a registered model; missing parameters take the registry defaults."""
    try:
        entry = MODELS[model]
    except KeyError:
        raise ValueError(f"unknown model {model!r}; choose from {sorted(MODELS)}") from None
    extra = {k: v for k, v in params.items() if k not in entry.defaults and k not in ("allow_reducible", "unchecked")}
    if extra:
        raise ValueError(f"model {model} does not take {sorted(extra)}")
    kw = {**entry.defaults, **params}
    return entry.build(**kw)


def operator_from_descriptor(d: Mapping) -> JacobiOperator:
    """Rebuild an operator from :meth:`JacobiOperator.descriptor` output and check it."""
    kw = dict(d["params"])
    if d.get("breaks"):
        kw["allow_reducible"] = True
    op = build_model(d["model"], **kw)
    coeffs = d.get("coefficients")
    if coeffs is not None:
        N = int(d["N"])
        if not (np.array_equal(op.b(np.arange(N)), np.asarray(coeffs["b"], dtype=float))
                and np.array_equal(op.a(np.arange(1, N)), np.asarray(coeffs["a"], dtype=float))):
            raise ValueError("descriptor coefficients do not match the rebuilt operator")
    return op


# --------------------------------------------------------------------------- identification

@dataclass(frozen=True)
class ModelID:
    """Identification of an operator's recurrence with a classical family.

    ``family_to_E`` maps the family variable y to the energy: ``E = sigma y + tau``.
    """

    kind: str
    family: Optional[FamilySpec] = None
    family_to_E: SpectralMap = field(default_factory=SpectralMap)
    note: str = ""

    def residual(self, op: JacobiOperator, N: int = 41) -> float:
        """Largest relative mismatch of ``(b_n, a_n)`` against the mapped family recurrence."""
        if self.family is None:
            return math.inf
        s, t = self.family_to_E.sigma, self.family_to_E.tau
        n = np.arange(N)
        b_pred = s * self.family.monic.alpha(n) + t
        a_pred = abs(s) * np.sqrt(self.family.monic.beta(n[1:]))
        rb = np.abs(op.b(n) - b_pred) / np.maximum(1.0, np.abs(b_pred))
        ra = np.abs(op.a(n[1:]) - a_pred) / np.maximum(1.0, np.abs(a_pred))
        return float(max(rb.max(), ra.max()))


def _cdh(a: float, b: float, c: float) -> FamilySpec:
    return family_coeffs(Family.CONTINUOUS_DUAL_HAHN, cdh_a=a, cdh_b=b, cdh_c=c)


def identify_model(op: JacobiOperator) -> ModelID:
    """Recognize the operator's recurrence as a classical family where one is known."""
    p = op.params
    if op.model == "laguerre-tl":
        al = p["alpha"]
        return ModelID("ContinuousDualHahn", _cdh((1 - al) / 2, (1 + al) / 2, (3 + al) / 2),
                       SpectralMap(-1.0, -(al + 1) ** 2 / 4), "E = -y - (alpha+1)^2/4")
    if op.model == "laguerre-s":
        al, g = p["alpha"], p["gamma"]
        try:
            fam = _cdh(-g - (al + 1) / 2, (al + 1) / 2, (al + 1) / 2)
        except ParameterOutOfRange:
            return ModelID("Unknown", note="continuous dual Hahn parameters degenerate")
        return ModelID("ContinuousDualHahn", fam, SpectralMap(-1.0, -(al + 1) ** 2 / 4), "E = -y - (alpha+1)^2/4")
    if op.model == "linpot-laguerre":
        al, g = p["alpha"], p["gamma"]
        if g == 0.25:
            return ModelID("Laguerre", family_coeffs(Family.LAGUERRE, alpha=al),
                           SpectralMap(-0.25, (al + 1) / 2), "E = (alpha+1)/2 - y/4")
        if g > 0.25:
            phi = math.acos((1 - 2 * g) / (2 * g))
            return ModelID("MeixnerPollaczek",
                           family_coeffs(Family.MEIXNER_POLLACZEK, lam=(al + 1) / 2, phi=phi),
                           SpectralMap(math.sqrt(4 * g - 1), (al + 1) / 2), "E = tan(phi/2) y + (alpha+1)/2")
        if 0 < g < 0.25:
            s = (1 - 2 * g - math.sqrt(1 - 4 * g)) / (2 * g)
            be = al + 1
            return ModelID("Meixner", family_coeffs(Family.MEIXNER, beta=be, c=s * s),
                           SpectralMap(-(1 - s) / (1 + s), be * s / (1 + s)), "E = beta s/(1+s) - (1-s) y/(1+s)")
    return ModelID("Unknown")


# --------------------------------------------------------------------------- birth and death

@dataclass(frozen=True)
class BDRates:
    birth: np.ndarray          # b_0 .. b_{n_max}
    death: np.ndarray          # d_0 .. d_{n_max}
    absorption: np.ndarray     # c_0 .. c_{n_max}


def bd_decompose(monic: MonicCoeffs, rates: Optional[tuple] = None, absorption: Optional[SeqFn] = None,
                 n_max: int = 50, rtol: float = 1e-12) -> BDRates:
    """Factor ``alpha_n = b_n + d_n + c_n``, ``beta_n = b_{n-1} d_n`` with positive rates.

    Candidate ``rates = (birth, death)`` callables are validated; without them the
    chain is built from ``d_0 = 0``, which yields the minimal factorization.
    """
    n = np.arange(n_max + 1)
    al = monic.alphas(n_max + 1)
    be = np.concatenate([[0.0], monic.betas(n_max)])
    cc = np.zeros(n_max + 1) if absorption is None else np.asarray(absorption(n), dtype=float)
    if rates is not None:
        b = np.asarray(rates[0](n), dtype=float)
        d = np.asarray(rates[1](n), dtype=float)
    else:
        b = np.empty(n_max + 1)
        d = np.empty(n_max + 1)
        d[0] = 0.0
        b[0] = al[0] - cc[0]
        for k in range(1, n_max + 1):
            if not b[k - 1] > 0:
                raise NotBD(k - 1, "birth rate not positive")
            d[k] = be[k] / b[k - 1]
            b[k] = al[k] - cc[k] - d[k]
    for k in range(n_max + 1):
        if not b[k] > 0:
            raise NotBD(k, "birth rate not positive")
        if d[k] < 0 or (k > 0 and d[k] == 0):
            raise NotBD(k, "death rate not positive")
        if not math.isclose(b[k] + d[k] + cc[k], al[k], rel_tol=rtol, abs_tol=rtol):
            raise NotBD(k, "diagonal does not factor")
        if k > 0 and not math.isclose(b[k - 1] * d[k], be[k], rel_tol=rtol, abs_tol=rtol):
            raise NotBD(k, "off-diagonal does not factor")
    return BDRates(b, d, cc)


def absorption_rates(op: JacobiOperator, n_max: int = 50) -> BDRates:
    """Birth, death and absorption rates of a linear-potential model with ``xi = gamma``.

    The model recurrence in x is the basis recurrence with ``eta + lambda_n / gamma``
    added to the diagonal, so the basis rates carry over and the absorption rate is
    ``eta + lambda_n / gamma``.
    """
    p = op.params
    if op.basis is None or op.basis.eigen is None or "gamma" not in p:
        raise ValueError("absorption rates need a linear-potential model")
    if not math.isclose(p["xi"], p["gamma"]):
        raise ValueError("absorption rates need xi == gamma")
    base = bd_decompose(op.basis.monic, n_max=n_max)
    n = np.arange(n_max + 1)
    c = p["eta"] + op.basis.eigen(n) / p["gamma"]
    return bd_decompose(orthonormal_monic(op.in_x()), rates=(lambda k: base.birth[k], lambda k: base.death[k]),
                        absorption=lambda k: c[k], n_max=n_max)


def orthonormal_monic(ortho: OrthonormalCoeffs) -> MonicCoeffs:
    return MonicCoeffs(ortho.b, lambda n: np.asarray(ortho.a(n), dtype=float) ** 2)
