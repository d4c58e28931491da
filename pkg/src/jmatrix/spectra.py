"""Spectral classification of Jacobi operators.

Determinacy is decided by scanning the recurrence coefficients and certifying the
tail from a growth fit, never by asserting indeterminacy.  Spectra are estimated from
truncations and compared with closed forms where the recurrence is identified.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .errors import ParameterOutOfRange
from .jacobi import eigenvalues, truncate_blocks
from .operators import JacobiOperator, identify_model
from .recurrences import OrthonormalCoeffs, qhermite_masses

# Tail-classification thresholds for the determinacy scans.
DIVERGENCE_POWER = -1.05      # terms ~ n^p with p above this count as a divergent series
CONVERGENCE_POWER = -1.2      # ... and with p below this as convergent
GROWTH_RATE_TOL = 1e-3        # |exponential rate| below this is treated as zero
MONOTONE_RTOL = 1e-12         # slack allowed in "nonincreasing" checks


# --------------------------------------------------------------------------- growth fits

@dataclass
class GrowthFit:
    """Fit of ``log|s_n|`` over the last half of a scan."""

    kind: str                  # "exponential", "polynomial" or "zero"
    rate: float                # exponential rate per step, or polynomial degree
    residual: float

    def as_dict(self) -> dict:
        return asdict(self)


def classify_growth(seq, n) -> GrowthFit:
    """Least-squares fit of ``log|s_n|`` against ``n`` and against ``log n``; the better one wins."""
    seq = np.abs(np.asarray(seq, dtype=float))
    n = np.asarray(n, dtype=float)
    half = slice(seq.size // 2, None)
    s, m = seq[half], n[half]
    ok = (s > 0) & np.isfinite(s) & (m > 0)
    if ok.sum() < 3:
        return GrowthFit("zero", 0.0, 0.0)
    y = np.log(s[ok])
    fits = []
    for kind, t in (("exponential", m[ok]), ("polynomial", np.log(m[ok]))):
        A = np.vstack([t, np.ones_like(t)]).T
        coef, *_ = np.linalg.lstsq(A, y, rcond=None)
        r = float(np.sqrt(np.mean((A @ coef - y) ** 2)))
        fits.append(GrowthFit(kind, float(coef[0]), r))
    exp_fit, poly_fit = fits
    # polynomial growth shows up as a small exponential rate; prefer it when it fits as well
    if abs(exp_fit.rate) < GROWTH_RATE_TOL or poly_fit.residual <= exp_fit.residual:
        return poly_fit
    return exp_fit


def _series_verdict(terms, n) -> tuple[str, GrowthFit, float]:
    """Classify ``sum terms`` as "divergent", "convergent" or "unclear"."""
    terms = np.abs(np.asarray(terms, dtype=float))
    partial = float(np.sum(terms))
    fit = classify_growth(terms, n)
    if fit.kind == "zero":
        return ("convergent" if partial < np.inf else "unclear"), fit, partial
    if fit.kind == "exponential":
        if fit.rate >= 0:
            return "divergent", fit, partial
        return "convergent", fit, partial
    if fit.rate >= DIVERGENCE_POWER:
        return "divergent", fit, partial
    if fit.rate <= CONVERGENCE_POWER:
        return "convergent", fit, partial
    return "unclear", fit, partial


def _bounded_above(s, n) -> Optional[dict]:
    """Certificate that ``s_n <= C`` for all n, or None.

    Accepted when the second half of the scan is nonincreasing, or when its increments
    decay fast enough (geometrically, or like n^p with p < -1) that their tail sum
    is bounded.  The constant reported includes that tail bound.
    """
    s = np.asarray(s, dtype=float)
    if not np.all(np.isfinite(s)):
        return None
    half = s[s.size // 2:]
    d = np.diff(half)
    scale = MONOTONE_RTOL * (1.0 + np.abs(half[1:]))
    if np.all(d <= scale):
        return {"C": float(np.max(s)), "certificate": "nonincreasing over the last half of the scan"}
    nn = np.asarray(n, dtype=float)[s.size // 2 + 1:]
    fit = classify_growth(d, nn)
    last = float(abs(d[-1]))
    if fit.kind == "exponential" and fit.rate < -GROWTH_RATE_TOL:
        r = math.exp(fit.rate)
        tail = last * r / (1 - r)
    elif fit.kind == "polynomial" and fit.rate < CONVERGENCE_POWER:
        tail = last * nn[-1] / (-fit.rate - 1)
    elif fit.kind == "zero":
        tail = 0.0
    else:
        return None
    return {"C": float(np.max(s) + tail), "certificate": f"increments decay ({fit.kind}, {fit.rate:.4g}); tail bound {tail:.3g}",
            "incrementFit": fit.as_dict()}


# --------------------------------------------------------------------------- determinacy

@dataclass
class DeterminacyVerdict:
    status: str
    witness: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"status": self.status, "witness": jsonable(self.witness)}


def determinacy(coeffs: OrthonormalCoeffs, scanN: int = 200) -> DeterminacyVerdict:
    """Determinacy of the moment problem for ``x p_n = a_{n+1} p_{n+1} + b_n p_n + a_n p_{n-1}``.

    Tried in order: ``a_n + b_n + a_{n+1} <= C``, ``a_n - b_n + a_{n+1} <= C``,
    ``sum |b_{n+1}| / (a_{n+1} a_{n+2}) = inf`` and Carleman's ``sum 1/a_n = inf``.
    When none can be certified the verdict is Inconclusive; indeterminacy is never claimed.
    """
    if scanN < 100:
        raise ParameterOutOfRange("scanN", scanN, "scanN >= 100")
    n = np.arange(scanN + 2)
    b = np.asarray(coeffs.b(n), dtype=float)
    a = np.concatenate([[np.nan], np.asarray(coeffs.a(n[1:]), dtype=float)])    # a[k] = a_k
    k = np.arange(1, scanN + 1)
    growth = {"a": classify_growth(a[1:], n[1:]).as_dict(), "b": classify_growth(b, n + 1).as_dict()}
    witness: dict = {"scanN": scanN, "growth": growth}

    for status, sgn in (("DeterminateBy_ii", 1.0), ("DeterminateBy_iii", -1.0)):
        s = a[k] + sgn * b[k] + a[k + 1]
        cert = _bounded_above(s, k)
        witness[status] = cert or {"bounded": False, "last": float(s[-1])}
        if cert:
            return DeterminacyVerdict(status, witness)

    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.abs(b[k]) / (a[k] * a[k + 1])
    verdict, fit, partial = _series_verdict(t, k)
    witness["DeterminateBy_i"] = {"series": verdict, "partialSum": partial, "termFit": fit.as_dict()}
    if verdict == "divergent":
        return DeterminacyVerdict("DeterminateBy_i", witness)

    with np.errstate(divide="ignore"):
        t = 1.0 / a[k]
    verdict, fit, partial = _series_verdict(t, k)
    witness["Carleman"] = {"series": verdict, "partialSum": partial, "termFit": fit.as_dict()}
    if verdict == "divergent":
        return DeterminacyVerdict("DeterminateByCarleman", witness)
    return DeterminacyVerdict("Inconclusive", witness)


# --------------------------------------------------------------------------- zero bounds

def zero_bounds(coeffs: OrthonormalCoeffs, n: int) -> tuple[float, float]:
    """Interval (A, B) containing every zero of the orthonormal p_n."""
    if n < 2:
        raise ParameterOutOfRange("n", n, "n >= 2")
    b = np.asarray(coeffs.b(np.arange(n)), dtype=float)
    a = np.asarray(coeffs.a(np.arange(1, n)), dtype=float)
    mid = 0.5 * (b[1:] + b[:-1])
    rad = 0.5 * np.hypot(b[1:] - b[:-1], 4 * a)
    return float(np.min(mid - rad)), float(np.max(mid + rad))


def contained(eig, A: float, B: float, ulps: float = 4.0) -> bool:
    """Whether every value lies in [A, B] up to a few units of roundoff at each end.

    The bound is strict in exact arithmetic, but when the entries span many orders
    of magnitude an extreme eigenvalue and the nearer endpoint can round to the same double.
    """
    eig = np.asarray(eig, dtype=float)
    eps = np.finfo(float).eps
    return bool(np.all((eig >= A - ulps * eps * abs(A)) & (eig <= B + ulps * eps * abs(B))))


# --------------------------------------------------------------------------- closed forms

def cdh_discrete_eigs(alpha: float, gamma: Optional[float] = None) -> np.ndarray:
    """Closed-form isolated eigenvalues E_k, k = 0..M, descending.

    Without gamma: the Laguerre operator, ``E_k = (k+1)(k-alpha)`` with
    ``M = max{k : k + (1-alpha)/2 < 0}``.  The eigenvalue 0 of the constants is not
    included; it is reported separately.  With gamma: ``E_k = (k-gamma)(k-gamma-alpha-1)``
    with ``M = max{k : k - gamma - (1+alpha)/2 < 0}``.  Empty when no k qualifies.
    """
    if not alpha > -1:
        raise ParameterOutOfRange("alpha", alpha, "alpha > -1")
    out = []
    k = 0
    if gamma is None:
        while k + (1 - alpha) / 2 < 0:
            out.append((k + 1) * (k - alpha))
            k += 1
    else:
        while k - gamma - (1 + alpha) / 2 < 0:
            out.append((k - gamma) * (k - gamma - alpha - 1) + 0.0)
            k += 1
    return np.sort(np.array(out, dtype=float))[::-1]


def qhermite_support(a: float, q: float, K: int):
    """Lattice points ``x_k(a)`` and masses for k = -K..K of the extremal q^-1-Hermite measure."""
    if not 0 < q < 1:
        raise ParameterOutOfRange("q", q, "0 < q < 1")
    if not q < a < 1:
        raise ParameterOutOfRange("a", a, "q < a < 1")
    masses, _ = qhermite_masses(a, q)
    k = np.arange(-K, K + 1)
    x, m = masses(k)
    return k, x, m


def _predictions(op: JacobiOperator, N: int):
    """(predicted discrete, continuous edge, null-space origin, source note)."""
    p = op.params
    if op.model == "laguerre-tl":
        al = p["alpha"]
        return cdh_discrete_eigs(al), -(al + 1) ** 2 / 4, 0.0, "Laguerre operator closed form"
    if op.model == "laguerre-s":
        al, g = p["alpha"], p["gamma"]
        return cdh_discrete_eigs(al, g), -(al + 1) ** 2 / 4, None, "Laguerre operator plus gamma x closed form"
    mid = identify_model(op)
    if mid.family is None:
        return None, None, None, "no identification"
    fmap = mid.family_to_E
    if mid.kind == "Laguerre":
        return None, float(fmap(0.0)), None, "Laguerre identification"
    if mid.kind == "Meixner":
        pts = fmap(np.arange(min(N, 20), dtype=float))
        return np.sort(pts)[::-1], None, None, "Meixner identification (first lattice points)"
    if mid.kind == "MeixnerPollaczek":
        return None, None, None, "Meixner-Pollaczek identification (spectrum is the whole line)"
    return None, None, None, mid.kind


# --------------------------------------------------------------------------- report

@dataclass
class SpectrumReport:
    model: str
    params: dict
    provenance: str
    truncSize: int
    eigenvaluesDesc: np.ndarray
    zeroBoundInterval: tuple
    predictedDiscrete: Optional[np.ndarray]
    continuousEdge: Optional[float]
    determinacy: DeterminacyVerdict
    spectralMapApplied: bool
    spectralMap: dict
    nullSpaceOrigin: Optional[float] = None
    blocks: list = field(default_factory=list)
    predictionSource: str = ""

    def to_dict(self) -> dict:
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        d["determinacy"] = self.determinacy.to_dict()
        return jsonable(d)

    def to_json(self, path=None) -> str:
        text = json.dumps(self.to_dict(), indent=2)
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text + "\n")
        return text

    def to_csv(self, path) -> None:
        """Eigenvalues one per row."""
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["index", "eigenvalue"])
            for i, v in enumerate(self.eigenvaluesDesc, start=1):
                w.writerow([i, repr(float(v))])


def spectrum_report(op: JacobiOperator, N: int, scanN: int = 200) -> SpectrumReport:
    """Truncation spectrum, zero bounds, determinacy and closed-form predictions."""
    if N < 2:
        raise ParameterOutOfRange("N", N, "N >= 2")
    blocks = truncate_blocks(op, N)
    eig = np.sort(np.concatenate([eigenvalues(T) for T in blocks]))[::-1]
    A, B = zero_bounds(op.orthonormal(), N)
    pred, edge, null, note = _predictions(op, N)
    sizes, start = [], 0
    for T in blocks:
        sizes.append([start, start + T.N - 1])
        start += T.N
    return SpectrumReport(
        model=op.model, params=dict(op.params), provenance=op.provenance, truncSize=N,
        eigenvaluesDesc=eig, zeroBoundInterval=(A, B), predictedDiscrete=pred, continuousEdge=edge,
        determinacy=determinacy(op.orthonormal(), scanN),
        spectralMapApplied=bool(op.spectral_map.sigma != 1.0 or op.spectral_map.tau != 0.0),
        spectralMap=op.spectral_map.as_dict(), nullSpaceOrigin=null, blocks=sizes, predictionSource=note,
    )


def jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else repr(v)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


__all__ = [
    "GrowthFit", "classify_growth", "DeterminacyVerdict", "determinacy", "zero_bounds", "contained",
    "cdh_discrete_eigs", "qhermite_support", "SpectrumReport", "spectrum_report", "jsonable",
]
