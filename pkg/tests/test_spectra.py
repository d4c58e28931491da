import csv
import json
import math

import numpy as np
import pytest

from jmatrix.errors import ParameterOutOfRange
from jmatrix.jacobi import eigenvalues, truncate, truncate_blocks
from jmatrix.operators import MODELS, build_model
from jmatrix.recurrences import OrthonormalCoeffs, family_coeffs
from jmatrix.spectra import (
    classify_growth,
    contained,
    cdh_discrete_eigs,
    determinacy,
    qhermite_support,
    spectrum_report,
    zero_bounds,
)


def const(v):
    return lambda n: np.full(np.shape(n), float(v))


# --------------------------------------------------------------------------- zero bounds

def test_chebyshev_bound_is_exact():
    U = family_coeffs("chebyshev-u").orthonormal
    for n in (2, 5, 50):
        assert zero_bounds(U, n) == (-1.0, 1.0)


@pytest.mark.parametrize("model", sorted(MODELS))
@pytest.mark.parametrize("N", [10, 200])
def test_zero_bounds_contain_eigenvalues(model, N):
    op = build_model(model)
    A, B = zero_bounds(op.orthonormal(), N)
    ev = np.concatenate([eigenvalues(T) for T in truncate_blocks(op, N)])
    assert contained(ev, A, B)


def test_qhermite_bound():
    q, g = 0.5, 2.0
    op = build_model("qhermite", q=q, gamma=g)
    assert zero_bounds(op.orthonormal(), 2)[1] < 3.4641
    for N in range(2, 41):
        assert eigenvalues(truncate(op, N))[0] < g * q ** (-N / 2) * math.sqrt(1 - q**N)


def test_ultraspherical_bound():
    x = build_model("linpot-ultra", nu=0.75, gamma=0.5, xi=2.0).in_x()
    A, B = zero_bounds(x, 100)
    assert B <= 2 * max(x.a(1), x.a(10**6))


@pytest.mark.parametrize("beta", [0.2, 0.7])
def test_q_ultraspherical_bound(beta):
    q = 0.5
    x = build_model("linpot-qultra", beta=beta, q=q, gamma=0.5).in_x()
    a = x.a(np.arange(1, 200))
    d = np.diff(a)
    # a_n increases for beta < q and decreases for beta > q
    assert np.all(d >= -1e-15) if beta < q else np.all(d <= 1e-15)
    bound = 2 * (a[-1] if beta < q else a[0])
    for N in (5, 20, 60):
        assert eigenvalues(truncate(x, N))[0] < bound


def test_smallest_eigenvalue_tracks_last_diagonal():
    x = build_model("linpot-ultra", nu=0.75, gamma=0.5, xi=2.0).in_x()
    gap = {N: abs(eigenvalues(truncate(x, N))[-1] - x.b(N - 1)) for N in (100, 200, 400)}
    assert gap[400] <= 2 * gap[100] + 1e-12


def test_zero_bounds_small_n():
    with pytest.raises(ParameterOutOfRange):
        zero_bounds(family_coeffs("chebyshev-u").orthonormal, 1)


# --------------------------------------------------------------------------- closed forms

def test_cdh_discrete_eigs():
    assert cdh_discrete_eigs(2.0).tolist() == [-2.0]
    assert cdh_discrete_eigs(0.5).size == 0
    assert cdh_discrete_eigs(0.0, 1.0).tolist() == [2.0, 0.0]
    assert cdh_discrete_eigs(4.0).tolist() == [-4.0, -6.0]
    with pytest.raises(ParameterOutOfRange):
        cdh_discrete_eigs(-1.0)


def test_qhermite_support():
    k, x, m = qhermite_support(0.7, 0.5, 60)
    assert k.size == 121 and np.all(np.diff(x) > 0)
    assert math.fsum(m) == pytest.approx(1.0, abs=1e-10)
    with pytest.raises(ParameterOutOfRange):
        qhermite_support(0.4, 0.5, 10)


# --------------------------------------------------------------------------- determinacy

def test_growth_classifier():
    n = np.arange(1, 201)
    assert classify_growth(2.0**n, n).kind == "exponential"
    fit = classify_growth(n**2.0, n)
    assert fit.kind == "polynomial" and fit.rate == pytest.approx(2.0, abs=1e-9)


def test_determinacy_chebyshev():
    assert determinacy(family_coeffs("chebyshev-u").orthonormal).status == "DeterminateBy_ii"


def test_determinacy_new_meixner_polynomials():
    v = determinacy(build_model("meixner-tm", beta=2.0, c=0.3).in_x())
    assert v.status == "DeterminateBy_iii"


def test_determinacy_meixner_s():
    v = determinacy(build_model("meixner-s", beta=2.0, c=0.3, gamma=-0.5).orthonormal())
    assert v.status == "DeterminateBy_ii"


def test_determinacy_qhermite_inconclusive():
    v = determinacy(build_model("qhermite", q=0.5, gamma=2.0).orthonormal())
    assert v.status == "Inconclusive"
    assert v.witness["Carleman"]["series"] == "convergent"


def test_determinacy_carleman():
    # b_n = 0, a_n = n: only Carleman's series (harmonic) certifies determinacy
    v = determinacy(OrthonormalCoeffs(const(0.0), lambda n: np.asarray(n, float)))
    assert v.status == "DeterminateByCarleman"
    v = determinacy(OrthonormalCoeffs(lambda n: np.sin(np.asarray(n, float)) * np.asarray(n, float) ** 2,
                                      lambda n: np.asarray(n, float) ** 1.5))
    # |b_n| / (a_n a_{n+1}) behaves like |sin n| / n, so the first series test applies
    assert v.status == "DeterminateBy_i"


def test_determinacy_scan_length():
    with pytest.raises(ParameterOutOfRange):
        determinacy(family_coeffs("chebyshev-u").orthonormal, 50)


# --------------------------------------------------------------------------- reports

def test_laguerre_tl_report(tmp_path):
    rep = spectrum_report(build_model("laguerre-tl", alpha=2.0), 100)
    assert rep.continuousEdge == -2.25
    assert rep.predictedDiscrete.tolist() == [-2.0]
    assert rep.nullSpaceOrigin == 0.0
    assert rep.spectralMapApplied
    assert -2.1 < rep.eigenvaluesDesc[0] < -2.0
    d = json.loads(rep.to_json(tmp_path / "r.json"))
    assert d["eigenvaluesDesc"][0] == float(rep.eigenvaluesDesc[0])
    assert json.loads((tmp_path / "r.json").read_text()) == d
    rep.to_csv(tmp_path / "r.csv")
    rows = list(csv.reader(open(tmp_path / "r.csv")))
    assert rows[0] == ["index", "eigenvalue"] and len(rows) == 101


def test_reducible_report_uses_blocks():
    rep = spectrum_report(build_model("laguerre-s", alpha=0.0, gamma=1.0, allow_reducible=True), 50)
    assert rep.blocks[0] == [0, 1]
    assert rep.predictedDiscrete.tolist() == [2.0, 0.0]
    assert 2.0 in rep.eigenvaluesDesc.tolist()


def test_meixner_potential_prediction():
    op = build_model("linpot-laguerre", alpha=0.0, gamma=2 / 9)
    rep = spectrum_report(op, 200)
    top = rep.eigenvaluesDesc[:5]
    assert np.allclose(top, rep.predictedDiscrete[:5], rtol=1e-8)
