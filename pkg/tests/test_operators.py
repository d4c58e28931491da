import json
import math

import numpy as np
import pytest

from jmatrix.errors import NotBD, ParameterOutOfRange, ReducibleAt
from jmatrix.operators import (
    MODELS,
    absorption_rates,
    asc_entry,
    bd_decompose,
    build_model,
    identify_model,
    laguerre_s_entry,
    laguerre_tl_entry,
    meixner_tm_entry,
    operator_from_descriptor,
    orthonormal_monic,
)
from jmatrix.recurrences import MonicCoeffs


def test_laguerre_tl_coefficients():
    op = build_model("laguerre-tl", alpha=0.0)
    assert op.b(0) == -2.0 and op.a(1) == 2.0
    assert op.modded_out
    assert op.raw_entry(0, 0) == 0.0 and op.raw_entry(1, 1) == -2.0 and op.raw_entry(0, 2) == 0.0
    assert laguerre_tl_entry(1, 1, 0.0) == -2.0


def test_meixner_tm_coefficients():
    op = build_model("meixner-tm", beta=1.0, c=0.5)
    assert op.b(0) == -2.0 and op.a(1) == pytest.approx(math.sqrt(2), rel=1e-15)
    assert meixner_tm_entry(0, 0, 1.0, 0.5) == -2.0
    # in the model variable the first polynomial is x - 2
    assert op.in_x().b(0) == 2.0


def test_laguerre_s_coefficients():
    op = build_model("laguerre-s", alpha=0.0, gamma=1.0, allow_reducible=True)
    assert op.b(0) == 1.0 and op.a(1) == 1.0
    assert laguerre_s_entry(0, 0, 0.0, 1.0) == 1.0
    assert op.breaks == (2,)
    with pytest.raises(ReducibleAt):
        build_model("laguerre-s", alpha=0.0, gamma=1.0)


def test_laguerre_s_gamma_zero_is_tl_with_constants():
    S = build_model("laguerre-s", alpha=0.7, gamma=0.0, allow_reducible=True)
    T = build_model("laguerre-tl", alpha=0.7)
    n = np.arange(1, 30)
    assert S.b(0) == 0.0
    assert np.allclose(S.b(n), T.b(n - 1), rtol=1e-14)


def test_meixner_s_coefficients():
    op = build_model("meixner-s", beta=1.0, c=0.5, gamma=-1.0)
    assert op.a(1) == pytest.approx(math.sqrt(0.5), rel=1e-15)
    assert op.b(0) == pytest.approx(-0.5, rel=1e-15)


def test_meixner_s_small_gamma_limit():
    S = build_model("meixner-s", beta=1.5, c=0.4, gamma=-1e-12)
    T = build_model("meixner-tm", beta=1.5, c=0.4)
    n = np.arange(1, 20)
    assert np.allclose(S.b(n), T.b(n - 1), rtol=1e-10)
    assert np.allclose(S.a(n[1:]), T.a(n[1:] - 1), rtol=1e-10)


def test_qhermite_coefficients():
    op = build_model("qhermite", q=0.5, gamma=2.0)
    assert op.b(0) == 0.0 and op.b(1) == -4.0 and op.a(1) == 1.0


def test_asc_coefficients():
    op = build_model("asc-l", t1=0.3, t2=0.4, q=0.5)
    assert op.b(0) == pytest.approx(-7.52, rel=1e-14)
    assert asc_entry(0, 0, 0.3, 0.4, 0.5) == 0.0 and asc_entry(0, 1, 0.3, 0.4, 0.5) == 0.0
    assert op.raw_entry(0, 1) == 0.0


def test_ultraspherical_potential_in_x():
    nu, g, xi = 0.75, 0.5, 2.0
    x = build_model("linpot-ultra", nu=nu, gamma=g, xi=xi).in_x()
    n = np.arange(1, 30)
    assert np.allclose(x.b(n), -n * (n + 2 * nu) / xi, rtol=1e-14)
    assert np.allclose(x.a(n) ** 2, g**2 * n * (n + 2 * nu - 1) / (4 * xi**2 * (n + nu) * (n + nu - 1)), rtol=1e-13)


def test_zero_xi_rejected():
    with pytest.raises(ValueError):
        build_model("linpot-chebu", gamma=0.5, xi=0.0)


@pytest.mark.parametrize("model", sorted(MODELS))
def test_positive_couplings_and_descriptor_round_trip(model):
    op = build_model(model)
    assert np.all(op.a(np.arange(1, 41)) > 0)
    d = json.loads(json.dumps(op.descriptor(12)))
    again = operator_from_descriptor(d)
    assert np.array_equal(again.b(np.arange(12)), op.b(np.arange(12)))


def test_descriptor_mismatch_detected():
    d = build_model("laguerre-tl").descriptor(5)
    d["coefficients"]["b"][2] += 1e-9
    with pytest.raises(ValueError):
        operator_from_descriptor(d)


def test_build_model_rejects_unknown():
    with pytest.raises(ValueError):
        build_model("nope")
    with pytest.raises(ValueError):
        build_model("laguerre-tl", beta=1.0)
    with pytest.raises(ParameterOutOfRange):
        build_model("laguerre-tl", alpha=-2.0)


# --------------------------------------------------------------------------- identification

def test_tl_identifies_cdh():
    mid = identify_model(build_model("laguerre-tl", alpha=0.0))
    assert mid.kind == "ContinuousDualHahn"
    p = mid.family.params
    assert (p.cdh_a, p.cdh_b, p.cdh_c) == (0.5, 0.5, 1.5)
    assert mid.family_to_E.tau == -0.25


@pytest.mark.parametrize("alpha", [0.0, 1.5])
@pytest.mark.parametrize("gamma,kind", [(0.25, "Laguerre"), (0.5, "MeixnerPollaczek"), (2 / 9, "Meixner")])
def test_three_regimes(alpha, gamma, kind):
    op = build_model("linpot-laguerre", alpha=alpha, gamma=gamma)
    mid = identify_model(op)
    assert mid.kind == kind
    assert mid.residual(op, 41) < 1e-12
    p = mid.family.params
    if kind == "MeixnerPollaczek":
        assert p.lam == (alpha + 1) / 2 and p.phi == pytest.approx(math.pi / 2, abs=1e-15)
    if kind == "Meixner":
        assert p.beta == alpha + 1 and p.c == pytest.approx(0.25, rel=1e-14)


def test_ultraspherical_unknown():
    assert identify_model(build_model("linpot-ultra", nu=0.75)).kind == "Unknown"


# --------------------------------------------------------------------------- birth and death

def test_bd_decompose_meixner():
    beta, c = 2.0, 0.3
    r = bd_decompose(orthonormal_monic(build_model("meixner-tm", beta=beta, c=c).in_x()), n_max=30)
    n = np.arange(31)
    assert np.allclose(r.birth, (n + 1) * (beta + n + 1), rtol=1e-12)
    assert np.allclose(r.death, c * n * (n + 1), rtol=1e-12, atol=1e-12)


def test_bd_decompose_rejects():
    ident = MonicCoeffs(lambda n: np.zeros_like(np.asarray(n, float)), lambda n: np.ones_like(np.asarray(n, float)))
    with pytest.raises(NotBD):
        bd_decompose(ident)


def test_absorption_rates_recover_model():
    op = build_model("linpot-laguerre", alpha=0.5, gamma=0.3, xi=0.3)
    r = absorption_rates(op, 20)
    x = op.in_x()
    n = np.arange(21)
    assert np.allclose(r.birth + r.death + r.absorption, x.b(n), rtol=1e-12)
    with pytest.raises(ValueError):
        absorption_rates(build_model("linpot-laguerre", alpha=0.5, gamma=0.3, xi=1.0))
