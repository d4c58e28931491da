"""Oracle tests: independent matrix elements, frozen values and verification reports."""
import math
from dataclasses import replace

import numpy as np
import pytest
from scipy import special

from jmatrix.errors import ParameterOutOfRange, QuadratureOrderInsufficient
from jmatrix.operators import MODELS, build_model
from jmatrix.oracle import (
    _checked,
    cdh_discrete_masses,
    cdh_orthogonality_check,
    cdh_weight,
    log_abs_gamma,
    oracle_element_continuous,
    oracle_element_laguerre,
    oracle_element_meixner,
    oracle_element_qhermite,
    oracle_matrix,
    positivity_check,
    verify_tridiagonal,
)

# Values computed once by the oracle and checked against the closed forms by hand.
FROZEN = [
    (lambda: oracle_element_laguerre(2, 2, 1.5), -11.0),                       # -m(2m+a)
    (lambda: oracle_element_laguerre(2, 3, 1.5), 7.3484692283495345),          # 2 sqrt(3 * 4.5)
    (lambda: oracle_element_laguerre(1, 2, 0.0, "S", 1.0), 0.0),               # (m - gamma) = 0
    (lambda: oracle_element_meixner(1, 1, 1.5, 0.4), -1.6666666666666667),
    (lambda: oracle_element_meixner(1, 2, 1.5, 0.4), 0.9428090415820636),
    (lambda: oracle_element_meixner(0, 1, 1.0, 0.5, "S", -1.0), math.sqrt(0.5)),
    # the potential enters the diagonal as +gamma (n + c(beta+n)) / (c beta (beta+1))
    (lambda: oracle_element_meixner(0, 0, 1.0, 0.5, "S", -1.0), -0.5),
    (lambda: oracle_element_continuous(1, 2, "linpot-ultra", nu=0.75, gamma=0.5), 0.2548235957188131),
    (lambda: oracle_element_continuous(2, 2, "linpot-qultra", beta=0.3, q=0.5, gamma=0.5), -23.46),
    (lambda: oracle_element_continuous(1, 1, "asc-l", t1=0.3, t2=0.4, q=0.5), -7.52),
    (lambda: oracle_element_qhermite(1, 1, 0.5, 2.0, 0.7), -4.0),
    (lambda: oracle_element_qhermite(0, 1, 0.5, 2.0, 0.7), 1.0),
]


@pytest.mark.parametrize("fn,expected", FROZEN)
def test_frozen_elements(fn, expected):
    assert fn() == pytest.approx(expected, rel=1e-10, abs=1e-10)


def test_meixner_tm_small_example():
    # beta=1, c=1/2: b_0 = -2 and a_{0,1} = sqrt(2), in natural indices (1,1) and (1,2)
    assert oracle_element_meixner(1, 1, 1.0, 0.5) == pytest.approx(-2.0, abs=1e-10)
    assert oracle_element_meixner(1, 2, 1.0, 0.5) == pytest.approx(math.sqrt(2), abs=1e-10)


def test_constants_annihilated():
    for m in ("laguerre-tl", "meixner-tm", "asc-l"):
        M, _ = oracle_matrix(build_model(m), 5)
        assert np.max(np.abs(M[0])) < 1e-10
        assert np.max(np.abs(M[:, 0])) < 1e-10


@pytest.mark.parametrize("model", sorted(MODELS))
def test_verify_all_models(model):
    N = 10 if model in ("asc-l", "qhermite") else 15
    rep = verify_tridiagonal(build_model(model), N, tol=1e-9)
    assert rep.passed, rep
    assert rep.maxSymmetryDefect < 1e-9
    assert min(rep.maxTridiagResidual, rep.maxOffTridiagLeak, rep.nullRowDefect) >= 0


@pytest.mark.parametrize("model", ["laguerre-tl", "linpot-qultra", "meixner-s", "qhermite"])
def test_verify_detects_sabotage(model):
    op = build_model(model)
    bad = replace(op, diag=lambda n: op.b(n) + 1e-6 * (1 + np.abs(op.b(n))))
    assert not verify_tridiagonal(bad, 8).passed


def test_verify_detects_wrong_coupling():
    op = build_model("linpot-ultra")
    bad = replace(op, raw_upper=lambda n: 1.01 * op.raw_upper(n))
    rep = verify_tridiagonal(bad, 8)
    assert not rep.passed and rep.maxTridiagResidual > 1e-5


def test_order_refinement_rejects_unstable_rule():
    with pytest.raises(QuadratureOrderInsufficient):
        _checked(lambda k: np.eye(2) * (1 + 1.0 / k), 4, lambda k: 2 * k)


def test_oracle_parameter_checks():
    with pytest.raises(ParameterOutOfRange):
        oracle_element_laguerre(0, 0, -1.5)
    with pytest.raises(ParameterOutOfRange):
        oracle_element_qhermite(0, 0, 0.5, 2.0, 0.4)
    with pytest.raises(ValueError):
        oracle_element_continuous(0, 0, "laguerre-tl", alpha=0.5)


# --------------------------------------------------------------------------- gamma and CDH

def test_log_abs_gamma_against_scipy():
    z = np.array([0.5, 1.0, 3 + 2j, 0.3 + 17j, -1.5 + 0.1j, -3.7 + 2j, 1 + 60j])
    assert np.allclose(log_abs_gamma(z), special.loggamma(z).real, rtol=0, atol=5e-13)


def test_cdh_weight_vanishes_at_origin():
    assert cdh_weight(0.0, 0.5, 0.5, 1.5) == 0.0
    assert cdh_weight(1e-4, 0.5, 0.5, 1.5) > 0


def test_cdh_masses():
    assert cdh_discrete_masses(0.3, 0.5, 0.7) == []
    (x0, m0), = cdh_discrete_masses(-0.5, 1.5, 2.5)
    assert x0 == -0.25
    # Gamma(2) Gamma(3) / (Gamma(1) Gamma(4)) = 1/3
    assert m0 == pytest.approx(1 / 3, rel=1e-14)


@pytest.mark.parametrize("abc", [(0.5, 0.5, 1.5), (-0.5, 1.5, 2.5), (0.3, 0.5, 0.7), (-1.0, 0.5, 0.5)])
def test_cdh_orthogonality(abc):
    worst = max(cdh_orthogonality_check(m, n, *abc) for m in range(4) for n in range(4))
    assert worst < 1e-8


def test_cdh_weight_parameter_check():
    with pytest.raises(ParameterOutOfRange):
        cdh_weight(1.0, 0.5, -0.5, 1.0)


# --------------------------------------------------------------------------- positivity

@pytest.mark.parametrize("q,beta", [(0.3, 0.2), (0.7, 0.5)])
def test_q_ultraspherical_form_nonnegative(q, beta):
    r = positivity_check("q-ultraspherical", trials=200, q=q, beta=beta)
    assert r.passed and r.worstRayleighQuotient >= -1e-9
    assert r.worstNonconstant > 0


def test_laguerre_form_nonpositive():
    r = positivity_check("laguerre-tl", trials=200, alpha=0.5)
    assert r.passed and r.worstRayleighQuotient <= 1e-9
    assert r.worstNonconstant < 0


def test_positivity_unknown_kind():
    with pytest.raises(ValueError):
        positivity_check("meixner-tm")
