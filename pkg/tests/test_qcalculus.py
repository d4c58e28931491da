import math

import numpy as np
import pytest

from jmatrix.qcalculus import (
    aw_aq,
    aw_dq,
    delta,
    nabla,
    qpochhammer,
    qpochhammer_inf,
    sinh_aq,
    sinh_dq,
)
from jmatrix.recurrences import family_coeffs, meixner_hypergeometric, standard_poly


def test_qpochhammer_finite_and_infinite():
    assert qpochhammer(0.5, 0.5, 0) == 1.0
    assert qpochhammer(0.5, 0.5, 2) == pytest.approx(0.5 * 0.75)
    val, _ = qpochhammer_inf(0.5, 0.5)
    prod = math.prod(1 - 0.5 ** (k + 1) for k in range(200))
    assert float(val) == pytest.approx(prod, rel=1e-14)


X = np.array([-0.8, -0.1, 0.3, 0.65])


def test_aw_dq_examples():
    q = 0.25
    assert np.allclose(aw_dq(lambda x: np.ones_like(x), X, q), 0.0, atol=1e-14)
    assert np.allclose(aw_dq(lambda x: x, X, q), 1.0, rtol=1e-13)
    assert aw_dq(lambda x: x * x, 0.3, q) == pytest.approx(0.75, rel=1e-13)


def test_aw_aq_examples():
    q = 0.4
    assert np.allclose(aw_aq(lambda x: np.ones_like(x), X, q), 1.0)
    assert np.allclose(aw_aq(lambda x: x, X, q), (math.sqrt(q) + 1 / math.sqrt(q)) / 2 * X, rtol=1e-13)
    vals = [aw_aq(lambda x: x, 0.5, q) for q in (0.9, 0.99, 0.999)]
    assert abs(vals[2] - 0.5) < abs(vals[1] - 0.5) < abs(vals[0] - 0.5) < 0.01


def test_aw_product_rule():
    # D_q(fg) = A_q f D_q g + D_q f A_q g
    q = 0.6
    f = lambda x: x**3 - x
    g = lambda x: 2 * x * x + 0.5
    lhs = aw_dq(lambda x: f(x) * g(x), X, q)
    rhs = aw_aq(f, X, q) * aw_dq(g, X, q) + aw_dq(f, X, q) * aw_aq(g, X, q)
    assert np.allclose(lhs, rhs, rtol=1e-12)


def test_asc_lowering():
    # D_q maps p_n(.; t1, t2) to a multiple of p_{n-1}(.; sqrt(q) t1, sqrt(q) t2)
    q, t1, t2 = 0.5, 0.3, 0.4
    lo = family_coeffs("al-salam-chihara", t1=t1, t2=t2, q=q)
    up = family_coeffs("al-salam-chihara", t1=math.sqrt(q) * t1, t2=math.sqrt(q) * t2, q=q)
    for n in range(1, 6):
        d = aw_dq(lambda x: standard_poly(lo, n, x), X, q)
        ratio = d / standard_poly(up, n - 1, X)
        assert np.allclose(ratio, ratio[0], rtol=1e-10)


def test_sinh_dq_on_qhermite():
    q = 0.5
    H = family_coeffs("q-inverse-hermite", q=q)
    h = lambda n: (lambda x: standard_poly(H, n, x))
    assert sinh_dq(lambda x: np.ones_like(x), 0.3, q) == pytest.approx(0.0, abs=1e-14)
    assert sinh_dq(h(1), 0.3, q) == pytest.approx(2.0, rel=1e-13)
    assert sinh_dq(h(2), 0.7, q) == pytest.approx(3 * math.sqrt(2) * 1.4, rel=1e-12)
    for n in range(1, 7):
        c = 2 * (1 - q**n) / (1 - q) * q ** ((1 - n) / 2)
        assert np.allclose(sinh_dq(h(n), X, q), c * h(n - 1)(X), rtol=1e-10, atol=1e-10)


def test_qhermite_double_lowering():
    q = 0.5
    H = family_coeffs("q-inverse-hermite", q=q)
    cn = lambda k: 2 * (1 - q**k) / (1 - q) * q ** ((1 - k) / 2)
    for n in range(5):
        f = lambda x, n=n: standard_poly(H, n, x)
        lhs = sinh_dq(lambda x: sinh_dq(f, x, q), X, q)
        expected = cn(n) * cn(n - 1) * standard_poly(H, n - 2, X) if n >= 2 else np.zeros_like(X)
        assert np.allclose(lhs, expected, rtol=1e-9, atol=1e-9)


def test_sinh_aq_constant():
    assert sinh_aq(lambda x: np.ones_like(x), 0.4, 0.5) == pytest.approx(1.0)


def test_forward_backward_differences():
    f = lambda x: x * x
    assert delta(f, 3) == 7
    assert nabla(f, 3) == 5
    assert delta(lambda x: 4.0, 2) == 0


def test_meixner_difference_equation():
    # c(x+beta) M(x+1) - (x + (x+beta)c) M(x) + x M(x-1) = n(c-1) M(x)
    beta, c, n, x = 2.0, 0.4, 3, 5
    M = lambda t: meixner_hypergeometric(n, t, beta, c)
    lhs = c * (x + beta) * M(x + 1) - (x + (x + beta) * c) * M(x) + x * M(x - 1)
    assert lhs == pytest.approx(n * (c - 1) * M(x), abs=1e-10)
